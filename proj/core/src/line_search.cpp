#include "cfw/line_search.hpp"

#include <algorithm>
#include <cmath>

#include "cfw/error.hpp"

namespace cfw {

namespace {

void check_inputs(const Objective& obj, const Vector& x, const Vector& d, double gamma_max) {
  if (x.size() != obj.dimension() || d.size() != obj.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "line search vectors have wrong length");
  }
  require_finite(x, "line search point");
  require_finite(d, "line search direction");
  if (!(gamma_max > 0.0) || !std::isfinite(gamma_max)) {
    throw Error(ErrorCode::InvalidArgument, "gamma_max must be positive and finite");
  }
}

}  // namespace

double exact_quadratic_line_search(const QuadraticObjective& obj, const Vector& x, const Vector& d,
                                   double gamma_max, const Vector* gradient_at_x) {
  check_inputs(obj, x, d, gamma_max);
  const double slope = gradient_at_x ? gradient_at_x->dot(d) : obj.gradient(x).dot(d);
  const double curvature = d.dot(obj.apply(d));
  if (curvature <= 1e-14 * d.squaredNorm()) {
    return slope <= 0.0 ? 0.0 : gamma_max;
  }
  return std::clamp(slope / curvature, 0.0, gamma_max);
}

double secant_line_search(const Objective& obj, const Vector& x, const Vector& d, double gamma_max,
                          const Vector* gradient_at_x) {
  check_inputs(obj, x, d, gamma_max);
  auto dphi = [&](double gamma) { return -obj.gradient(x - gamma * d).dot(d); };

  const double d0 = gradient_at_x ? -gradient_at_x->dot(d) : dphi(0.0);
  if (d0 >= 0.0) return 0.0;
  const double d1 = dphi(gamma_max);
  if (d1 <= 0.0) return gamma_max;

  const double tol = 1e-10 * (1.0 + std::abs(d0));
  double lo = 0.0, hi = gamma_max;
  double dlo = d0, dhi = d1;
  for (int iter = 0; iter < 40; ++iter) {
    double gamma = lo - dlo * (hi - lo) / (dhi - dlo);
    const double width = hi - lo;
    if (!std::isfinite(gamma) || gamma <= lo + 0.01 * width || gamma >= hi - 0.01 * width) {
      gamma = 0.5 * (lo + hi);
    }
    const double dg = dphi(gamma);
    if (std::abs(dg) <= tol) return gamma;
    if (dg < 0.0) {
      lo = gamma;
      dlo = dg;
    } else {
      hi = gamma;
      dhi = dg;
    }
  }
  if (hi == gamma_max) return lo;
  return std::abs(dlo) <= std::abs(dhi) ? lo : hi;
}

double line_search(const Objective& obj, const Vector& x, const Vector& d, double gamma_max,
                   const Vector* gradient_at_x) {
  if (const auto* q = obj.as_quadratic()) {
    return exact_quadratic_line_search(*q, x, d, gamma_max, gradient_at_x);
  }
  return secant_line_search(obj, x, d, gamma_max, gradient_at_x);
}

}  // namespace cfw
