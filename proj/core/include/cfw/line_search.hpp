#pragma once

#include "cfw/objectives.hpp"

/// Step sizes along x - gamma * d for gamma in [0, gamma_max]. A result equal
/// to gamma_max is returned exactly so callers can detect a binding cap.
namespace cfw {

double exact_quadratic_line_search(const QuadraticObjective& obj, const Vector& x, const Vector& d,
                                   double gamma_max, const Vector* gradient_at_x = nullptr);

double secant_line_search(const Objective& obj, const Vector& x, const Vector& d, double gamma_max,
                          const Vector* gradient_at_x = nullptr);

/// Exact search for quadratics, secant search otherwise.
double line_search(const Objective& obj, const Vector& x, const Vector& d, double gamma_max,
                   const Vector* gradient_at_x = nullptr);

}  // namespace cfw
