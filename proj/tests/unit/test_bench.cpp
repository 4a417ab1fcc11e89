#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cfw/error.hpp"
#include "cfw/libsvm.hpp"
#include "cfw/problems.hpp"
#include "cfw/run_config.hpp"
#include "cfw/runner.hpp"
#include "cfw/trace_io.hpp"
#include "oracles.hpp"

using namespace cfw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cfw_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string drop_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    out += line.substr(0, a) + line.substr(b) + "\n";
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Generators, KSparseDeterministicAndExpanded) {
  const auto a = gen_ksparse_regression(50, 500, 5, 1.0, 42);
  const auto b = gen_ksparse_regression(50, 500, 5, 1.0, 42);
  EXPECT_EQ(a.design, b.design);
  EXPECT_EQ(a.response, b.response);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const Vector x = oracle::random_vector(50, rng);
    const Vector direct = 2.0 * a.design.transpose() * (a.design * x - a.response);
    EXPECT_LE((a.objective->gradient(x) - direct).norm(), 1e-9 * direct.norm());
    EXPECT_NEAR(a.objective->value(x), (a.design * x - a.response).squaredNorm(),
                1e-9 * (a.design * x - a.response).squaredNorm());
  }
}

TEST(Generators, BirkhoffProjection) {
  const auto a = gen_birkhoff_projection(30, 7);
  EXPECT_EQ(a.target, gen_birkhoff_projection(30, 7).target);
  EXPECT_GE(a.target.minCoeff(), 0.0);
  EXPECT_LE(a.target.maxCoeff(), 1.0);
  const Vector x = Vector::Constant(900, 1.0 / 30);
  const Matrix xm = Matrix::Constant(30, 30, 1.0 / 30);
  EXPECT_NEAR(a.objective->value(x), (xm - a.target).squaredNorm() / 900.0, 1e-12);
}

TEST(Generators, BirkhoffBallSampleCount) {
  EXPECT_EQ(birkhoff_ball_sample_count(300, 0.1), 32);
  EXPECT_THROW(birkhoff_ball_sample_count(10, 0.0), Error);
  EXPECT_THROW(birkhoff_ball_sample_count(10, 1.0), Error);
}

TEST(Generators, SplitBirkhoffBallRegimes) {
  const auto near = gen_split_birkhoff_ball(10, 0.9, 0.1, 1.0, 3);
  EXPECT_EQ(near.sampled_vertices, birkhoff_ball_sample_count(10, 0.1));
  EXPECT_EQ(near.problem.blocks.size(), 2u);
  EXPECT_TRUE(near.problem.weights.isApprox(Eigen::Vector2d(0.5, 0.5)));
  const auto face = gen_split_birkhoff_ball(10, 0.0, 0.1, 1.0, 3);
  EXPECT_NEAR(face.ball->radius(), 1.0, 0.0);
  // c = 0: center is an average of vertices, so inside the polytope
  EXPECT_NEAR(face.ball->center().sum(), 10.0, 1e-9);
  EXPECT_GE(face.ball->center().minCoeff(), 0.0);
}

TEST(Generators, LogisticSynthetic) {
  const auto p = gen_logistic_synthetic(50, 200, 11);
  EXPECT_EQ(p.flipped_labels, 20);
  const double positive = (p.objective->labels().array() > 0).cast<double>().mean();
  EXPECT_GE(positive, 0.3);
  EXPECT_LE(positive, 0.7);
  EXPECT_EQ(p.objective->features(), gen_logistic_synthetic(50, 200, 11).objective->features());
}

TEST(Config, ParseAndOverride) {
  auto c = parse_config("# comment\nproblem = birkhoff_projection\nn = 12\nseed=5\n\ncorrector = qc_lp\n");
  EXPECT_EQ(c.problem, ProblemKind::BirkhoffProjection);
  EXPECT_EQ(c.n, 12);
  EXPECT_EQ(c.seed, 5u);
  apply_setting(c, "n=20");
  EXPECT_EQ(c.n, 20);
  EXPECT_THROW(parse_config("bogus = 1\n"), Error);
  EXPECT_THROW(parse_config("n = abc\n"), Error);
  EXPECT_THROW(apply_setting(c, "no_equals"), Error);
}

TEST(Config, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  c.algorithm = AlgorithmKind::Scg;
  EXPECT_THROW(validate(c), Error);
  c = RunConfig{};
  c.n = 0;
  EXPECT_THROW(validate(c), Error);
  c = RunConfig{};
  c.problem = ProblemKind::LogisticSocgs;
  c.corrector = CorrectorKind::QcLp;
  EXPECT_THROW(validate(c), Error);
  c.algorithm = AlgorithmKind::Socgs;
  EXPECT_NO_THROW(validate(c));
}

TEST(Trace, RoundTrip) {
  std::vector<TraceRecord> records(3);
  records[0] = {0, 0.0, 1.5, 0.25, 1, StepKind::FrankWolfe, 1, std::nan(""), std::nan("")};
  records[1] = {1, 0.001, 1.0 / 3.0, 1e-300, 2, StepKind::Descent, 2, 0.125, -2.0};
  records[2] = {2, 0.002, 0.1, std::numeric_limits<double>::infinity(), 2, StepKind::Stop, 2, 1.0, 0.0};
  std::ostringstream out;
  write_trace(out, records);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kTraceHeader);
  std::istringstream in(out.str());
  const auto back = read_trace(in);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].iteration, records[i].iteration);
    EXPECT_EQ(back[i].primal, records[i].primal);
    EXPECT_EQ(back[i].fw_gap, records[i].fw_gap);
    EXPECT_EQ(back[i].step_kind, records[i].step_kind);
    EXPECT_EQ(back[i].lmo_calls, records[i].lmo_calls);
    EXPECT_EQ(std::isnan(back[i].extra1), std::isnan(records[i].extra1));
  }
  EXPECT_TRUE(validate_trace(back).empty());
}

TEST(Trace, RejectsMalformed) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_trace(bad_header), Error);
  std::istringstream bad_row(std::string(kTraceHeader) + "\n0,0,1,1,1,FW,1,nan\n");
  try {
    read_trace(bad_row);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::vector<TraceRecord> no_stop(1);
  no_stop[0].active_set_size = 1;
  EXPECT_FALSE(validate_trace(no_stop).empty());
}

TEST(Libsvm, ToyFiles) {
  const auto d = parse_libsvm("+1 1:0.5 3:2\n0 2:1\n");
  EXPECT_EQ(d.features.rows(), 2);
  EXPECT_EQ(d.features.cols(), 3);
  EXPECT_EQ(d.labels, Eigen::Vector2d(1, -1));
  const auto one = parse_libsvm("+1 3:0.5\n");
  EXPECT_EQ(one.features.row(0), Eigen::RowVector3d(0, 0, 0.5));
}

TEST(Libsvm, Errors) {
  auto code_of = [](const std::string& text) {
    try {
      parse_libsvm(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of("+1 1:0.5\n+1 x:1\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("+1 2:1 1:1\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("3 1:1\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("# only comments\n\n"), ErrorCode::EmptyDataset);
  try {
    load_libsvm("/nonexistent/file.svm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  try {
    parse_libsvm("+1 1:1\n-1 1:z\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Libsvm, WriteReadRoundTrip) {
  const auto p = gen_logistic_synthetic(6, 25, 2);
  const auto path = scratch("roundtrip.svm");
  write_libsvm(path.string(), p.objective->features(), p.objective->labels());
  const auto back = logistic_from_libsvm(load_libsvm(path.string()));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Vector x = oracle::random_vector(6, rng);
    EXPECT_EQ(back->value(x), p.objective->value(x));
  }
}

TEST(Runner, EveryProblemAlgorithmPair) {
  const std::vector<std::string> configs = {
      "problem=ksparse_regression\nalgorithm=cfw\ncorrector=qc_mnp\n",
      "problem=ksparse_regression\nalgorithm=lcfw\n",
      "problem=birkhoff_projection\nn=8\ncorrector=qc_lp\n",
      "problem=custom\nn=20\n",
      "problem=split_birkhoff_ball\nalgorithm=scg\nn=6\nmax_iterations=100\n",
      "problem=split_birkhoff_ball\nalgorithm=scg\nblock_update=vanilla\nschedule=original\nn=6\nmax_iterations=100\n",
      "problem=alm_intersection\nalgorithm=alm\nn=3\nc=3\n",
      "problem=logistic_socgs\nalgorithm=socgs\nn=20\nm=80\ncorrector=qc_mnp\n",
      "problem=logistic_socgs\nalgorithm=lcfw\nn=20\nm=80\n",
  };
  int i = 0;
  for (const auto& text : configs) {
    RunConfig c = parse_config(text);
    c.output_path = scratch("run" + std::to_string(i++) + ".csv").string();
    std::ostringstream out, err;
    const int code = run(c, out, err);
    EXPECT_TRUE(code == 0 || code == 2) << text << err.str();
    EXPECT_NE(out.str().find("primal="), std::string::npos);
    EXPECT_TRUE(validate_trace(read_trace_file(c.output_path)).empty()) << text;
  }
}

TEST(Runner, DeterministicTraces) {
  RunConfig c = parse_config("problem=ksparse_regression\ncorrector=qc_mnp\nseed=9\n");
  std::ostringstream out, err;
  c.output_path = scratch("det_a.csv").string();
  run(c, out, err);
  c.output_path = scratch("det_b.csv").string();
  run(c, out, err);
  EXPECT_EQ(drop_elapsed(slurp(scratch("det_a.csv"))), drop_elapsed(slurp(scratch("det_b.csv"))));
}

TEST(Runner, InvalidCombinationFailsBeforeCompute) {
  RunConfig c;
  c.algorithm = AlgorithmKind::Alm;
  c.output_path = scratch("never.csv").string();
  fs::remove(c.output_path);
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 1);
  EXPECT_FALSE(err.str().empty());
  EXPECT_TRUE(out.str().empty());
  EXPECT_FALSE(fs::exists(c.output_path));
}

TEST(Runner, BudgetExhaustedIsExitTwo) {
  RunConfig c = parse_config("problem=birkhoff_projection\nn=10\nmax_iterations=2\ngap_tolerance=0\n");
  c.output_path = scratch("budget.csv").string();
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 2);
}
