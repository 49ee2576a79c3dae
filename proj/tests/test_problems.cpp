#include "doctest.h"
#include "support.hpp"

#include "ela/problems.hpp"
#include "ela/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

using namespace ela;
using problems::make_instance;

namespace {

Vector random_point(std::mt19937_64& rng, int d, double bound = 5.0) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = -bound + 2.0 * bound * uniform01(rng);
  return x;
}

// --- formula oracles, written from the textbook definitions -----------------

double oracle_sphere(const problems::ProblemInstance& p, const Vector& x) {
  double s = 0.0;
  for (int i = 0; i < p.dimension(); ++i) s += (x[i] - p.x_shift()[i]) * (x[i] - p.x_shift()[i]);
  return s + p.f_shift();
}

double oracle_linear_slope(const problems::ProblemInstance& p, const Vector& x) {
  const int d = p.dimension();
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double xo = p.x_shift()[i];
    const double si = std::copysign(std::pow(10.0, static_cast<double>(i) / (d - 1)), xo);
    const double zi = xo * x[i] < 25.0 ? x[i] : xo;
    s += 5.0 * std::abs(si) - si * zi;
  }
  return s + p.f_shift();
}

double oracle_rosenbrock(const problems::ProblemInstance& p, const Vector& x) {
  const int d = p.dimension();
  const double c = std::max(1.0, std::sqrt(d) / 8.0);
  std::vector<double> z(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(i)] = c * (x[i] - p.x_shift()[i]) + 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i)
    s += 100.0 * std::pow(z[i] * z[i] - z[i + 1], 2) + std::pow(z[i] - 1.0, 2);
  return s + p.f_shift();
}

double oracle_tosz(double v) {
  if (v == 0.0) return 0.0;
  const double h = std::log(std::abs(v));
  const double c1 = v > 0 ? 10.0 : 5.5;
  const double c2 = v > 0 ? 7.9 : 3.1;
  return (v > 0 ? 1.0 : -1.0) * std::exp(h + 0.049 * (std::sin(c1 * h) + std::sin(c2 * h)));
}

double oracle_ellipsoid(const problems::ProblemInstance& p, const Vector& x) {
  const int d = p.dimension();
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double zi = 0.0;
    for (int j = 0; j < d; ++j) zi += p.rotation_r()(i, j) * (x[j] - p.x_shift()[j]);
    zi = oracle_tosz(zi);
    s += std::pow(1e6, static_cast<double>(i) / (d - 1)) * zi * zi;
  }
  return s + p.f_shift();
}

double oracle_happycat(const problems::ProblemInstance& p, const Vector& x) {
  const double n = p.dimension();
  double norm2 = 0.0, sum = 0.0;
  for (int i = 0; i < p.dimension(); ++i) {
    const double y = x[i] - p.x_shift()[i] - 1.0;
    norm2 += y * y;
    sum += y;
  }
  return std::pow(std::abs(norm2 - n), 1.0 / 4.0) + (norm2 / 2.0 + sum) / n + 0.5 + p.f_shift();
}

double oracle_hgbat(const problems::ProblemInstance& p, const Vector& x) {
  const double n = p.dimension();
  double norm2 = 0.0, sum = 0.0;
  for (int i = 0; i < p.dimension(); ++i) {
    const double y = x[i] - p.x_shift()[i] - 1.0;
    norm2 += y * y;
    sum += y;
  }
  return std::pow(std::abs(norm2 * norm2 - sum * sum), 1.0 / 2.0) + (norm2 / 2.0 + sum) / n + 0.5 + p.f_shift();
}

// Compass search with step halving; returns the best value found.
double compass_search(const problems::ProblemInstance& p, Vector x) {
  double fx = p.evaluate(x);
  double step = 1.0;
  int evals = 0;
  while (step > 1e-12 && evals < 200000) {
    bool improved = false;
    for (int i = 0; i < p.dimension() && !improved; ++i) {
      for (const double dir : {1.0, -1.0}) {
        Vector y = x;
        y[i] = std::clamp(y[i] + dir * step, -5.0, 5.0);
        const double fy = p.evaluate(y);
        ++evals;
        if (fy < fx) {
          x = y;
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return fx;
}

}  // namespace

TEST_CASE("make_instance validates its arguments") {
  CHECK_THROWS_AS(make_instance(0, 1, 5), Error);
  CHECK_THROWS_AS(make_instance(27, 1, 5), Error);
  CHECK_THROWS_AS(make_instance(1, 0, 5), Error);
  CHECK_THROWS_AS(make_instance(1, 1, 1), Error);
  try {
    make_instance(1, 1, problems::kMaxDimension + 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported);
  }
  try {
    make_instance(27, 1, 5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
  CHECK_NOTHROW(make_instance(24, 5, 5));
  CHECK_NOTHROW(make_instance(26, 1, 2));
}

TEST_CASE("instances are deterministic and shifts stay inside the domain") {
  for (int f = 1; f <= 26; ++f) {
    for (int i = 1; i <= 5; ++i) {
      const auto a = make_instance(f, i, 5);
      const auto b = make_instance(f, i, 5);
      CHECK(a.x_shift() == b.x_shift());
      CHECK(a.f_shift() == b.f_shift());
      CHECK(a.rotation_r() == b.rotation_r());
      CHECK(a.rotation_q() == b.rotation_q());
      CHECK(a.rotation_seed() == b.rotation_seed());
      CHECK(a.x_shift().cwiseAbs().maxCoeff() <= 5.0);
      CHECK(std::abs(a.f_shift()) <= 100.0);
      CHECK(std::abs(a.f_shift() * 100.0 - std::round(a.f_shift() * 100.0)) < 1e-6);
    }
  }
  // different instances really differ
  CHECK(make_instance(1, 1, 5).x_shift() != make_instance(1, 2, 5).x_shift());
}

TEST_CASE("rotations are orthogonal") {
  const auto p = make_instance(10, 3, 7);
  const Matrix& r = p.rotation_r();
  const Matrix& q = p.rotation_q();
  CHECK((r.transpose() * r - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((q.transpose() * q - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("every function attains f_shift at x_shift") {
  for (const int d : {2, 5, 10}) {
    for (int f = 1; f <= 26; ++f) {
      for (int i = 1; i <= 3; ++i) {
        const auto p = make_instance(f, i, d);
        const double value = p.evaluate(p.x_shift());
        INFO("f" << f << " i" << i << " d" << d);
        CHECK(value == doctest::Approx(p.f_shift()).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("no sampled point beats the optimum") {
  std::mt19937_64 rng(7);
  for (int f = 1; f <= 26; ++f) {
    for (int i = 1; i <= 2; ++i) {
      const auto p = make_instance(f, i, 5);
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 2000; ++k) best = std::min(best, p.evaluate(random_point(rng, 5)));
      INFO("f" << f << " i" << i);
      CHECK(best >= p.f_shift() - 1e-6);
    }
  }
}

TEST_CASE("translated formulas match independent oracles") {
  std::mt19937_64 rng(11);
  for (int i = 1; i <= 5; ++i) {
    for (const int d : {2, 5, 9}) {
      const auto f1 = make_instance(1, i, d);
      const auto f5 = make_instance(5, i, d);
      const auto f8 = make_instance(8, i, d);
      const auto f10 = make_instance(10, i, d);
      const auto f25 = make_instance(problems::kHappyCat, i, d);
      const auto f26 = make_instance(problems::kHGBat, i, d);
      for (int k = 0; k < 50; ++k) {
        const Vector x = random_point(rng, d);
        CHECK(f1.evaluate(x) == doctest::Approx(oracle_sphere(f1, x)).epsilon(1e-12));
        CHECK(f5.evaluate(x) == doctest::Approx(oracle_linear_slope(f5, x)).epsilon(1e-12));
        CHECK(f8.evaluate(x) == doctest::Approx(oracle_rosenbrock(f8, x)).epsilon(1e-12));
        CHECK(f10.evaluate(x) == doctest::Approx(oracle_ellipsoid(f10, x)).epsilon(1e-10));
        CHECK(f25.evaluate(x) == doctest::Approx(oracle_happycat(f25, x)).epsilon(1e-12));
        CHECK(f26.evaluate(x) == doctest::Approx(oracle_hgbat(f26, x)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("linear slope is flat beyond the optimum corner") {
  const auto p = make_instance(5, 1, 5);
  Vector outside = p.x_shift() * 1.5;
  CHECK(p.evaluate(outside) == doctest::Approx(p.f_shift()));
}

TEST_CASE("sphere with a hand-placed point") {
  const auto p = make_instance(1, 1, 5);
  Vector x = p.x_shift();
  x[0] += 2.0;
  x[3] -= 1.0;
  CHECK(p.evaluate(x) == doctest::Approx(p.f_shift() + 5.0).epsilon(1e-14));
}

TEST_CASE("HappyCat and HGBat minima confirmed by restarted local search") {
  for (const int fid : {problems::kHappyCat, problems::kHGBat}) {
    const auto p = make_instance(fid, 1, 2);
    std::mt19937_64 rng(fid);
    double best = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 100; ++restart) {
      const double found = compass_search(p, random_point(rng, 2));
      CHECK(found >= p.f_shift() - 1e-12);
      best = std::min(best, found);
    }
    INFO("function " << fid);
    CHECK(best - p.f_shift() < 1e-3);
    CHECK(p.evaluate(p.x_shift()) == doctest::Approx(p.f_shift()).epsilon(1e-14));
  }
}

TEST_CASE("evaluation is bit-identical across calls") {
  std::mt19937_64 rng(3);
  for (int f = 1; f <= 26; ++f) {
    const auto p = make_instance(f, 2, 5);
    const Vector x = random_point(rng, 5);
    const double a = p.evaluate(x);
    const double b = make_instance(f, 2, 5).evaluate(x);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
}

TEST_CASE("evaluation rejects bad points") {
  const auto p = make_instance(3, 1, 5);
  CHECK_THROWS_AS(p.evaluate(Vector::Zero(4)), Error);
  Vector x = Vector::Zero(5);
  x[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.evaluate(x), Error);
  x[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(p.evaluate(x), Error);
}

TEST_CASE("outside the box the formula value is returned") {
  const auto p = make_instance(1, 1, 3);
  const Vector x = Vector::Constant(3, 8.0);
  CHECK(std::isfinite(p.evaluate(x)));
  CHECK(p.evaluate(x) == doctest::Approx(oracle_sphere(p, x)));
}

TEST_CASE("domain is the shared box") {
  for (const int d : {2, 5}) {
    const auto [lo, hi] = problems::domain(make_instance(4, 1, d));
    CHECK(lo.size() == d);
    CHECK(hi.size() == d);
    CHECK(lo == Vector::Constant(d, -5.0));
    CHECK(hi == Vector::Constant(d, 5.0));
  }
  CHECK(problems::domain(make_instance(1, 1, 5)).first == problems::domain(make_instance(22, 4, 5)).first);
}

TEST_CASE("all 120 suite instances are finite on a 1250-point Sobol design") {
  for (int f = 1; f <= 24; ++f) {
    for (int i = 1; i <= 5; ++i) {
      const auto p = make_instance(f, i, 5);
      const auto s = sampling::build_design(p, sampling::Sampler::sobol, 1250, 17);
      INFO("f" << f << " i" << i);
      CHECK(s.fitness.allFinite());
    }
  }
}

TEST_CASE("function names") {
  CHECK(problems::function_name(1) == "sphere");
  CHECK(problems::function_name(25) == "HappyCat");
  CHECK(problems::function_name(26) == "HGBat");
}
