#include "ela/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace ela::problems {

namespace {

constexpr double kPi = 3.14159265358979323846;

// lambda^alpha: diagonal alpha^(0.5 * i / (d - 1)).
Vector conditioning(double alpha, int d) {
  Vector out(d);
  for (int i = 0; i < d; ++i) out[i] = std::pow(alpha, 0.5 * i / (d - 1));
  return out;
}

double t_osz(double x) {
  if (x == 0.0) return 0.0;
  const double xhat = std::log(std::abs(x));
  const double c1 = x > 0 ? 10.0 : 5.5;
  const double c2 = x > 0 ? 7.9 : 3.1;
  const double sign = x > 0 ? 1.0 : -1.0;
  return sign * std::exp(xhat + 0.049 * (std::sin(c1 * xhat) + std::sin(c2 * xhat)));
}

Vector t_osz(const Vector& x) { return x.unaryExpr([](double v) { return t_osz(v); }); }

Vector t_asy(const Vector& x, double beta) {
  const auto d = x.size();
  Vector out = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (x[i] > 0) out[i] = std::pow(x[i], 1.0 + beta * static_cast<double>(i) / static_cast<double>(d - 1) * std::sqrt(x[i]));
  }
  return out;
}

double boundary_penalty(const Vector& x) {
  double p = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double excess = std::abs(x[i]) - kDomainBound;
    if (excess > 0) p += excess * excess;
  }
  return p;
}

double rastrigin(const Vector& z) {
  const double d = static_cast<double>(z.size());
  double cos_sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) cos_sum += std::cos(2.0 * kPi * z[i]);
  return 10.0 * (d - cos_sum) + z.squaredNorm();
}

double rosenbrock(const Vector& z) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
    const double a = z[i] * z[i] - z[i + 1];
    const double b = z[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double weighted_squares(const Vector& z, double exponent_span) {
  const auto d = z.size();
  double s = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    s += std::pow(10.0, exponent_span * static_cast<double>(i) / static_cast<double>(d - 1)) * z[i] * z[i];
  return s;
}

double rosenbrock_scale(int d) { return std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0); }

Matrix random_rotation(std::mt19937_64& rng, int d) {
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = standard_normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

Vector sign_vector(const Vector& v) {
  return v.unaryExpr([](double x) { return x < 0 ? -1.0 : 1.0; });
}

constexpr double kSchwefelOptimum = 4.2096874633;
constexpr double kLunacekMu0 = 2.5;

}  // namespace

std::string function_name(int function_id) {
  static const std::array<const char*, 26> names{
      "sphere",
      "separable ellipsoidal",
      "Rastrigin",
      "Bueche-Rastrigin",
      "linear slope",
      "attractive sector",
      "step ellipsoidal",
      "Rosenbrock",
      "rotated Rosenbrock",
      "ellipsoidal",
      "discus",
      "bent cigar",
      "sharp ridge",
      "different powers",
      "rotated Rastrigin",
      "Weierstrass",
      "Schaffers F7",
      "ill-conditioned Schaffers F7",
      "composite Griewank-Rosenbrock",
      "Schwefel",
      "Gallagher 101 peaks",
      "Gallagher 21 peaks",
      "Katsuura",
      "Lunacek bi-Rastrigin",
      "HappyCat",
      "HGBat",
  };
  if (function_id < 1 || function_id > 26) return "unknown";
  return names[static_cast<std::size_t>(function_id - 1)];
}

ProblemInstance make_instance(int function_id, int instance_id, int dimension) {
  if (function_id < 1 || function_id > 26)
    fail(ErrorCode::invalid_argument, "function_id must be in 1..26, got " + std::to_string(function_id));
  if (instance_id < 1)
    fail(ErrorCode::invalid_argument, "instance_id must be positive, got " + std::to_string(instance_id));
  if (dimension < 2)
    fail(ErrorCode::invalid_argument, "dimension must be at least 2, got " + std::to_string(dimension));
  if (dimension > kMaxDimension)
    fail(ErrorCode::unsupported, "dimension " + std::to_string(dimension) + " exceeds the supported maximum " +
                                     std::to_string(kMaxDimension));

  ProblemInstance p;
  p.function_id_ = function_id;
  p.instance_id_ = instance_id;
  p.dimension_ = dimension;
  p.rotation_seed_ = derive_seed({static_cast<std::uint64_t>(function_id), static_cast<std::uint64_t>(instance_id)});

  const int d = dimension;
  std::mt19937_64 rng(p.rotation_seed_);

  Vector draw(d);
  for (int i = 0; i < d; ++i) draw[i] = -4.0 + 8.0 * uniform01(rng);
  p.f_shift_ = std::round((-100.0 + 200.0 * uniform01(rng)) * 100.0) / 100.0;
  p.rotation_r_ = random_rotation(rng, d);
  p.rotation_q_ = random_rotation(rng, d);

  Vector xopt = draw;
  switch (function_id) {
    case 4:
      for (int i = 0; i < d; i += 2) xopt[i] = std::abs(xopt[i]);
      break;
    case 5:
      xopt = kDomainBound * sign_vector(draw);
      break;
    case 8:
      xopt *= 0.75;
      break;
    case 9:
    case 19:
      xopt = p.rotation_r_.transpose() * Vector::Constant(d, 0.5 / rosenbrock_scale(d));
      break;
    case 20:
      xopt = 0.5 * kSchwefelOptimum * sign_vector(draw);
      break;
    case 24:
      xopt = 0.5 * kLunacekMu0 * sign_vector(draw);
      break;
    case 21:
    case 22: {
      const bool many = function_id == 21;
      const int n_peaks = many ? 101 : 21;
      const double outer = many ? 5.0 : 4.9;
      const double inner = many ? 4.0 : 3.92;
      xopt = draw * (inner / 4.0);
      p.peaks_.push_back(xopt);
      for (int k = 1; k < n_peaks; ++k) {
        Vector y(d);
        for (int i = 0; i < d; ++i) y[i] = -outer + 2.0 * outer * uniform01(rng);
        p.peaks_.push_back(y);
      }
      p.peak_weights_.push_back(10.0);
      for (int k = 1; k < n_peaks; ++k)
        p.peak_weights_.push_back(1.1 + 8.0 * (k - 1) / static_cast<double>(n_peaks - 2));

      // Condition numbers: the global peak gets the largest, the others a
      // random permutation of a log-spaced ladder.
      std::vector<double> alphas;
      for (int j = 0; j < n_peaks - 1; ++j) alphas.push_back(std::pow(1000.0, 2.0 * j / (n_peaks - 2)));
      for (std::size_t i = alphas.size(); i > 1; --i)
        std::swap(alphas[i - 1], alphas[static_cast<std::size_t>(rng() % i)]);
      alphas.insert(alphas.begin(), many ? 1000.0 : 1.0e6);

      for (int k = 0; k < n_peaks; ++k) {
        const double alpha = alphas[static_cast<std::size_t>(k)];
        Vector diag = conditioning(alpha, d) / std::pow(alpha, 0.25);
        for (int i = d; i > 1; --i) std::swap(diag[i - 1], diag[static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(i))]);
        p.peak_scales_.push_back(std::move(diag));
      }
      break;
    }
    default:
      break;
  }
  p.x_shift_ = std::move(xopt);
  return p;
}

std::pair<Vector, Vector> domain(const ProblemInstance& instance) {
  const int d = instance.dimension();
  return {Vector::Constant(d, -kDomainBound), Vector::Constant(d, kDomainBound)};
}

double ProblemInstance::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension_)
    fail(ErrorCode::invalid_argument, "point has dimension " + std::to_string(x.size()) + ", instance expects " +
                                          std::to_string(dimension_));
  Vector v(dimension_);
  for (int i = 0; i < dimension_; ++i) {
    if (!std::isfinite(x[static_cast<std::size_t>(i)]))
      fail(ErrorCode::invalid_argument, "non-finite coordinate at index " + std::to_string(i));
    v[i] = x[static_cast<std::size_t>(i)];
  }
  return evaluate_unchecked(v);
}

double ProblemInstance::evaluate_unchecked(const Vector& x) const {
  const int d = dimension_;
  const double dd = static_cast<double>(d);
  const Matrix& R = rotation_r_;
  const Matrix& Q = rotation_q_;
  const Vector shifted = x - x_shift_;
  double f = 0.0;

  switch (function_id_) {
    case 1:
      f = shifted.squaredNorm();
      break;
    case 2:
      f = weighted_squares(t_osz(shifted), 6.0);
      break;
    case 3: {
      const Vector z = conditioning(10.0, d).cwiseProduct(t_asy(t_osz(shifted), 0.2));
      f = rastrigin(z);
      break;
    }
    case 4: {
      Vector z = t_osz(shifted);
      for (int i = 0; i < d; ++i) {
        double s = std::pow(10.0, 0.5 * i / (d - 1));
        if (z[i] > 0 && i % 2 == 0) s *= 10.0;
        z[i] *= s;
      }
      f = rastrigin(z) + 100.0 * boundary_penalty(x);
      break;
    }
    case 5: {
      for (int i = 0; i < d; ++i) {
        const double s = (x_shift_[i] < 0 ? -1.0 : 1.0) * std::pow(10.0, static_cast<double>(i) / (d - 1));
        const double z = x_shift_[i] * x[i] < kDomainBound * kDomainBound ? x[i] : x_shift_[i];
        f += 5.0 * std::abs(s) - s * z;
      }
      break;
    }
    case 6: {
      const Vector z = Q * conditioning(10.0, d).asDiagonal() * (R * shifted);
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        const double scale = z[i] * x_shift_[i] > 0 ? 100.0 : 1.0;
        s += (scale * z[i]) * (scale * z[i]);
      }
      f = std::pow(t_osz(s), 0.9);
      break;
    }
    case 7: {
      const Vector zhat = conditioning(10.0, d).asDiagonal() * (R * shifted);
      Vector ztilde(d);
      for (int i = 0; i < d; ++i)
        ztilde[i] = std::abs(zhat[i]) > 0.5 ? std::floor(0.5 + zhat[i]) : std::floor(0.5 + 10.0 * zhat[i]) / 10.0;
      const Vector z = Q * ztilde;
      f = 0.1 * std::max(std::abs(zhat[0]) / 1.0e4, weighted_squares(z, 2.0)) + boundary_penalty(x);
      break;
    }
    case 8:
      f = rosenbrock((rosenbrock_scale(d) * shifted).array() + 1.0);
      break;
    case 9:
      f = rosenbrock((rosenbrock_scale(d) * (R * x)).array() + 0.5);
      break;
    case 10:
      f = weighted_squares(t_osz(R * shifted), 6.0);
      break;
    case 11: {
      const Vector z = t_osz(R * shifted);
      f = 1.0e6 * z[0] * z[0] + z.tail(d - 1).squaredNorm();
      break;
    }
    case 12: {
      const Vector z = R * t_asy(R * shifted, 0.5);
      f = z[0] * z[0] + 1.0e6 * z.tail(d - 1).squaredNorm();
      break;
    }
    case 13: {
      const Vector z = Q * conditioning(10.0, d).asDiagonal() * (R * shifted);
      f = z[0] * z[0] + 100.0 * z.tail(d - 1).norm();
      break;
    }
    case 14: {
      const Vector z = R * shifted;
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += std::pow(std::abs(z[i]), 2.0 + 4.0 * i / (d - 1));
      f = std::sqrt(s);
      break;
    }
    case 15: {
      const Vector z = R * (conditioning(10.0, d).asDiagonal() * (Q * t_asy(t_osz(R * shifted), 0.2)));
      f = rastrigin(z);
      break;
    }
    case 16: {
      const Vector z = R * (conditioning(0.01, d).asDiagonal() * (Q * t_osz(R * shifted)));
      double f0 = 0.0;
      for (int k = 0; k < 12; ++k) f0 += std::pow(0.5, k) * std::cos(kPi * std::pow(3.0, k));
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < 12; ++k) s += std::pow(0.5, k) * std::cos(2.0 * kPi * std::pow(3.0, k) * (z[i] + 0.5));
      const double t = s / dd - f0;
      f = 10.0 * t * t * t + 10.0 / dd * boundary_penalty(x);
      break;
    }
    case 17:
    case 18: {
      const double alpha = function_id_ == 17 ? 10.0 : 1000.0;
      const Vector z = conditioning(alpha, d).asDiagonal() * (Q * t_asy(R * shifted, 0.5));
      double s = 0.0;
      for (int i = 0; i + 1 < d; ++i) {
        const double si = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
        const double root = std::sqrt(si);
        const double sn = std::sin(50.0 * std::pow(si, 0.2));
        s += root + root * sn * sn;
      }
      s /= dd - 1.0;
      f = s * s + 10.0 * boundary_penalty(x);
      break;
    }
    case 19: {
      const Vector z = (rosenbrock_scale(d) * (R * x)).array() + 0.5;
      double s = 0.0;
      for (int i = 0; i + 1 < d; ++i) {
        const double a = z[i] * z[i] - z[i + 1];
        const double b = z[i] - 1.0;
        const double si = 100.0 * a * a + b * b;
        s += si / 4000.0 - std::cos(si);
      }
      f = 10.0 / (dd - 1.0) * s + 10.0;
      break;
    }
    case 20: {
      const Vector signs = sign_vector(x_shift_);
      const Vector two_abs_opt = 2.0 * x_shift_.cwiseAbs();
      const Vector xhat = 2.0 * signs.cwiseProduct(x);
      Vector zhat = xhat;
      for (int i = 1; i < d; ++i) zhat[i] = xhat[i] + 0.25 * (xhat[i - 1] - two_abs_opt[i - 1]);
      const Vector z = 100.0 * (conditioning(10.0, d).cwiseProduct(zhat - two_abs_opt) + two_abs_opt);
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += z[i] * std::sin(std::sqrt(std::abs(z[i])));
      f = -s / (100.0 * dd) + 4.189828872724339 + 100.0 * boundary_penalty(z / 100.0);
      break;
    }
    case 21:
    case 22: {
      double best = 0.0;
      for (std::size_t k = 0; k < peaks_.size(); ++k) {
        const Vector r = R * (x - peaks_[k]);
        const double q = peak_scales_[k].dot(r.cwiseProduct(r));
        best = std::max(best, peak_weights_[k] * std::exp(-q / (2.0 * dd)));
      }
      const double t = t_osz(10.0 - best);
      f = t * t + boundary_penalty(x);
      break;
    }
    case 23: {
      const Vector z = Q * (conditioning(100.0, d).asDiagonal() * (R * shifted));
      double prod = 1.0;
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 1; j <= 32; ++j) {
          const double p2 = std::ldexp(1.0, j);
          s += std::abs(p2 * z[i] - std::nearbyint(p2 * z[i])) / p2;
        }
        prod *= std::pow(1.0 + (i + 1) * s, 10.0 / std::pow(dd, 1.2));
      }
      f = 10.0 / (dd * dd) * prod - 10.0 / (dd * dd) + boundary_penalty(x);
      break;
    }
    case 24: {
      const double mu0 = kLunacekMu0;
      const double s = 1.0 - 1.0 / (2.0 * std::sqrt(dd + 20.0) - 8.2);
      const double mu1 = -std::sqrt((mu0 * mu0 - 1.0) / s);
      const Vector xhat = 2.0 * sign_vector(x_shift_).cwiseProduct(x);
      const Vector z = Q * (conditioning(100.0, d).asDiagonal() * (R * (xhat.array() - mu0).matrix()));
      const double sphere0 = (xhat.array() - mu0).square().sum();
      const double sphere1 = dd + s * (xhat.array() - mu1).square().sum();
      double cos_sum = 0.0;
      for (int i = 0; i < d; ++i) cos_sum += std::cos(2.0 * kPi * z[i]);
      f = std::min(sphere0, sphere1) + 10.0 * (dd - cos_sum) + 1.0e4 * boundary_penalty(x);
      break;
    }
    case kHappyCat: {
      const Vector y = shifted.array() - 1.0;
      const double r2 = y.squaredNorm();
      f = std::pow(std::abs(r2 - dd), 0.25) + (0.5 * r2 + y.sum()) / dd + 0.5;
      break;
    }
    case kHGBat: {
      const Vector y = shifted.array() - 1.0;
      const double r2 = y.squaredNorm();
      const double s = y.sum();
      f = std::sqrt(std::abs(r2 * r2 - s * s)) + (0.5 * r2 + s) / dd + 0.5;
      break;
    }
    default:
      fail(ErrorCode::invalid_argument, "unknown function id " + std::to_string(function_id_));
  }
  return f + f_shift_;
}

}  // namespace ela::problems
