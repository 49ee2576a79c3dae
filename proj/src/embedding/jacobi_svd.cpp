#include "ela/embedding.hpp"

#include "double_double.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace ela::embedding {

namespace {

constexpr int kMaxSweeps = 80;
// Relative orthogonality target. Column dot products carry rounding of about
// rows * 2^-106, so this stays well above the noise for any sane size.
constexpr double kOrthogonalityTolerance = 1e-28;

using detail::dd;

// Column-major rows x cols block of double-double values.
struct DdMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<dd> data;

  DdMatrix(Eigen::Index r, Eigen::Index c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c)) {}
  dd* col(Eigen::Index j) { return data.data() + j * rows; }
  const dd* col(Eigen::Index j) const { return data.data() + j * rows; }
};

dd dot(const dd* a, const dd* b, Eigen::Index n) {
  dd s;
  for (Eigen::Index i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void rotate(dd* x, dd* y, Eigen::Index n, dd c, dd s) {
  for (Eigen::Index i = 0; i < n; ++i) {
    const dd xp = x[i];
    const dd yq = y[i];
    x[i] = c * xp - s * yq;
    y[i] = s * xp + c * yq;
  }
}

// Hestenes iteration on a tall matrix: rotate column pairs of `w` until all
// pairs are numerically orthogonal, accumulating the rotations in `v`.
void orthogonalize_columns(DdMatrix& w, DdMatrix& v) {
  const auto n = w.cols;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const dd alpha = dot(w.col(p), w.col(p), w.rows);
        const dd beta = dot(w.col(q), w.col(q), w.rows);
        const dd gamma = dot(w.col(p), w.col(q), w.rows);
        if (alpha.hi == 0.0 || beta.hi == 0.0) continue;
        if (std::abs(gamma.hi) <= kOrthogonalityTolerance * std::sqrt(alpha.hi) * std::sqrt(beta.hi)) continue;
        rotated = true;
        const dd zeta = (beta - alpha) / (dd(2.0) * gamma);
        const double sign = zeta.hi >= 0 ? 1.0 : -1.0;
        const dd t = std::abs(zeta.hi) > 1e100 ? dd(0.5) / zeta
                                                : dd(sign) / (detail::abs(zeta) + detail::sqrt(dd(1.0) + zeta * zeta));
        const dd c = dd(1.0) / detail::sqrt(dd(1.0) + t * t);
        const dd s = c * t;
        rotate(w.col(p), w.col(q), w.rows, c, s);
        rotate(v.col(p), v.col(q), v.rows, c, s);
      }
    }
    if (!rotated) return;
  }
  warn("Jacobi SVD did not fully converge in " + std::to_string(kMaxSweeps) + " sweeps");
}

// Fills columns flagged in `missing` with unit vectors orthogonal to the rest.
void complete_basis(Matrix& u, const std::vector<bool>& missing) {
  const auto m = u.rows();
  Eigen::Index candidate = 0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    if (!missing[static_cast<std::size_t>(j)]) continue;
    for (; candidate < m; ++candidate) {
      Vector e = Vector::Unit(m, candidate);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index k = 0; k < u.cols(); ++k)
          if (k != j && (!missing[static_cast<std::size_t>(k)] || k < j)) e -= u.col(k).dot(e) * u.col(k);
      const double norm = e.norm();
      if (norm > 1e-8) {
        u.col(j) = e / norm;
        ++candidate;
        break;
      }
    }
  }
}

void store(dd value, Matrix& hi, Matrix& lo, Eigen::Index i, Eigen::Index j) {
  hi(i, j) = value.hi;
  lo(i, j) = value.lo;
}

Svd tall_svd(const Matrix& a) {
  const auto m = a.rows();
  const auto n = a.cols();
  DdMatrix w(m, n);
  DdMatrix v(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) w.col(j)[i] = dd(a(i, j));
    v.col(j)[j] = dd(1.0);
  }
  orthogonalize_columns(w, v);

  std::vector<dd> norms(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) norms[static_cast<std::size_t>(j)] = detail::sqrt(dot(w.col(j), w.col(j), m));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const dd& nx = norms[static_cast<std::size_t>(x)];
    const dd& ny = norms[static_cast<std::size_t>(y)];
    return nx.hi > ny.hi || (nx.hi == ny.hi && nx.lo > ny.lo);
  });

  Svd out;
  out.u = Matrix::Zero(m, n);
  out.u_lo = Matrix::Zero(m, n);
  out.v.resize(n, n);
  out.v_lo.resize(n, n);
  out.sigma.resize(n);
  out.sigma_lo.resize(n);
  std::vector<bool> missing(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index j = order[static_cast<std::size_t>(k)];
    const dd norm = norms[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) store(v.col(j)[i], out.v, out.v_lo, i, k);
    if (norm.hi > std::numeric_limits<double>::min()) {
      out.sigma[k] = norm.hi;
      out.sigma_lo[k] = norm.lo;
      for (Eigen::Index i = 0; i < m; ++i) store(w.col(j)[i] / norm, out.u, out.u_lo, i, k);
    } else {
      out.sigma[k] = 0.0;
      out.sigma_lo[k] = 0.0;
      missing[static_cast<std::size_t>(k)] = true;
    }
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) complete_basis(out.u, missing);
  return out;
}

void normalize_signs(Svd& svd) {
  for (Eigen::Index k = 0; k < svd.v.cols(); ++k) {
    Eigen::Index arg = 0;
    svd.v.col(k).cwiseAbs().maxCoeff(&arg);
    if (svd.v(arg, k) < 0) {
      svd.v.col(k) *= -1.0;
      svd.u.col(k) *= -1.0;
      svd.v_lo.col(k) *= -1.0;
      svd.u_lo.col(k) *= -1.0;
    }
  }
}

}  // namespace

Svd jacobi_svd(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) fail(ErrorCode::invalid_argument, "SVD of an empty matrix");
  Svd out;
  if (a.rows() >= a.cols()) {
    out = tall_svd(a);
  } else {
    Svd t = tall_svd(a.transpose());
    out.u = std::move(t.v);
    out.v = std::move(t.u);
    out.sigma = std::move(t.sigma);
    out.u_lo = std::move(t.v_lo);
    out.v_lo = std::move(t.u_lo);
    out.sigma_lo = std::move(t.sigma_lo);
  }
  normalize_signs(out);
  return out;
}

}  // namespace ela::embedding
