#include "ela/features.hpp"

#include <algorithm>
#include <cmath>

namespace ela::features {

namespace {

struct Fit {
  Vector coefficients;
  double adj_r2;
};

Fit least_squares(const Matrix& design, const Vector& y, const char* model) {
  const auto n = design.rows();
  const auto p = design.cols() - 1;  // predictors, intercept excluded
  if (n <= design.cols())
    fail(ErrorCode::invalid_argument, std::string("ela_meta ") + model + ": needs more samples than coefficients");
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < design.cols())
    fail(ErrorCode::rank_deficient, std::string("ela_meta ") + model + ": design matrix is rank deficient");
  Fit fit;
  fit.coefficients = qr.solve(y);
  const double ss_res = (y - design * fit.coefficients).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  if (!(ss_tot > 0.0)) fail(ErrorCode::degenerate_sample, std::string("ela_meta ") + model + ": constant fitness");
  const double r2 = 1.0 - ss_res / ss_tot;
  const double nd = static_cast<double>(n);
  fit.adj_r2 = 1.0 - (1.0 - r2) * (nd - 1.0) / (nd - static_cast<double>(p) - 1.0);
  return fit;
}

Matrix design_matrix(const Matrix& x, bool squares, bool interactions) {
  const auto n = x.rows();
  const auto d = x.cols();
  const auto cols = 1 + d + (squares ? d : 0) + (interactions ? d * (d - 1) / 2 : 0);
  Matrix m(n, cols);
  m.col(0).setOnes();
  m.middleCols(1, d) = x;
  Eigen::Index c = 1 + d;
  if (squares) {
    m.middleCols(c, d) = x.array().square().matrix();
    c += d;
  }
  if (interactions) {
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i + 1; j < d; ++j) m.col(c++) = x.col(i).cwiseProduct(x.col(j));
  }
  return m;
}

// max/min of absolute coefficients. Coefficients below 1e-12 of `scale` count
// as zero; the minimum is floored there, and all-zero gives 1.
double spread_ratio(const Vector& magnitudes, double scale) {
  const double tol = 1e-12 * scale;
  const double hi = magnitudes.maxCoeff();
  if (!(hi > tol)) return 1.0;
  return hi / std::max(magnitudes.minCoeff(), tol);
}

}  // namespace

MetaModelFeatures meta_model(const sampling::Sample& sample) {
  const Matrix& x = sample.points;
  const Vector& y = sample.fitness;
  const auto d = x.cols();

  MetaModelFeatures out{};
  const Fit linear = least_squares(design_matrix(x, false, false), y, "lin_simple");
  const Vector slopes = linear.coefficients.tail(d).cwiseAbs();
  out.lin_simple_adj_r2 = linear.adj_r2;
  out.lin_simple_intercept = linear.coefficients[0];
  out.lin_simple_coef_min = slopes.minCoeff();
  out.lin_simple_coef_max = slopes.maxCoeff();
  out.lin_simple_coef_max_by_min = spread_ratio(slopes, slopes.maxCoeff());

  out.lin_w_interact_adj_r2 = least_squares(design_matrix(x, false, true), y, "lin_w_interact").adj_r2;

  const Fit quadratic = least_squares(design_matrix(x, true, false), y, "quad_simple");
  const Vector quad_terms = quadratic.coefficients.segment(1 + d, d).cwiseAbs();
  out.quad_simple_adj_r2 = quadratic.adj_r2;
  out.quad_simple_cond = spread_ratio(quad_terms, quadratic.coefficients.tail(2 * d).cwiseAbs().maxCoeff());

  out.quad_w_interact_adj_r2 = least_squares(design_matrix(x, true, true), y, "quad_w_interact").adj_r2;
  return out;
}

}  // namespace ela::features
