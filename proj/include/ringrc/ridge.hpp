// Ridge-regression readout: normal equations solved with a symmetric
// positive-definite factorization, plus train/evaluate orchestration over
// the ten test subsets.
#pragma once

#include <Eigen/Dense>
#include <iostream>
#include <string>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/metrics.hpp"

namespace ringrc {

// Dense row-major matrix, sized once and filled in place.
struct dmatrix {
  std::vector<double> v;
  std::size_t rows = 0;
  std::size_t cols = 0;

  dmatrix() = default;
  dmatrix(std::size_t r, std::size_t c) : v(r * c), rows(r), cols(c) {}
  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

// State matrix rows with a trailing constant-one column for the intercept.
inline dmatrix with_bias_column(const std::vector<double>& features, std::size_t rows,
                                std::size_t cols) {
  if (features.size() != rows * cols)
    throw config_error("feature buffer size does not match rows * cols");
  dmatrix x(rows, cols + 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) x.at(r, c) = features[r * cols + c];
    x.at(r, cols) = 1.0;
  }
  return x;
}

struct readout_weights {
  std::vector<double> w;
  double regularization = 0.0;
  std::string task_id;
};

using eigen_cmap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Solves (X^T X + lambda I) w = X^T y. With lambda = 0 a singular system is
// refused rather than pseudo-inverted.
inline readout_weights ridge_fit(const dmatrix& x, const std::vector<double>& y, double lambda) {
  if (x.rows != y.size()) throw config_error("ridge_fit: row count does not match target length");
  if (x.rows == 0 || x.cols == 0) throw config_error("ridge_fit: empty design matrix");
  if (!(lambda >= 0.0)) throw config_error("ridge_fit: regularization must be >= 0");
  if (x.rows < x.cols)
    std::cerr << "warning: ridge fit with fewer rows (" << x.rows << ") than columns (" << x.cols
              << ")\n";

  eigen_cmap xm(x.v.data(), static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(x.cols));
  Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
  Eigen::MatrixXd a = xm.transpose() * xm;
  a.diagonal().array() += lambda;
  Eigen::VectorXd b = xm.transpose() * ym;
  Eigen::VectorXd w = a.ldlt().solve(b);

  double residual = (a * w - b).norm();
  // negated comparison so a NaN residual (non-finite inputs) also fails
  if (!(residual <= 1e-8 * b.norm())) {
    if (lambda == 0.0)
      throw regularization_required(
          "normal equations are singular at lambda = 0; set a positive regularization");
    throw regularization_required("normal equations solve failed the residual check");
  }
  readout_weights out;
  out.regularization = lambda;
  out.w.assign(w.data(), w.data() + w.size());
  return out;
}

inline std::vector<double> predict(const dmatrix& x, const readout_weights& wt) {
  if (wt.w.size() != x.cols) throw config_error("predict: weight length does not match columns");
  std::vector<double> p(x.rows, 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < x.cols; ++c) acc += x.at(r, c) * wt.w[c];
    p[r] = acc;
  }
  return p;
}

struct trained_readout {
  readout_weights weights;
  metric_report report;
  double train_metric = 0.0;
};

// Fits on the first train_rows rows and scores the remaining rows in
// `subsets` equal consecutive test subsets (any remainder rows are unused).
inline trained_readout train_and_evaluate(const dmatrix& x, const std::vector<double>& y,
                                          std::size_t train_rows, double lambda,
                                          const std::string& metric, std::size_t subsets = 10) {
  if (train_rows == 0 || train_rows >= x.rows)
    throw config_error("training split must leave test rows");
  if (subsets == 0) throw config_error("subset count must be > 0");
  const std::size_t test_rows = x.rows - train_rows;
  const std::size_t per = test_rows / subsets;
  if (per == 0)
    throw config_error("test split too short for " + std::to_string(subsets) + " subsets");

  dmatrix xtr(train_rows, x.cols);
  std::copy(x.v.begin(), x.v.begin() + static_cast<std::ptrdiff_t>(train_rows * x.cols),
            xtr.v.begin());
  std::vector<double> ytr(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(train_rows));

  trained_readout out;
  out.weights = ridge_fit(xtr, ytr, lambda);
  out.train_metric = evaluate_metric(metric, predict(xtr, out.weights), ytr);

  std::vector<double> values(subsets);
  for (std::size_t s = 0; s < subsets; ++s) {
    const std::size_t r0 = train_rows + s * per;
    dmatrix xs(per, x.cols);
    std::copy(x.v.begin() + static_cast<std::ptrdiff_t>(r0 * x.cols),
              x.v.begin() + static_cast<std::ptrdiff_t>((r0 + per) * x.cols), xs.v.begin());
    std::vector<double> ys(y.begin() + static_cast<std::ptrdiff_t>(r0),
                           y.begin() + static_cast<std::ptrdiff_t>(r0 + per));
    values[s] = evaluate_metric(metric, predict(xs, out.weights), ys);
  }
  out.report = summarize_subsets(metric, std::move(values));
  return out;
}

}  // namespace ringrc
