#include "latprof/pca.hpp"

#include <cmath>

namespace latprof {

namespace {

// Eigenvalues whose ratio to the largest falls below this are treated as
// exact zeros (rank decisions and variance fractions).
constexpr double kRankTol = 1e-10;

Eigen::MatrixXd standardized_retained(const PcaModel& model,
                                      const FeatureMatrix& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = static_cast<Eigen::Index>(model.retained_cols.size());
  Eigen::MatrixXd Z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    Z.col(j) = (X.values.col(model.retained_cols[j]).array() - model.center[j]) /
               model.scale[j];
  }
  return Z;
}

}  // namespace

int PcaModel::rank() const {
  int r = 0;
  for (Eigen::Index i = 0; i < variance_explained.size(); ++i) {
    if (variance_explained[i] > 0.0) ++r;
  }
  return r;
}

PcaModel fit_pca(const FeatureMatrix& X, bool scale_unit_variance) {
  const Eigen::Index n = X.rows();
  if (n < 2) {
    throw ValidationError("fit_pca: need at least 2 rows");
  }

  PcaModel model;
  model.scaled = scale_unit_variance;

  // Drop constant columns; the leading 1s column always goes here.
  std::vector<double> means, sds;
  for (int j = 0; j < FeatureMatrix::kNumColumns; ++j) {
    const auto col = X.values.col(j);
    const double mu = col.mean();
    const double var = (col.array() - mu).square().sum() / (n - 1);
    const double sd = std::sqrt(var);
    if (sd > 1e-12 * std::max(1.0, std::abs(mu))) {
      model.retained_cols.push_back(j);
      means.push_back(mu);
      sds.push_back(sd);
    }
  }
  if (model.retained_cols.empty()) {
    throw DegenerateInputError("fit_pca: all feature columns are constant");
  }

  const Eigen::Index p = static_cast<Eigen::Index>(model.retained_cols.size());
  model.center = Eigen::Map<Eigen::VectorXd>(means.data(), p);
  model.scale = scale_unit_variance
                    ? Eigen::Map<Eigen::VectorXd>(sds.data(), p).eval()
                    : Eigen::VectorXd::Ones(p).eval();

  const Eigen::MatrixXd Z = standardized_retained(model, X);
  const Eigen::MatrixXd cov = Z.transpose() * Z / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw DegenerateInputError("fit_pca: eigendecomposition failed");
  }

  // Eigen returns ascending eigenvalues; flip to descending.
  Eigen::VectorXd eigvals = solver.eigenvalues().reverse();
  Eigen::MatrixXd eigvecs = solver.eigenvectors().rowwise().reverse();

  // Clip numerically-zero (or slightly negative) eigenvalues to exact zero.
  const double lambda_max = std::max(eigvals[0], 0.0);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (eigvals[i] < lambda_max * kRankTol) eigvals[i] = 0.0;
  }

  // Sign convention: largest-magnitude loading entry positive per component.
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index imax = 0;
    eigvecs.col(j).cwiseAbs().maxCoeff(&imax);
    if (eigvecs(imax, j) < 0.0) eigvecs.col(j) = -eigvecs.col(j);
  }

  model.loadings = eigvecs;
  model.variance_explained = eigvals / eigvals.sum();
  model.scores = Z * eigvecs;
  return model;
}

ScreeTable scree(const PcaModel& model) {
  ScreeTable table;
  table.fractions = model.variance_explained;
  table.cumulative.resize(table.fractions.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < table.fractions.size(); ++i) {
    acc += table.fractions[i];
    table.cumulative[i] = acc;
  }
  return table;
}

Eigen::MatrixXd project(const PcaModel& model, const FeatureMatrix& X, int k) {
  if (k < 1 || k > model.rank()) {
    throw ValidationError("project: k = " + std::to_string(k) +
                          " outside 1..rank (rank = " +
                          std::to_string(model.rank()) + ")");
  }
  for (int j : model.retained_cols) {
    if (j >= FeatureMatrix::kNumColumns) {
      throw ValidationError("project: model/feature-matrix layout mismatch");
    }
  }
  const Eigen::MatrixXd Z = standardized_retained(model, X);
  return Z * model.loadings.leftCols(k);
}

}  // namespace latprof
