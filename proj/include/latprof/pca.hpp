#ifndef LATPROF_PCA_HPP
#define LATPROF_PCA_HPP

#include <Eigen/Dense>

#include <vector>

#include "latprof/features.hpp"

namespace latprof {

struct PcaModel {
  std::vector<int> retained_cols;      // feature-matrix columns kept (constant
                                       // columns, incl. the leading 1s, drop)
  Eigen::VectorXd center;              // per retained column
  Eigen::VectorXd scale;               // per retained column (1s if unscaled)
  Eigen::MatrixXd loadings;            // p x p orthonormal, columns = components
  Eigen::MatrixXd scores;              // N x p training scores
  Eigen::VectorXd variance_explained;  // nonincreasing fractions, sum 1
  bool scaled = true;

  // Number of components with nonzero variance.
  int rank() const;
};

// Eigendecomposition of the covariance (or, with scale_unit_variance, the
// correlation) matrix of the non-constant feature columns. Columns are always
// centered. Component signs are fixed so each loading's largest-magnitude
// entry is positive, making the output reproducible across runs and platforms.
PcaModel fit_pca(const FeatureMatrix& X, bool scale_unit_variance = true);

struct ScreeTable {
  Eigen::VectorXd fractions;
  Eigen::VectorXd cumulative;
};

ScreeTable scree(const PcaModel& model);

// Scores of X on the first k components, using the stored center and scale.
Eigen::MatrixXd project(const PcaModel& model, const FeatureMatrix& X, int k);

}  // namespace latprof

#endif  // LATPROF_PCA_HPP
