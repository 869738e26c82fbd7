#ifndef LATPROF_CLUSTERING_HPP
#define LATPROF_CLUSTERING_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "latprof/types.hpp"

namespace latprof {

struct HardClustering {
  std::vector<int> assignments;        // labels in 1..K, every label used
  Eigen::MatrixXd centroids;           // K x d
  double inertia = 0.0;                // within-cluster sum of squares
  int restarts_used = 0;
  std::vector<double> inertia_trace;   // winning restart, one entry per Lloyd
                                       // iteration, nonincreasing
};

struct SoftClustering {
  Eigen::MatrixXd membership;  // N x K rows on the probability simplex
  Eigen::MatrixXd centroids;   // K x d
  double fuzzifier = 2.0;
  int n_iter = 0;
  bool converged = false;
};

// Lloyd's algorithm from k-means++ starts; best of `restarts` runs by inertia
// (ties to the earlier restart). Empty clusters are repaired by reseeding from
// the point farthest from its assigned centroid. Deterministic given seed.
HardClustering kmeans(const Eigen::MatrixXd& points, int K, int restarts,
                      std::uint64_t seed);

// Standard fuzzy c-means: alternate membership and centroid updates until the
// largest membership change drops below tol. A point coincident with a
// centroid takes full membership there (the m -> limit of the update).
SoftClustering fuzzy_cmeans(const Eigen::MatrixXd& points, int K, double m,
                            double tol, int max_iter, std::uint64_t seed);

// Row-argmax hardening of a soft clustering, ties to the lower cluster index.
std::vector<int> harden(const SoftClustering& soft);

// Reporting order for raw cluster labels when no domain coordinate is
// available: larger clusters first, ties by the original label. Returns the
// old-to-new map (1-based): new_label = map[old_label - 1].
std::vector<int> size_ordered_relabeling(const std::vector<int>& labels, int K);

struct SilhouetteResult {
  Eigen::VectorXd scores;  // per point
  double mean = 0.0;
};

// Classic silhouette with Euclidean distance; singleton clusters score 0, as
// do points with zero separation and cohesion.
SilhouetteResult silhouette(const Eigen::MatrixXd& points,
                            const std::vector<int>& assignments);

}  // namespace latprof

#endif  // LATPROF_CLUSTERING_HPP
