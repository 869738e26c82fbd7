#include "latprof/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "latprof/rng.hpp"

namespace latprof {

namespace {

constexpr int kLloydMaxIter = 300;

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, int K, Rng& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centroids(K, points.cols());
  centroids.row(0) = points.row(rng.uniform_index(static_cast<int>(n)));

  Eigen::VectorXd d2 =
      (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < K; ++k) {
    Eigen::Index pick;
    if (d2.sum() > 0.0) {
      pick = rng.categorical(d2);
    } else {
      pick = rng.uniform_index(static_cast<int>(n));
    }
    centroids.row(k) = points.row(pick);
    d2 = d2.cwiseMin(
        (points.rowwise() - centroids.row(k)).rowwise().squaredNorm());
  }
  return centroids;
}

struct LloydResult {
  std::vector<int> assignments;  // 0-based here
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

LloydResult lloyd(const Eigen::MatrixXd& points, int K, Rng& rng) {
  const Eigen::Index n = points.rows();
  LloydResult res;
  res.centroids = kmeanspp_init(points, K, rng);
  res.assignments.assign(n, -1);

  Eigen::VectorXd nearest_d2(n);
  bool converged = false;
  for (int iter = 0; iter < kLloydMaxIter && !converged; ++iter) {
    // Assignment step.
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (int k = 0; k < K; ++k) {
        const double d2 = (points.row(i) - res.centroids.row(k)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = k;
        }
      }
      nearest_d2[i] = best_d2;
      if (res.assignments[i] != best) {
        res.assignments[i] = best;
        changed = true;
      }
    }

    // Repair empty clusters by reseeding from the farthest point. Donors are
    // restricted to clusters with at least two members, which always exist by
    // pigeonhole while an empty cluster remains and n >= K.
    std::vector<int> counts(K, 0);
    for (int a : res.assignments) ++counts[a];
    for (int k = 0; k < K; ++k) {
      if (counts[k] > 0) continue;
      Eigen::Index far = -1;
      double far_d2 = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[res.assignments[i]] < 2) continue;
        if (nearest_d2[i] > far_d2) {
          far_d2 = nearest_d2[i];
          far = i;
        }
      }
      counts[res.assignments[far]]--;
      res.assignments[far] = k;
      counts[k] = 1;
      res.centroids.row(k) = points.row(far);
      nearest_d2[far] = 0.0;
      changed = true;
    }

    res.inertia = nearest_d2.sum();
    res.trace.push_back(res.inertia);
    if (!changed) {
      converged = true;
      break;
    }

    // Update step.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.assignments[i]) += points.row(i);
    }
    for (int k = 0; k < K; ++k) {
      res.centroids.row(k) = sums.row(k) / counts[k];
    }
  }

  if (!converged) {
    // Hit the iteration cap after a centroid update: refresh the inertia
    // against the final centroids.
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      inertia +=
          (points.row(i) - res.centroids.row(res.assignments[i])).squaredNorm();
    }
    res.inertia = inertia;
    res.trace.push_back(inertia);
  }
  return res;
}

}  // namespace

HardClustering kmeans(const Eigen::MatrixXd& points, int K, int restarts,
                      std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (K < 1) {
    throw ValidationError("kmeans: K must be >= 1");
  }
  if (n < K) {
    throw ValidationError("kmeans: " + std::to_string(n) + " points for K = " +
                          std::to_string(K));
  }
  if (restarts < 1) restarts = 1;

  LloydResult best;
  int best_restart = -1;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    LloydResult run = lloyd(points, K, rng);
    if (best_restart < 0 || run.inertia < best.inertia) {
      best = std::move(run);
      best_restart = r;
    }
  }

  HardClustering out;
  out.assignments.reserve(n);
  for (int a : best.assignments) out.assignments.push_back(a + 1);
  out.centroids = std::move(best.centroids);
  out.inertia = best.inertia;
  out.restarts_used = restarts;
  out.inertia_trace = std::move(best.trace);
  return out;
}

SoftClustering fuzzy_cmeans(const Eigen::MatrixXd& points, int K, double m,
                            double tol, int max_iter, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (K < 1 || n < K) {
    throw ValidationError("fuzzy_cmeans: need N >= K >= 1");
  }
  if (!(m > 1.0)) {
    throw ValidationError("fuzzy_cmeans: fuzzifier must exceed 1");
  }

  Rng rng(seed);
  SoftClustering out;
  out.fuzzifier = m;
  out.membership.resize(n, K);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.membership.row(i) = rng.dirichlet(K).transpose();
  }
  out.centroids.resize(K, points.cols());

  const double expo = 2.0 / (m - 1.0);
  Eigen::MatrixXd dist(n, K);
  for (out.n_iter = 1; out.n_iter <= max_iter; ++out.n_iter) {
    // Centroids from fuzzified memberships.
    const Eigen::MatrixXd um = out.membership.array().pow(m).matrix();
    for (int k = 0; k < K; ++k) {
      const double w = um.col(k).sum();
      if (w > 0.0) {
        out.centroids.row(k) = (um.col(k).transpose() * points) / w;
      }
      // w == 0 can only happen when every point sits exactly on some other
      // centroid; the previous centroid is kept in that case.
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      for (int k = 0; k < K; ++k) {
        dist(i, k) = (points.row(i) - out.centroids.row(k)).norm();
      }
    }

    // Membership update; exact-zero distances take the limit rule.
    double step = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::RowVectorXd u(K);
      int zeros = 0;
      for (int k = 0; k < K; ++k) {
        if (dist(i, k) == 0.0) ++zeros;
      }
      if (zeros > 0) {
        for (int k = 0; k < K; ++k) {
          u[k] = dist(i, k) == 0.0 ? 1.0 / zeros : 0.0;
        }
      } else {
        for (int k = 0; k < K; ++k) {
          double denom = 0.0;
          for (int j = 0; j < K; ++j) {
            denom += std::pow(dist(i, k) / dist(i, j), expo);
          }
          u[k] = 1.0 / denom;
        }
        u /= u.sum();  // remove accumulated rounding, keep the row on the simplex
      }
      step = std::max(step, (u - out.membership.row(i)).cwiseAbs().maxCoeff());
      out.membership.row(i) = u;
    }

    if (step < tol) {
      out.converged = true;
      break;
    }
  }
  out.n_iter = std::min(out.n_iter, max_iter);
  return out;
}

std::vector<int> size_ordered_relabeling(const std::vector<int>& labels,
                                         int K) {
  std::vector<int> counts(K, 0);
  for (int a : labels) {
    if (a < 1 || a > K) {
      throw ValidationError("size_ordered_relabeling: label out of range");
    }
    ++counts[a - 1];
  }
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });
  std::vector<int> map(K);
  for (int rank = 0; rank < K; ++rank) map[order[rank]] = rank + 1;
  return map;
}

std::vector<int> harden(const SoftClustering& soft) {
  std::vector<int> labels;
  labels.reserve(soft.membership.rows());
  for (Eigen::Index i = 0; i < soft.membership.rows(); ++i) {
    int best = 0;
    for (int k = 1; k < soft.membership.cols(); ++k) {
      if (soft.membership(i, k) > soft.membership(i, best)) best = k;
    }
    labels.push_back(best + 1);
  }
  return labels;
}

SilhouetteResult silhouette(const Eigen::MatrixXd& points,
                            const std::vector<int>& assignments) {
  const Eigen::Index n = points.rows();
  if (static_cast<Eigen::Index>(assignments.size()) != n) {
    throw ValidationError("silhouette: assignment length mismatch");
  }
  int K = 0;
  for (int a : assignments) K = std::max(K, a);
  if (K < 2) {
    throw ValidationError("silhouette: need at least 2 clusters");
  }
  std::vector<int> counts(K, 0);
  for (int a : assignments) {
    if (a < 1 || a > K) throw ValidationError("silhouette: label out of range");
    ++counts[a - 1];
  }
  for (int k = 0; k < K; ++k) {
    if (counts[k] == 0) {
      throw ValidationError("silhouette: cluster " + std::to_string(k + 1) +
                            " is empty");
    }
  }

  SilhouetteResult res;
  res.scores.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = assignments[i] - 1;
    if (counts[own] == 1) {
      res.scores[i] = 0.0;  // singleton convention
      continue;
    }
    Eigen::VectorXd mean_dist = Eigen::VectorXd::Zero(K);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_dist[assignments[j] - 1] += (points.row(i) - points.row(j)).norm();
    }
    for (int k = 0; k < K; ++k) {
      mean_dist[k] /= (k == own) ? (counts[k] - 1) : counts[k];
    }
    const double a = mean_dist[own];
    double b = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      if (k != own) b = std::min(b, mean_dist[k]);
    }
    const double denom = std::max(a, b);
    res.scores[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  res.mean = res.scores.mean();
  return res;
}

}  // namespace latprof
