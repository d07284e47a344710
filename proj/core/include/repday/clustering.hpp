#ifndef REPDAY_CLUSTERING_HPP
#define REPDAY_CLUSTERING_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "repday/timeseries.hpp"

namespace repday {

class TooFewPeriodsError : public std::runtime_error {
 public:
  explicit TooFewPeriodsError(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatchError : public std::runtime_error {
 public:
  explicit DimensionMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct KMeansConfig {
  int k = 5;
  int n_init = 10000;   // independent restarts; best SSD wins
  int max_iter = 300;   // Lloyd iteration cap per restart
  double tol = 1e-8;    // stop when no centroid coordinate moves more than this
  std::uint64_t seed = 0;
  int n_threads = 0;    // 0 = hardware concurrency; result independent of the value
};

struct ClusterResult {
  std::vector<std::vector<double>> centroids;  // k vectors, normalized space
  std::vector<int> assignments;                // period -> cluster index
  std::vector<int> counts;                     // N_j, members per cluster
  std::vector<double> weights;                 // w_j = N_j / N, sums to 1
  double ssd = 0.0;

  // Diagnostics of the winning restart.
  int best_restart = -1;
  int iterations = 0;
};

/// Nearest-centroid assignment by squared Euclidean distance.
/// Ties break to the lowest centroid index.
std::vector<int> assign(const std::vector<std::vector<double>>& points,
                        const std::vector<std::vector<double>>& centroids);

/// Centroid j = arithmetic mean of points assigned to j. An empty cluster is
/// re-seeded with the point farthest from its own cluster's mean (ties to the
/// lowest point index; repeated repairs pick distinct points).
std::vector<std::vector<double>> update_centroids(const std::vector<std::vector<double>>& points,
                                                  const std::vector<int>& assignments, int k);

/// Total sum of squared Euclidean distances of each point to its centroid.
double compute_ssd(const std::vector<std::vector<double>>& points,
                   const std::vector<std::vector<double>>& centroids,
                   const std::vector<int>& assignments);

/// One Lloyd run from the given initial centroids; exposed so the
/// SSD-monotonicity property is testable in isolation.
struct LloydResult {
  std::vector<std::vector<double>> centroids;
  std::vector<int> assignments;
  std::vector<double> ssd_trace;  // SSD after each assign+update step; non-increasing
  int iterations = 0;
  bool converged = false;
};
LloydResult lloyd(const std::vector<std::vector<double>>& points,
                  std::vector<std::vector<double>> initial_centroids, int max_iter, double tol);

/// Flattens periods to attribute-major vectors (all rows must agree in shape).
std::vector<std::vector<double>> periods_to_matrix(const std::vector<Period>& periods);

/// Multi-start k-means: n_init Forgy initializations, restart r drawing from
/// a stream derived as seed xor r, minimum-SSD winner, ties to the lowest
/// restart index. Restarts run concurrently; the reduction is deterministic
/// regardless of thread count or completion order.
ClusterResult kmeans_multistart(const std::vector<Period>& periods, const KMeansConfig& config);

/// Convenience overload on pre-flattened vectors.
ClusterResult kmeans_multistart(const std::vector<std::vector<double>>& points,
                                const KMeansConfig& config);

}  // namespace repday

#endif  // REPDAY_CLUSTERING_HPP
