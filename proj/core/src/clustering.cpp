#include "repday/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

namespace repday {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void check_matrix(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw TooFewPeriodsError("no periods to cluster");
  for (const auto& p : points) {
    if (p.size() != points.front().size() || p.empty()) {
      throw DimensionMismatchError("period vectors disagree in dimension");
    }
  }
}

/// Fills empty clusters by reassigning points; only steals from clusters with
/// at least two members so no new empty cluster appears. Then recomputes
/// exact means so the result satisfies the centroid-equals-member-mean and
/// no-empty-cluster invariants.
void finalize_partition(const std::vector<std::vector<double>>& points,
                        const std::vector<std::vector<double>>& reference_centroids, int k,
                        std::vector<int>& assignments,
                        std::vector<std::vector<double>>& centroids, std::vector<int>& counts) {
  const int n = static_cast<int>(points.size());
  assignments = assign(points, reference_centroids);
  counts.assign(static_cast<size_t>(k), 0);
  for (int a : assignments) counts[static_cast<size_t>(a)] += 1;
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<size_t>(c)] > 0) continue;
    int best_point = -1;
    double best_dist = -1.0;
    for (int i = 0; i < n; ++i) {
      if (counts[static_cast<size_t>(assignments[i])] < 2) continue;
      const double d = sq_dist(points[i], reference_centroids[static_cast<size_t>(assignments[i])]);
      if (d > best_dist) {
        best_dist = d;
        best_point = i;
      }
    }
    // A donor always exists: fewer non-empty clusters than points implies
    // some cluster holds at least two members.
    counts[static_cast<size_t>(assignments[best_point])] -= 1;
    assignments[best_point] = c;
    counts[static_cast<size_t>(c)] += 1;
  }
  centroids = update_centroids(points, assignments, k);
}

struct RestartOutcome {
  double ssd = std::numeric_limits<double>::infinity();
  int restart = -1;
  int iterations = 0;
  std::vector<int> assignments;
  std::vector<std::vector<double>> centroids;
  std::vector<int> counts;

  bool better_than(const RestartOutcome& other) const {
    return ssd < other.ssd || (ssd == other.ssd && restart < other.restart);
  }
};

}  // namespace

std::vector<int> assign(const std::vector<std::vector<double>>& points,
                        const std::vector<std::vector<double>>& centroids) {
  check_matrix(points);
  if (centroids.empty()) throw DimensionMismatchError("no centroids");
  for (const auto& c : centroids) {
    if (c.size() != points.front().size()) {
      throw DimensionMismatchError("centroid dimension does not match points");
    }
  }
  std::vector<int> out(points.size(), 0);
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& x = points[i];
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (size_t c = 0; c < centroids.size(); ++c) {
      const auto& ctr = centroids[c];
      double d = 0.0;
      for (size_t j = 0; j < x.size(); ++j) {
        const double t = x[j] - ctr[j];
        d += t * t;
        if (d >= best) break;  // cannot win; ties keep the lower index anyway
      }
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    out[i] = best_c;
  }
  return out;
}

std::vector<std::vector<double>> update_centroids(const std::vector<std::vector<double>>& points,
                                                  const std::vector<int>& assignments, int k) {
  check_matrix(points);
  if (assignments.size() != points.size()) {
    throw DimensionMismatchError("assignment length does not match point count");
  }
  const size_t dim = points.front().size();
  std::vector<std::vector<double>> centroids(static_cast<size_t>(k),
                                             std::vector<double>(dim, 0.0));
  std::vector<int> counts(static_cast<size_t>(k), 0);
  for (size_t i = 0; i < points.size(); ++i) {
    const int a = assignments[i];
    if (a < 0 || a >= k) throw DimensionMismatchError("cluster index out of range");
    counts[static_cast<size_t>(a)] += 1;
    for (size_t j = 0; j < dim; ++j) centroids[static_cast<size_t>(a)][j] += points[i][j];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<size_t>(c)] == 0) continue;
    for (size_t j = 0; j < dim; ++j) {
      centroids[static_cast<size_t>(c)][j] /= static_cast<double>(counts[static_cast<size_t>(c)]);
    }
  }
  // Empty-cluster repair: re-seed with the point farthest from its own
  // cluster's fresh mean; repeated repairs use distinct points.
  std::vector<bool> used(points.size(), false);
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<size_t>(c)] > 0) continue;
    int best_point = -1;
    double best_dist = -1.0;
    for (size_t i = 0; i < points.size(); ++i) {
      if (used[i]) continue;
      const double d = sq_dist(points[i], centroids[static_cast<size_t>(assignments[i])]);
      if (d > best_dist) {
        best_dist = d;
        best_point = static_cast<int>(i);
      }
    }
    if (best_point < 0) break;  // more empty clusters than points; caller validated k <= n
    used[static_cast<size_t>(best_point)] = true;
    centroids[static_cast<size_t>(c)] = points[static_cast<size_t>(best_point)];
  }
  return centroids;
}

double compute_ssd(const std::vector<std::vector<double>>& points,
                   const std::vector<std::vector<double>>& centroids,
                   const std::vector<int>& assignments) {
  check_matrix(points);
  if (assignments.size() != points.size()) {
    throw DimensionMismatchError("assignment length does not match point count");
  }
  double total = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const int a = assignments[i];
    if (a < 0 || a >= static_cast<int>(centroids.size())) {
      throw DimensionMismatchError("cluster index out of range");
    }
    total += sq_dist(points[i], centroids[static_cast<size_t>(a)]);
  }
  return total;
}

LloydResult lloyd(const std::vector<std::vector<double>>& points,
                  std::vector<std::vector<double>> initial_centroids, int max_iter, double tol) {
  check_matrix(points);
  const int k = static_cast<int>(initial_centroids.size());
  LloydResult r;
  r.centroids = std::move(initial_centroids);
  for (int it = 0; it < max_iter; ++it) {
    r.assignments = assign(points, r.centroids);
    std::vector<std::vector<double>> next = update_centroids(points, r.assignments, k);
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      for (size_t j = 0; j < next[static_cast<size_t>(c)].size(); ++j) {
        shift = std::max(shift, std::abs(next[static_cast<size_t>(c)][j] -
                                         r.centroids[static_cast<size_t>(c)][j]));
      }
    }
    r.centroids = std::move(next);
    r.ssd_trace.push_back(compute_ssd(points, r.centroids, r.assignments));
    r.iterations = it + 1;
    if (shift <= tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

std::vector<std::vector<double>> periods_to_matrix(const std::vector<Period>& periods) {
  std::vector<std::vector<double>> out;
  out.reserve(periods.size());
  for (const Period& p : periods) out.push_back(period_to_vector(p));
  check_matrix(out);
  return out;
}

ClusterResult kmeans_multistart(const std::vector<Period>& periods, const KMeansConfig& config) {
  return kmeans_multistart(periods_to_matrix(periods), config);
}

ClusterResult kmeans_multistart(const std::vector<std::vector<double>>& points,
                                const KMeansConfig& config) {
  check_matrix(points);
  if (config.k < 1) throw std::invalid_argument("k must be >= 1");
  if (config.n_init < 1) throw std::invalid_argument("n_init must be >= 1");
  if (config.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(config.tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  const int n = static_cast<int>(points.size());
  const int k = config.k;
  if (n < k) {
    throw TooFewPeriodsError("cannot form " + std::to_string(k) + " clusters from " +
                             std::to_string(n) + " periods");
  }

  const auto run_restart = [&](int restart, std::vector<int>& scratch_idx) {
    RestartOutcome out;
    out.restart = restart;
    // Forgy: k distinct periods drawn from the restart's own seed stream.
    std::uint64_t state = config.seed ^ static_cast<std::uint64_t>(restart);
    scratch_idx.resize(static_cast<size_t>(n));
    std::iota(scratch_idx.begin(), scratch_idx.end(), 0);
    std::vector<std::vector<double>> init;
    init.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(n - i));
      std::swap(scratch_idx[static_cast<size_t>(i)], scratch_idx[static_cast<size_t>(j)]);
      init.push_back(points[static_cast<size_t>(scratch_idx[static_cast<size_t>(i)])]);
    }
    LloydResult lr = lloyd(points, std::move(init), config.max_iter, config.tol);
    out.iterations = lr.iterations;
    finalize_partition(points, lr.centroids, k, out.assignments, out.centroids, out.counts);
    out.ssd = compute_ssd(points, out.centroids, out.assignments);
    return out;
  };

  unsigned hw = std::thread::hardware_concurrency();
  int n_threads = config.n_threads > 0 ? config.n_threads : static_cast<int>(hw ? hw : 1);
  n_threads = std::min(n_threads, config.n_init);

  std::vector<RestartOutcome> thread_best(static_cast<size_t>(n_threads));
  const auto worker = [&](int t) {
    std::vector<int> scratch;
    RestartOutcome best;
    for (int r = t; r < config.n_init; r += n_threads) {
      RestartOutcome out = run_restart(r, scratch);
      if (out.better_than(best)) best = std::move(out);
    }
    thread_best[static_cast<size_t>(t)] = std::move(best);
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  // Deterministic reduction: (ssd, restart index) lexicographic minimum, so
  // the winner does not depend on the thread partition.
  RestartOutcome best;
  for (auto& cand : thread_best) {
    if (cand.restart >= 0 && cand.better_than(best)) best = std::move(cand);
  }

  ClusterResult result;
  result.centroids = std::move(best.centroids);
  result.assignments = std::move(best.assignments);
  result.counts = std::move(best.counts);
  result.weights.reserve(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) {
    result.weights.push_back(static_cast<double>(result.counts[static_cast<size_t>(c)]) /
                             static_cast<double>(n));
  }
  result.ssd = best.ssd;
  result.best_restart = best.restart;
  result.iterations = best.iterations;
  return result;
}

}  // namespace repday
