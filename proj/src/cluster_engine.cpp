#include "statarb/cluster_engine.hpp"

#include <algorithm>
#include <limits>

namespace statarb {

std::vector<int> ClusterAssignment::cluster_sizes() const {
  std::vector<int> sizes(static_cast<size_t>(K), 0);
  for (int l : labels) sizes[static_cast<size_t>(l)]++;
  return sizes;
}

namespace {

double sqdist(const Matrix& pts, int i, const Matrix& centroids, int c) {
  return (pts.row(i) - centroids.row(c)).squaredNorm();
}

Matrix kmeanspp_init(const Matrix& pts, int K, std::mt19937_64& rng) {
  const int n = static_cast<int>(pts.rows());
  Matrix centroids(K, pts.cols());
  std::uniform_int_distribution<int> first(0, n - 1);
  centroids.row(0) = pts.row(first(rng));
  Vector d2(n);
  for (int i = 0; i < n; ++i) d2(i) = (pts.row(i) - centroids.row(0)).squaredNorm();
  for (int c = 1; c < K; ++c) {
    double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = first(rng);  // all remaining mass at existing centers (duplicate points)
    } else {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2(i);
        if (r <= acc) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = pts.row(pick);
    for (int i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i), (pts.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

struct RestartResult {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

RestartResult run_restart(const Matrix& pts, int K, std::uint64_t sub_seed) {
  const int n = static_cast<int>(pts.rows());
  auto rng = make_rng(sub_seed);
  Matrix centroids = kmeanspp_init(pts, K, rng);
  std::vector<int> labels(static_cast<size_t>(n), -1);
  RestartResult res;

  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sqdist(pts, i, centroids, 0);
      for (int c = 1; c < K; ++c) {
        double d = sqdist(pts, i, centroids, c);
        if (d < best_d) {  // strict: ties stay with the lower index
          best_d = d;
          best = c;
        }
      }
      if (labels[static_cast<size_t>(i)] != best) changed = true;
      labels[static_cast<size_t>(i)] = best;
    }

    std::vector<int> sizes(static_cast<size_t>(K), 0);
    for (int l : labels) sizes[static_cast<size_t>(l)]++;
    for (int e = 0; e < K; ++e) {
      if (sizes[static_cast<size_t>(e)] > 0) continue;
      // Steal the point farthest from its centroid (from a cluster of >= 2).
      int worst = -1;
      double worst_d = -1.0;
      for (int i = 0; i < n; ++i) {
        int l = labels[static_cast<size_t>(i)];
        if (sizes[static_cast<size_t>(l)] < 2) continue;
        double d = sqdist(pts, i, centroids, l);
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      if (worst < 0) continue;  // only singletons left; cluster stays empty
      sizes[static_cast<size_t>(labels[static_cast<size_t>(worst)])]--;
      labels[static_cast<size_t>(worst)] = e;
      sizes[static_cast<size_t>(e)] = 1;
      centroids.row(e) = pts.row(worst);
      changed = true;
    }

    // Centroid update: mean of members.
    Matrix sums = Matrix::Zero(K, pts.cols());
    for (int i = 0; i < n; ++i) sums.row(labels[static_cast<size_t>(i)]) += pts.row(i);
    for (int c = 0; c < K; ++c) {
      if (sizes[static_cast<size_t>(c)] > 0) {
        centroids.row(c) = sums.row(c) / sizes[static_cast<size_t>(c)];
      }
    }

    double inertia = 0.0;
    for (int i = 0; i < n; ++i) inertia += sqdist(pts, i, centroids, labels[static_cast<size_t>(i)]);
    if (!res.trace.empty() && inertia > res.trace.back() + 1e-9 * (1.0 + res.trace.back())) {
      throw std::logic_error("kmeans: inertia increased across a Lloyd iteration");
    }
    res.trace.push_back(inertia);
    res.inertia = inertia;
    if (!changed) break;
  }
  res.labels = std::move(labels);
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace

namespace detail {
std::vector<double> kmeans_inertia_trace(const Matrix& points, int K, std::uint64_t sub_seed) {
  return run_restart(points, K, sub_seed).trace;
}
}  // namespace detail

ClusterAssignment kmeans(const Matrix& points, int K, int restarts, std::uint64_t seed) {
  const int n = static_cast<int>(points.rows());
  if (n == 0 || points.cols() == 0) throw InputError("kmeans: empty feature matrix");
  if (K < 1) throw InputError("kmeans: K must be >= 1");
  if (K > n) throw InputError("kmeans: K exceeds point count");
  if (restarts < 1) throw InputError("kmeans: restarts must be >= 1");

  RestartResult best;
  for (int r = 0; r < restarts; ++r) {
    RestartResult c = run_restart(points, K, derive_seed(seed, static_cast<std::uint64_t>(r)));
    if (c.inertia < best.inertia) best = std::move(c);
  }

  ClusterAssignment out;
  out.labels = std::move(best.labels);
  out.centroids = std::move(best.centroids);
  out.inertia = best.inertia;
  out.K = K;
  out.seed = seed;
  return out;
}

}  // namespace statarb
