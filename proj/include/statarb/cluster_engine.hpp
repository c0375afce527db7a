#pragma once

#include <cstdint>
#include <vector>

#include "statarb/common.hpp"

namespace statarb {

struct ClusterAssignment {
  std::vector<int> labels;  // per row of the feature matrix, in [0, K)
  Matrix centroids;         // K x dim
  double inertia = 0.0;     // sum of squared distances to assigned centroid
  int K = 0;
  std::uint64_t seed = 0;

  std::vector<int> cluster_sizes() const;
};

// Lloyd iterations with k-means++ seeding, best of `restarts` by inertia.
// Deterministic given seed; assignment ties break toward the lower cluster
// index; empty clusters are repaired by stealing the point farthest from its
// centroid.
ClusterAssignment kmeans(const Matrix& points, int K, int restarts, std::uint64_t seed);

namespace detail {
// Per-iteration inertia of a single restart; the solver enforces that this
// sequence is non-increasing, tests inspect it directly.
std::vector<double> kmeans_inertia_trace(const Matrix& points, int K, std::uint64_t sub_seed);
}  // namespace detail

}  // namespace statarb
