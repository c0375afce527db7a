#pragma once

#include <string>
#include <vector>

#include "statarb/common.hpp"
#include "statarb/market_data.hpp"

namespace statarb {

struct PcaResult {
  Vector eigenvalues;     // descending, clamped at 0
  Matrix loadings;        // factors x components, unit-norm columns
  Vector explained_ratio; // sums to 1
};

enum class FeatureMode { RawFactors, PrincipalComponents };

struct FeatureSpace {
  FeatureMode mode;
  int k = 0;
  Matrix feature_matrix;               // tickers x k
  std::vector<std::string> provenance; // factor names or "pc<i>"
};

// Eigendecomposition of the sample covariance of the z-scored matrix (which
// is its correlation matrix by construction). Sign convention: in each
// loading column the entry of largest magnitude is positive.
PcaResult pca(const NormalizedFactorMatrix& X);

// Projection onto the top-k components.
FeatureSpace select_components(const PcaResult& p, const NormalizedFactorMatrix& X, int k);

// Greedy pick: walk components in descending-eigenvalue order, from each take
// the not-yet-selected factor with the largest absolute loading, stop at k.
FeatureSpace select_raw_factors(const PcaResult& p, const NormalizedFactorMatrix& X, int k);

}  // namespace statarb
