#include "statarb/factor_engine.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace statarb {

PcaResult pca(const NormalizedFactorMatrix& nfm) {
  const Matrix& X = nfm.X;
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < 2) throw InputError("pca: need at least 2 tickers");
  if (p < 2) throw InputError("pca: need at least 2 factors");

  Matrix cov = (X.transpose() * X) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success) throw DegenerateError("pca: eigendecomposition failed");

  // Ascending from Eigen; reorder descending, ties broken by original index.
  std::vector<int> order(static_cast<size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  const Vector& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ev(a) > ev(b); });

  PcaResult r;
  r.eigenvalues.resize(p);
  r.loadings.resize(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double lambda = ev(order[static_cast<size_t>(j)]);
    r.eigenvalues(j) = lambda < 0.0 ? 0.0 : lambda;
    Vector col = solver.eigenvectors().col(order[static_cast<size_t>(j)]);
    // Largest-magnitude entry positive.
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0.0) col = -col;
    r.loadings.col(j) = col;
  }
  double total = r.eigenvalues.sum();
  if (total <= 0.0) throw DegenerateError("pca: zero total variance");
  r.explained_ratio = r.eigenvalues / total;
  return r;
}

FeatureSpace select_components(const PcaResult& p, const NormalizedFactorMatrix& nfm, int k) {
  const auto nf = p.loadings.cols();
  if (k < 1 || k > nf) throw InputError("select_components: k out of range");
  FeatureSpace f;
  f.mode = FeatureMode::PrincipalComponents;
  f.k = k;
  f.feature_matrix = nfm.X * p.loadings.leftCols(k);
  for (int i = 0; i < k; ++i) f.provenance.push_back("pc" + std::to_string(i));
  return f;
}

FeatureSpace select_raw_factors(const PcaResult& p, const NormalizedFactorMatrix& nfm, int k) {
  const auto nf = p.loadings.cols();
  if (k < 1 || k > nf) throw InputError("select_raw_factors: k out of range");

  std::vector<bool> taken(static_cast<size_t>(nf), false);
  std::vector<int> selected;
  for (Eigen::Index comp = 0; comp < nf && static_cast<int>(selected.size()) < k; ++comp) {
    int best = -1;
    double best_abs = -1.0;
    for (Eigen::Index f = 0; f < nf; ++f) {
      if (taken[static_cast<size_t>(f)]) continue;
      double a = std::abs(p.loadings(f, comp));
      if (a > best_abs) {
        best_abs = a;
        best = static_cast<int>(f);
      }
    }
    taken[static_cast<size_t>(best)] = true;
    selected.push_back(best);
  }

  FeatureSpace f;
  f.mode = FeatureMode::RawFactors;
  f.k = k;
  f.feature_matrix.resize(nfm.X.rows(), k);
  for (int i = 0; i < k; ++i) {
    f.feature_matrix.col(i) = nfm.X.col(selected[static_cast<size_t>(i)]);
    f.provenance.push_back(nfm.factor_names[static_cast<size_t>(selected[static_cast<size_t>(i)])]);
  }
  return f;
}

}  // namespace statarb
