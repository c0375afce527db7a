#pragma once

#include <string>
#include <vector>

#include "statarb/common.hpp"

namespace statarb {

struct PriceCorrelation {
  Matrix S;  // n x n, unit diagonal, symmetric
  std::vector<std::string> tickers;
};

enum class PriceTransform { Levels, Returns };

// Pearson correlation of closing-price series over [window). Levels by
// default; a returns mode exists for sensitivity runs.
PriceCorrelation correlation_from_prices(const Matrix& prices,
                                         const std::vector<std::string>& tickers,
                                         IndexRange window,
                                         PriceTransform transform = PriceTransform::Levels);

struct PrecisionEstimate {
  Matrix Theta;  // n x n, symmetric positive definite
  double rho = 0.0;
  int iterations = 0;  // outer sweeps
  bool converged = false;
};

// Entries with |Theta_ij| below this are treated as structural zeros.
inline constexpr double kSupportEps = 1e-8;

// L1-penalized inverse-correlation estimate:
//   maximize  log det Theta - tr(S Theta) - rho * sum_{i!=j} |Theta_ij|
// solved by blockwise coordinate descent in Theta (one lasso subproblem per
// row/column pass). Theta stays positive definite throughout and the
// penalized log-likelihood is non-decreasing sweep over sweep.
PrecisionEstimate graphical_lasso(const PriceCorrelation& S, double rho,
                                  double tol = 1e-5, int max_iter = 200);

double glasso_objective(const Matrix& S, const Matrix& Theta, double rho);

// Penalized log-likelihood after each outer sweep (non-decreasing).
std::vector<double> glasso_objective_trace(const PriceCorrelation& S, double rho,
                                           double tol = 1e-5, int max_iter = 200);

// Mean count of off-diagonal nonzeros per row.
double mean_row_support(const Matrix& Theta);

// Bisects rho so the mean off-diagonal support per row lands in
// [target_lo, target_hi]; returns the chosen rho (recorded by callers for
// reproducibility).
double auto_tune_rho(const PriceCorrelation& S, double target_lo = 2.0,
                     double target_hi = 5.0, double tol = 1e-5, int max_iter = 200);

}  // namespace statarb
