#include "statarb/glasso.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace statarb {

PriceCorrelation correlation_from_prices(const Matrix& prices,
                                         const std::vector<std::string>& tickers,
                                         IndexRange window, PriceTransform transform) {
  const int n = static_cast<int>(prices.cols());
  if (n < 2) throw InputError("correlation_from_prices: need at least 2 tickers");
  if (window.begin < 0 || window.end > prices.rows() || window.length() < n + 2) {
    throw InputError("correlation_from_prices: window must hold at least n+2 observations");
  }

  int len = window.length();
  Matrix X;
  if (transform == PriceTransform::Levels) {
    X = prices.middleRows(window.begin, len);
  } else {
    X.resize(len - 1, n);
    for (int t = 1; t < len; ++t) {
      X.row(t - 1) = prices.row(window.begin + t).array() / prices.row(window.begin + t - 1).array() - 1.0;
    }
  }

  const auto rows = X.rows();
  for (int j = 0; j < n; ++j) {
    double mean = X.col(j).mean();
    double sd = sample_sd(Vector(X.col(j)));
    if (sd <= 0.0 || !std::isfinite(sd)) {
      throw DegenerateError("constant price series for ticker '" +
                            (j < static_cast<int>(tickers.size()) ? tickers[static_cast<size_t>(j)]
                                                                  : std::to_string(j)) +
                            "'");
    }
    X.col(j) = (X.col(j).array() - mean) / sd;
  }

  PriceCorrelation out;
  out.tickers = tickers;
  out.S = (X.transpose() * X) / static_cast<double>(rows - 1);
  out.S = ((out.S + out.S.transpose()) * 0.5).eval();
  out.S.diagonal().setOnes();
  return out;
}

double glasso_objective(const Matrix& S, const Matrix& Theta, double rho) {
  Eigen::LLT<Matrix> llt(Theta);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double trace = (S.array() * Theta.array()).sum();
  double l1 = Theta.cwiseAbs().sum() - Theta.diagonal().cwiseAbs().sum();
  return logdet - trace - rho * l1;
}

double mean_row_support(const Matrix& Theta) {
  const auto n = Theta.rows();
  long count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && std::abs(Theta(i, j)) > kSupportEps) ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

namespace {

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

struct SolveState {
  Matrix Theta;
  Matrix W;  // Theta^{-1}, maintained blockwise
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

SolveState solve(const Matrix& S, double rho, double tol, int max_iter) {
  const int n = static_cast<int>(S.rows());
  if (rho < 0.0) throw InputError("graphical_lasso: rho must be >= 0");
  if (tol <= 0.0) throw InputError("graphical_lasso: tol must be > 0");
  if (S.rows() != S.cols()) throw InputError("graphical_lasso: S must be square");
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-6) {
      throw InputError("graphical_lasso: S is not positive semidefinite");
    }
  }
  if ((S.diagonal().array() <= 0.0).any()) {
    throw InputError("graphical_lasso: S has nonpositive diagonal entries");
  }

  SolveState st;
  st.Theta = Matrix::Zero(n, n);
  st.W = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    st.Theta(i, i) = 1.0 / S(i, i);
    st.W(i, i) = S(i, i);
  }
  if (n == 1) {
    st.converged = true;
    st.objective_trace.push_back(glasso_objective(S, st.Theta, rho));
    return st;
  }

  const double inner_tol = std::min(tol * 0.1, 1e-7);
  const int inner_max = 200;
  Matrix Q(n - 1, n - 1), H(n - 1, n - 1);
  Vector s12(n - 1), u(n - 1), grad(n - 1), v(n - 1), w12(n - 1);
  std::vector<int> others(static_cast<size_t>(n - 1));

  double prev_obj = glasso_objective(S, st.Theta, rho);
  st.objective_trace.push_back(prev_obj);

  for (int sweep = 0; sweep < max_iter; ++sweep) {
    Matrix Theta_prev = st.Theta;
    for (int j = 0; j < n; ++j) {
      {
        int k = 0;
        for (int i = 0; i < n; ++i) {
          if (i != j) others[static_cast<size_t>(k++)] = i;
        }
      }
      const double s22 = S(j, j);
      for (int a = 0; a < n - 1; ++a) {
        int ia = others[static_cast<size_t>(a)];
        s12(a) = S(ia, j);
        u(a) = st.Theta(ia, j);
        w12(a) = st.W(ia, j);
      }
      const double w22 = st.W(j, j);
      for (int a = 0; a < n - 1; ++a) {
        int ia = others[static_cast<size_t>(a)];
        for (int b = 0; b < n - 1; ++b) {
          Q(a, b) = st.W(ia, others[static_cast<size_t>(b)]);
        }
      }
      Q.noalias() -= (w12 * w12.transpose()) / w22;  // (Theta_11)^{-1}
      H = s22 * Q;

      // Lasso subproblem: min_u 0.5 u'Hu + s12'u + rho ||u||_1.
      grad.noalias() = H * u;
      grad += s12;
      for (int pass = 0; pass < inner_max; ++pass) {
        double max_delta = 0.0;
        for (int a = 0; a < n - 1; ++a) {
          double old = u(a);
          double candidate = H(a, a) * old - grad(a);
          double next = soft_threshold(candidate, rho) / H(a, a);
          double delta = next - old;
          if (delta != 0.0) {
            u(a) = next;
            grad.noalias() += H.col(a) * delta;
            max_delta = std::max(max_delta, std::abs(delta));
          }
        }
        if (max_delta < inner_tol) break;
      }

      v.noalias() = Q * u;
      const double theta22 = 1.0 / s22 + u.dot(v);

      for (int a = 0; a < n - 1; ++a) {
        int ia = others[static_cast<size_t>(a)];
        st.Theta(ia, j) = u(a);
        st.Theta(j, ia) = u(a);
      }
      st.Theta(j, j) = theta22;

      // W stays the exact inverse: closed-form block update.
      for (int a = 0; a < n - 1; ++a) {
        int ia = others[static_cast<size_t>(a)];
        for (int b = 0; b < n - 1; ++b) {
          st.W(ia, others[static_cast<size_t>(b)]) = Q(a, b) + s22 * v(a) * v(b);
        }
        st.W(ia, j) = -s22 * v(a);
        st.W(j, ia) = -s22 * v(a);
      }
      st.W(j, j) = s22;
    }
    st.sweeps = sweep + 1;

    double obj = glasso_objective(S, st.Theta, rho);
    if (obj + 1e-7 * (1.0 + std::abs(prev_obj)) < prev_obj) {
      throw std::logic_error("graphical_lasso: objective decreased across a sweep");
    }
    st.objective_trace.push_back(obj);
    prev_obj = obj;

    double max_change = (st.Theta - Theta_prev).cwiseAbs().maxCoeff();
    if (max_change < tol) {
      st.converged = true;
      break;
    }
  }

  st.Theta = ((st.Theta + st.Theta.transpose()) * 0.5).eval();
  return st;
}

}  // namespace

PrecisionEstimate graphical_lasso(const PriceCorrelation& S, double rho, double tol, int max_iter) {
  SolveState st = solve(S.S, rho, tol, max_iter);
  PrecisionEstimate out;
  out.Theta = std::move(st.Theta);
  out.rho = rho;
  out.iterations = st.sweeps;
  out.converged = st.converged;
  return out;
}

std::vector<double> glasso_objective_trace(const PriceCorrelation& S, double rho, double tol,
                                           int max_iter) {
  return solve(S.S, rho, tol, max_iter).objective_trace;
}

double auto_tune_rho(const PriceCorrelation& S, double target_lo, double target_hi, double tol,
                     int max_iter) {
  const auto n = S.S.rows();
  double max_off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) max_off = std::max(max_off, std::abs(S.S(i, j)));
    }
  }
  auto support_at = [&](double rho) {
    return mean_row_support(graphical_lasso(S, rho, tol, max_iter).Theta);
  };

  if (support_at(0.0) <= target_hi) return 0.0;

  double lo = 0.0, hi = max_off;  // support(hi) == 0 < target_lo
  double best = hi, best_dist = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 24; ++it) {
    double mid = 0.5 * (lo + hi);
    double m = support_at(mid);
    double dist = m > target_hi ? m - target_hi : (m < target_lo ? target_lo - m : 0.0);
    if (dist < best_dist) {
      best_dist = dist;
      best = mid;
    }
    if (dist == 0.0) return mid;
    if (m > target_hi) {
      lo = mid;  // too dense: need more shrinkage
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace statarb
