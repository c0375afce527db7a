#include "statarb/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "statarb/csv.hpp"
#include "statarb/dates.hpp"

namespace statarb {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kRawFactors = {
    "volatility_60d",  "shares_outstanding", "sales_growth", "rsi",
    "price_to_book",   "price_to_sales",     "price_to_ebitda",
    "pe_ratio",        "roe",                "market_cap",
    "fcf_growth",      "cf_growth",          "dividend_per_share",
    "analyst_rating",  "sell_recommendations", "buy_recommendations",
    "price_close",     "ask",                "bid"};

const std::vector<std::string> kTransformedFactors = {
    "volatility_60d",  "log_shares_outstanding", "sales_growth", "rsi",
    "price_to_book",   "price_to_sales",         "price_to_ebitda",
    "pe_ratio",        "roe",                    "log_market_cap",
    "fcf_growth",      "cf_growth",              "dividend_per_share",
    "analyst_rating",  "rec_score",
    "price_close",     "ask",                    "bid"};
}  // namespace

const std::vector<std::string>& raw_factor_names() { return kRawFactors; }
const std::vector<std::string>& transformed_factor_names() { return kTransformedFactors; }

std::string FieldSchema::canonical(const std::string& field) const {
  auto it = rename.find(field);
  return it == rename.end() ? field : it->second;
}

int CleanUniverse::ticker_index(const std::string& t) const {
  auto it = std::lower_bound(tickers.begin(), tickers.end(), t);
  if (it == tickers.end() || *it != t) return -1;
  return static_cast<int>(it - tickers.begin());
}

int CleanUniverse::factor_index(const std::string& name) const {
  for (size_t i = 0; i < factor_names.size(); ++i) {
    if (factor_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

struct LongFile {
  // field -> (date, ticker) -> value
  std::map<std::string, std::map<std::pair<std::string, std::string>, double>> cells;
  std::set<std::string> dates;
  std::set<std::string> tickers;
};

LongFile read_long(const std::string& path, const FieldSchema& schema) {
  CsvTable t = read_csv(path);
  int cd = t.require_column("date", path);
  int ct = t.require_column("ticker", path);
  int cf = t.require_column("field", path);
  int cv = t.require_column("value", path);
  LongFile out;
  for (const auto& row : t.rows) {
    size_t need = static_cast<size_t>(std::max({cd, ct, cf, cv})) + 1;
    if (row.size() < need) continue;
    const std::string& date = row[static_cast<size_t>(cd)];
    const std::string& ticker = row[static_cast<size_t>(ct)];
    if (!is_iso_date(date)) throw SchemaError(path + ": bad date '" + date + "'");
    if (ticker.empty()) throw SchemaError(path + ": empty ticker");
    std::string field = schema.canonical(row[static_cast<size_t>(cf)]);
    out.dates.insert(date);
    out.tickers.insert(ticker);
    auto v = parse_cell(row[static_cast<size_t>(cv)]);
    if (v.has_value()) out.cells[field][{date, ticker}] = *v;
    // unparseable / blank cells stay missing
  }
  return out;
}

Matrix field_matrix(const LongFile& f, const std::string& field,
                    const std::vector<std::string>& dates,
                    const std::vector<std::string>& tickers) {
  Matrix m = Matrix::Constant(static_cast<Eigen::Index>(dates.size()),
                              static_cast<Eigen::Index>(tickers.size()), kNaN);
  auto it = f.cells.find(field);
  if (it == f.cells.end()) return m;
  std::map<std::string, int> date_ix, ticker_ix;
  for (size_t i = 0; i < dates.size(); ++i) date_ix[dates[i]] = static_cast<int>(i);
  for (size_t i = 0; i < tickers.size(); ++i) ticker_ix[tickers[i]] = static_cast<int>(i);
  for (const auto& [key, value] : it->second) {
    auto di = date_ix.find(key.first);
    auto ti = ticker_ix.find(key.second);
    if (di != date_ix.end() && ti != ticker_ix.end()) m(di->second, ti->second) = value;
  }
  return m;
}

}  // namespace

RawPanel load_panel(const PanelPaths& paths, const FieldSchema& schema) {
  LongFile quotes = read_long(paths.prices, schema);
  LongFile funds = read_long(paths.factors, schema);

  if (quotes.cells.find(kCloseField) == quotes.cells.end()) {
    throw SchemaError(paths.prices + ": no '" + std::string(kCloseField) + "' field present");
  }
  for (const auto& name : kRawFactors) {
    bool in_quotes = name == "price_close" || name == kAskField || name == kBidField;
    const LongFile& src = in_quotes ? quotes : funds;
    std::string field = name == "price_close" ? kCloseField : name;
    if (src.cells.find(field) == src.cells.end()) {
      throw SchemaError((in_quotes ? paths.prices : paths.factors) +
                        ": no '" + field + "' field present (needed for factor '" + name + "')");
    }
  }

  RawPanel panel;
  std::set<std::string> all_dates(quotes.dates);
  all_dates.insert(funds.dates.begin(), funds.dates.end());
  std::set<std::string> all_tickers(quotes.tickers);
  all_tickers.insert(funds.tickers.begin(), funds.tickers.end());
  panel.dates.assign(all_dates.begin(), all_dates.end());
  panel.tickers.assign(all_tickers.begin(), all_tickers.end());
  if (panel.dates.empty() || panel.tickers.empty()) {
    throw InputError("panel has no data rows");
  }

  panel.prices = field_matrix(quotes, kCloseField, panel.dates, panel.tickers);
  panel.factor_names = kRawFactors;
  panel.factors.reserve(kRawFactors.size());
  for (const auto& name : kRawFactors) {
    if (name == "price_close") {
      panel.factors.push_back(panel.prices);
    } else if (name == kAskField || name == kBidField) {
      panel.factors.push_back(field_matrix(quotes, name, panel.dates, panel.tickers));
    } else {
      panel.factors.push_back(field_matrix(funds, name, panel.dates, panel.tickers));
    }
  }
  return panel;
}

CleanUniverse clean(const RawPanel& panel) {
  if (panel.dates.empty() || panel.tickers.empty()) throw InputError("empty panel");
  const int nd = static_cast<int>(panel.dates.size());
  const int nt = static_cast<int>(panel.tickers.size());

  // Non-trading day: every close price missing on that date.
  std::vector<int> keep_dates;
  for (int d = 0; d < nd; ++d) {
    bool any = false;
    for (int t = 0; t < nt && !any; ++t) any = std::isfinite(panel.prices(d, t));
    if (any) keep_dates.push_back(d);
  }
  if (keep_dates.empty()) throw DomainError("empty universe: no trading days");

  auto complete = [&](int t) {
    for (int d : keep_dates) {
      if (!std::isfinite(panel.prices(d, t)) || panel.prices(d, t) <= 0.0) return false;
      for (const auto& f : panel.factors) {
        if (!std::isfinite(f(d, t))) return false;
      }
    }
    return true;
  };

  std::vector<int> keep_tickers;
  for (int t = 0; t < nt; ++t) {
    if (complete(t)) keep_tickers.push_back(t);
  }
  if (keep_tickers.empty()) throw DomainError("empty universe: every ticker has missing cells");

  CleanUniverse u;
  for (int d : keep_dates) u.dates.push_back(panel.dates[static_cast<size_t>(d)]);
  for (int t : keep_tickers) u.tickers.push_back(panel.tickers[static_cast<size_t>(t)]);
  u.factor_names = panel.factor_names;

  auto subset = [&](const Matrix& m) {
    Matrix out(static_cast<Eigen::Index>(keep_dates.size()),
               static_cast<Eigen::Index>(keep_tickers.size()));
    for (size_t i = 0; i < keep_dates.size(); ++i) {
      for (size_t j = 0; j < keep_tickers.size(); ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            m(keep_dates[i], keep_tickers[j]);
      }
    }
    return out;
  };
  u.prices = subset(panel.prices);
  u.factors.reserve(panel.factors.size());
  for (const auto& f : panel.factors) u.factors.push_back(subset(f));
  return u;
}

CleanUniverse transform_factors(const CleanUniverse& universe) {
  if (universe.factor_names != kRawFactors) {
    throw InputError("transform_factors expects the raw 19-factor panel");
  }
  auto at = [&](const std::string& name) {
    return universe.factors[static_cast<size_t>(universe.factor_index(name))];
  };

  const Matrix& buy = at("buy_recommendations");
  const Matrix& sell = at("sell_recommendations");
  const Matrix& mcap = at("market_cap");
  const Matrix& shares = at("shares_outstanding");
  if ((buy.array() < 0.0).any() || (sell.array() < 0.0).any()) {
    throw InputError("negative recommendation counts");
  }
  if ((mcap.array() <= 0.0).any()) throw DomainError("nonpositive market cap");
  if ((shares.array() <= 0.0).any()) throw DomainError("nonpositive shares outstanding");

  Matrix rec(buy.rows(), buy.cols());
  for (Eigen::Index i = 0; i < buy.rows(); ++i) {
    for (Eigen::Index j = 0; j < buy.cols(); ++j) {
      double total = buy(i, j) + sell(i, j);
      // Uncovered stocks (no recommendations at all) score neutral.
      rec(i, j) = total == 0.0 ? 0.0 : (buy(i, j) - sell(i, j)) / total;
    }
  }

  CleanUniverse out;
  out.dates = universe.dates;
  out.tickers = universe.tickers;
  out.prices = universe.prices;
  out.factor_names = kTransformedFactors;
  out.factors.reserve(kTransformedFactors.size());
  for (const auto& name : kTransformedFactors) {
    if (name == "log_market_cap") {
      out.factors.push_back(mcap.array().log().matrix());
    } else if (name == "log_shares_outstanding") {
      out.factors.push_back(shares.array().log().matrix());
    } else if (name == "rec_score") {
      out.factors.push_back(rec);
    } else {
      out.factors.push_back(at(name));
    }
  }
  return out;
}

NormalizedFactorMatrix snapshot_and_standardize(const CleanUniverse& universe,
                                                const std::string& window_start,
                                                const std::string& window_end) {
  IndexRange w = date_range_to_indices(universe.dates, window_start, window_end);
  if (w.empty()) throw InputError("empty standardization window");
  const int nt = static_cast<int>(universe.tickers.size());
  if (nt < 2) throw InputError("need at least 2 tickers to standardize");
  const int nf = static_cast<int>(universe.factor_names.size());

  Matrix X(nt, nf);
  for (int f = 0; f < nf; ++f) {
    const Matrix& m = universe.factors[static_cast<size_t>(f)];
    for (int t = 0; t < nt; ++t) {
      X(t, f) = m.col(t).segment(w.begin, w.length()).mean();
    }
  }
  for (int f = 0; f < nf; ++f) {
    double mean = X.col(f).mean();
    double sd = sample_sd(Vector(X.col(f)));
    if (sd <= 0.0 || !std::isfinite(sd)) {
      throw DegenerateError("factor '" + universe.factor_names[static_cast<size_t>(f)] +
                            "' is constant across tickers over the window");
    }
    X.col(f) = (X.col(f).array() - mean) / sd;
  }

  NormalizedFactorMatrix out;
  out.tickers = universe.tickers;
  out.factor_names = universe.factor_names;
  out.X = std::move(X);
  return out;
}

RiskFreeCurve load_riskfree(const std::string& path) {
  CsvTable t = read_csv(path);
  int cd = t.require_column("date", path);
  int cr = t.require_column("rate", path);
  std::map<std::string, double> by_date;
  for (const auto& row : t.rows) {
    if (row.size() <= static_cast<size_t>(std::max(cd, cr))) continue;
    const std::string& date = row[static_cast<size_t>(cd)];
    if (!is_iso_date(date)) throw SchemaError(path + ": bad date '" + date + "'");
    auto v = parse_cell(row[static_cast<size_t>(cr)]);
    if (v.has_value()) by_date[date] = *v;
  }
  if (by_date.empty()) throw InputError(path + ": no usable rate rows");
  RiskFreeCurve curve;
  curve.rates.resize(static_cast<Eigen::Index>(by_date.size()));
  Eigen::Index i = 0;
  for (const auto& [date, rate] : by_date) {
    curve.dates.push_back(date);
    curve.rates(i++) = rate;
  }
  return curve;
}

Vector RiskFreeCurve::aligned(const std::vector<std::string>& query, int* carried) const {
  Vector out(static_cast<Eigen::Index>(query.size()));
  int fills = 0;
  for (size_t i = 0; i < query.size(); ++i) {
    auto it = std::upper_bound(dates.begin(), dates.end(), query[i]);
    if (it == dates.begin()) {
      throw InputError("risk-free curve starts after date " + query[i]);
    }
    auto idx = static_cast<Eigen::Index>(it - dates.begin() - 1);
    if (dates[static_cast<size_t>(idx)] != query[i]) ++fills;
    out(static_cast<Eigen::Index>(i)) = rates(idx);
  }
  if (carried) *carried = fills;
  return out;
}

}  // namespace statarb
