#pragma once

#include <map>
#include <string>
#include <vector>

#include "statarb/common.hpp"

namespace statarb {

// Canonical factor panel. Inputs arrive as two long-format CSVs
// (date,ticker,field,value): one carrying close/ask/bid quotes, one carrying
// the remaining fundamental/momentum fields. Close, ask and bid double as
// factors alongside the sixteen fundamentals, giving the 19-wide raw panel.

// Raw factor names, in canonical column order.
const std::vector<std::string>& raw_factor_names();          // 19 entries
const std::vector<std::string>& transformed_factor_names();  // 18 entries

// Field names expected in the quotes file.
inline constexpr const char* kCloseField = "close";
inline constexpr const char* kAskField = "ask";
inline constexpr const char* kBidField = "bid";

// Maps file-specific field names onto canonical ones. Unlisted fields map to
// themselves, so files already using canonical names need no schema.
struct FieldSchema {
  std::map<std::string, std::string> rename;
  std::string canonical(const std::string& field) const;
};

struct RawPanel {
  std::vector<std::string> dates;    // ascending, unique
  std::vector<std::string> tickers;  // ascending, unique
  Matrix prices;                     // dates x tickers, NaN = missing (close)
  std::vector<std::string> factor_names;
  std::vector<Matrix> factors;       // one dates x tickers matrix per factor, NaN = missing
};

// Dense panel: no missing cells anywhere.
struct CleanUniverse {
  std::vector<std::string> dates;
  std::vector<std::string> tickers;
  Matrix prices;  // dates x tickers
  std::vector<std::string> factor_names;
  std::vector<Matrix> factors;

  int ticker_index(const std::string& t) const;
  int factor_index(const std::string& name) const;  // -1 if absent
};

struct NormalizedFactorMatrix {
  std::vector<std::string> tickers;
  std::vector<std::string> factor_names;
  Matrix X;  // tickers x factors, each column mean 0 / sample sd 1
};

// Formation/trading windows as half-open ISO date ranges.
struct PeriodSplit {
  std::string formation_start, formation_end;
  std::string trading_start, trading_end;
};

struct PanelPaths {
  std::string prices;
  std::string factors;
};

RawPanel load_panel(const PanelPaths& paths, const FieldSchema& schema = {});

// Drops non-trading days (all close prices missing) and then every ticker
// with at least one missing cell in any retained dimension.
CleanUniverse clean(const RawPanel& panel);

// Merges buy/sell recommendation counts into rec_score = (buy-sell)/(buy+sell)
// and replaces market cap / shares outstanding with their natural logs;
// 19 raw factors become 18 transformed ones.
CleanUniverse transform_factors(const CleanUniverse& universe);

// Time-averages each transformed factor per ticker over the window, then
// z-scores each factor column across tickers (sample sd).
NormalizedFactorMatrix snapshot_and_standardize(const CleanUniverse& universe,
                                                const std::string& window_start,
                                                const std::string& window_end);

// Risk-free curve: annualized decimal rates on trading dates. Missing dates
// carry the nearest prior rate forward; `carried` counts such fills.
struct RiskFreeCurve {
  std::vector<std::string> dates;
  Vector rates;

  // Rates aligned to `query` dates via carry-forward.
  Vector aligned(const std::vector<std::string>& query, int* carried = nullptr) const;
};

RiskFreeCurve load_riskfree(const std::string& path);

}  // namespace statarb
