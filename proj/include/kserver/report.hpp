#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kserver/lp.hpp"

namespace kserver {

struct RatioRow {
  int horizon = 0;
  Rational det_value;
  Rational rand_low;
  Rational rand_high;
  long long runtime_ms = 0;

  bool operator==(const RatioRow&) const = default;
};

struct RatioTable {
  std::vector<RatioRow> rows;

  bool operator==(const RatioTable&) const = default;
};

struct SweepOptions {
  Rational tolerance{1, 1024};
  std::size_t variable_cap = kDefaultVariableCap;
  unsigned threads = 1;
};

/// One row per T = 1..T_max, each computed independently. An
/// InstanceTooLarge failure is rethrown with the failing T in the message.
RatioTable sweep_horizons(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int max_horizon,
                          const SweepOptions& options = {});

/// "csv" or "json"; throws UnknownFormat otherwise. Rationals are written as
/// "p/q" strings.
std::string emit(const RatioTable& table, std::string_view format);

RatioTable parse_table_json(const std::string& text);

}  // namespace kserver
