#include "kserver/report.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kserver/error.hpp"
#include "kserver/game.hpp"

namespace kserver {

namespace {

RatioRow compute_row(const std::shared_ptr<const ConfigurationSpace>& space, const Configuration& c0, int horizon,
                     const SweepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RatioRow row;
  row.horizon = horizon;
  row.det_value = opt_det_ratio(space, c0, horizon).value;
  try {
    const RandRatioResult rand = opt_rand_ratio(space, c0, horizon, options.tolerance, options.variable_cap);
    row.rand_low = rand.tau_low;
    row.rand_high = rand.tau_high;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InstanceTooLarge) throw;
    throw Error(ErrorCode::InstanceTooLarge, "at T=" + std::to_string(horizon) + ": " + e.what());
  }
  row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

RatioTable sweep_horizons(std::shared_ptr<const ConfigurationSpace> space, const Configuration& c0, int max_horizon,
                          const SweepOptions& options) {
  if (max_horizon < 1) throw Error(ErrorCode::InvalidArgument, "T_max must be at least 1");
  RatioTable table;
  table.rows.resize(static_cast<std::size_t>(max_horizon));

  std::atomic<int> next{1};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int t = next++; t <= max_horizon; t = next++) {
      try {
        table.rows[static_cast<std::size_t>(t - 1)] = compute_row(space, c0, t, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(max_horizon)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

std::string emit(const RatioTable& table, std::string_view format) {
  if (format == "csv") {
    std::ostringstream os;
    os << "T,det,rand_low,rand_high,runtime_ms\n";
    for (const auto& r : table.rows) {
      os << r.horizon << ',' << to_string(r.det_value) << ',' << to_string(r.rand_low) << ','
         << to_string(r.rand_high) << ',' << r.runtime_ms << '\n';
    }
    return os.str();
  }
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"T", r.horizon},
                      {"det", to_string(r.det_value)},
                      {"rand_low", to_string(r.rand_low)},
                      {"rand_high", to_string(r.rand_high)},
                      {"runtime_ms", r.runtime_ms}});
    }
    return nlohmann::json{{"rows", rows}}.dump(1) + "\n";
  }
  throw Error(ErrorCode::UnknownFormat, "unknown output format '" + std::string(format) + "' (csv|json)");
}

RatioTable parse_table_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    RatioTable table;
    for (const auto& r : doc.at("rows")) {
      table.rows.push_back({r.at("T").get<int>(), parse_rational(r.at("det").get<std::string>()),
                            parse_rational(r.at("rand_low").get<std::string>()),
                            parse_rational(r.at("rand_high").get<std::string>()), r.at("runtime_ms").get<long long>()});
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace kserver
