#include "kserver/policy_io.hpp"

#include <json.hpp>

#include "kserver/error.hpp"

namespace kserver {

namespace {

using nlohmann::json;

json config_names(const Configuration& c, const Metric& metric) {
  json out = json::array();
  for (PointIndex p : c.points()) out.push_back(metric.name(p));
  return out;
}

std::string history_key(const ConfigurationSpace& space, const RandomizedPolicy::History& history) {
  const Metric& metric = space.metric();
  std::string key;
  for (std::size_t i = 0; i < history.first.size(); ++i) {
    if (i) key += ',';
    key += metric.name(history.first[i]);
  }
  key += '|';
  for (std::size_t i = 0; i < history.second.size(); ++i) {
    if (i) key += ',';
    key += to_string(space.at(history.second[i]), metric);
  }
  return key;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

PointIndex point_named(const Metric& metric, const std::string& name) {
  const auto idx = metric.index_of(name);
  if (!idx) throw Error(ErrorCode::ParseError, "policy mentions unknown point '" + name + "'");
  return *idx;
}

Configuration config_from_names(const Metric& metric, const std::vector<std::string>& names) {
  std::vector<PointIndex> pts;
  for (const auto& n : names) pts.push_back(point_named(metric, n));
  return Configuration(std::move(pts));
}

RandomizedPolicy::History parse_history(const ConfigurationSpace& space, const std::string& key) {
  const auto bar = key.find('|');
  if (bar == std::string::npos) throw Error(ErrorCode::ParseError, "history key without '|': " + key);
  RandomizedPolicy::History history;
  for (const auto& name : split(key.substr(0, bar), ',')) history.first.push_back(point_named(space.metric(), name));
  const std::string answers = key.substr(bar + 1);
  std::size_t pos = 0;
  while (pos < answers.size()) {
    if (answers[pos] == ',') {
      ++pos;
      continue;
    }
    if (answers[pos] != '{') throw Error(ErrorCode::ParseError, "malformed answer list in key: " + key);
    const auto close = answers.find('}', pos);
    if (close == std::string::npos) throw Error(ErrorCode::ParseError, "unterminated '{' in key: " + key);
    history.second.push_back(
        space.index_of(config_from_names(space.metric(), split(answers.substr(pos + 1, close - pos - 1), ','))));
    pos = close + 1;
  }
  if (history.first.empty() || history.second.size() + 1 != history.first.size()) {
    throw Error(ErrorCode::ParseError, "history key has mismatched lengths: " + key);
  }
  return history;
}

}  // namespace

std::string policy_to_json(const RandomizedPolicy& policy, const Rational& tau_low, const Rational& tau_high) {
  const auto& space = policy.space();
  const Metric& metric = space.metric();
  json doc;
  doc["points"] = metric.points();
  doc["k"] = space.k();
  doc["c0"] = config_names(policy.initial(), metric);
  doc["horizon"] = policy.horizon();
  doc["tau_low"] = to_string(tau_low);
  doc["tau_high"] = to_string(tau_high);
  json entries = json::object();
  for (const auto& [history, dist] : policy.conditionals()) {
    json list = json::array();
    for (const auto& [c, p] : dist) list.push_back(json::array({config_names(space.at(c), metric), to_string(p)}));
    entries[history_key(space, history)] = std::move(list);
  }
  doc["policy"] = std::move(entries);
  return doc.dump(1) + "\n";
}

LoadedPolicy policy_from_json(const std::string& text, const Metric& metric) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    if (doc.at("points").get<std::vector<std::string>>() != metric.points()) {
      throw Error(ErrorCode::ParseError, "policy was computed on a different metric");
    }
    std::vector<std::string> c0_names = doc.at("c0").get<std::vector<std::string>>();
    const int k = doc.at("k").get<int>();
    auto space = std::make_shared<const ConfigurationSpace>(metric, k);
    const Configuration c0 = config_from_names(metric, c0_names);
    LoadedPolicy out{RandomizedPolicy(space, c0, doc.at("horizon").get<int>()),
                     parse_rational(doc.at("tau_low").get<std::string>()),
                     parse_rational(doc.at("tau_high").get<std::string>())};
    for (const auto& [key, list] : doc.at("policy").items()) {
      RandomizedPolicy::Distribution dist;
      for (const auto& entry : list) {
        const Configuration c = config_from_names(metric, entry.at(0).get<std::vector<std::string>>());
        dist.emplace_back(space->index_of(c), parse_rational(entry.at(1).get<std::string>()));
      }
      out.policy.set(parse_history(*space, key), std::move(dist));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed policy file: ") + e.what());
  }
}

}  // namespace kserver
