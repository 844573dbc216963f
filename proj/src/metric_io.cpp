#include "kserver/metric_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kserver/error.hpp"

namespace kserver {

namespace {

Rational rational_from_json(const nlohmann::json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return parse_rational(std::to_string(value.get<long long>()));
  throw Error(ErrorCode::ParseError, "distance entries must be integers or \"p/q\" strings, got " + value.dump());
}

}  // namespace

Metric parse_metric_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("distances") || !doc["distances"].is_array()) {
    throw Error(ErrorCode::ParseError, "metric file needs a \"distances\" array");
  }
  std::vector<std::vector<Rational>> dist;
  for (const auto& row : doc["distances"]) {
    if (!row.is_array()) throw Error(ErrorCode::ParseError, "distance rows must be arrays");
    auto& out = dist.emplace_back();
    for (const auto& entry : row) out.push_back(rational_from_json(entry));
  }
  std::vector<std::string> names;
  if (doc.contains("points")) {
    if (!doc["points"].is_array()) throw Error(ErrorCode::ParseError, "\"points\" must be an array");
    for (const auto& p : doc["points"]) {
      if (!p.is_string()) throw Error(ErrorCode::ParseError, "point names must be strings");
      names.push_back(p.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < dist.size(); ++i) names.push_back(std::to_string(i));
  }
  return validate_metric(std::move(names), dist);
}

Metric load_metric(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric_json(buf.str());
}

std::string metric_to_json(const Metric& metric) {
  nlohmann::json doc;
  doc["points"] = metric.points();
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < metric.size(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t j = 0; j < metric.size(); ++j) {
      row.push_back(to_string(metric.dist(static_cast<PointIndex>(i), static_cast<PointIndex>(j))));
    }
    rows.push_back(std::move(row));
  }
  doc["distances"] = std::move(rows);
  return doc.dump();
}

}  // namespace kserver
