#pragma once

#include <filesystem>
#include <string>

#include "kserver/metric.hpp"

namespace kserver {

/// Reads {"points": [...], "distances": [[...], ...]}; entries are integers
/// or rational strings "p/q". Throws Error(ParseError) for malformed JSON
/// and the validate_metric errors for bad matrices.
Metric parse_metric_json(const std::string& text);
Metric load_metric(const std::filesystem::path& path);

std::string metric_to_json(const Metric& metric);

}  // namespace kserver
