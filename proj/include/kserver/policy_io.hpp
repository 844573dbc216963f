#pragma once

#include <string>

#include "kserver/lp.hpp"

namespace kserver {

/// Policy file:
///   {"points": [...], "k": 2, "c0": ["a","b"], "horizon": 2,
///    "tau_low": "p/q", "tau_high": "p/q",
///    "policy": {"c,a|{a,c}": [[["a","c"], "1/2"], ...], ...}}
/// History keys are rho_t as point names joined by ',' then '|' then
/// sigma_{t-1} as "{..}" groups joined by ','. Output is deterministic.
std::string policy_to_json(const RandomizedPolicy& policy, const Rational& tau_low, const Rational& tau_high);

struct LoadedPolicy {
  RandomizedPolicy policy;
  Rational tau_low;
  Rational tau_high;
};

/// Parses a policy file against `metric` (point names must match).
/// Throws Error(ParseError) on malformed input.
LoadedPolicy policy_from_json(const std::string& text, const Metric& metric);

}  // namespace kserver
