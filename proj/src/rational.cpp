#include "kserver/rational.hpp"

#include <cctype>
#include <functional>

#include "kserver/error.hpp"

namespace kserver {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::AsymmetricDistance: return "AsymmetricDistance";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::InvalidPointName: return "InvalidPointName";
    case ErrorCode::KExceedsN: return "KExceedsN";
    case ErrorCode::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateKEqualsN: return "DegenerateKEqualsN";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool is_unsigned_literal(std::string_view s) {
  return !s.empty() && s.front() != '-' && s.front() != '+' && is_integer_literal(s);
}

std::string strip_plus(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return std::string(s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_unsigned_literal(den)) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  }
  mpz_class n(strip_plus(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

mpz_class ceil(const Rational& value) {
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

std::size_t RationalHash::operator()(const Rational& value) const noexcept {
  auto limb_hash = [](mpz_srcptr z) {
    std::size_t h = std::hash<long>{}(static_cast<long>(z->_mp_size));
    const int limbs = z->_mp_size < 0 ? -z->_mp_size : z->_mp_size;
    for (int i = 0; i < limbs; ++i) {
      h ^= std::hash<mp_limb_t>{}(z->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  };
  const std::size_t a = limb_hash(value.get_num_mpz_t());
  const std::size_t b = limb_hash(value.get_den_mpz_t());
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

ExtendedRatio ExtendedRatio::of(const Rational& cost, const Rational& opt) {
  if (opt == 0) {
    return cost == 0 ? ExtendedRatio(Rational(1)) : ExtendedRatio::infinity();
  }
  return ExtendedRatio(Rational(cost / opt));
}

const Rational& ExtendedRatio::value() const {
  if (infinite_) throw Error(ErrorCode::InvalidArgument, "value() of an infinite ratio");
  return value_;
}

std::string to_string(const ExtendedRatio& value) {
  return value.is_infinite() ? std::string("inf") : to_string(value.value());
}

}  // namespace kserver
