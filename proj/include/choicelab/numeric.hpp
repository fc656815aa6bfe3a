#pragma once

#include <gmpxx.h>

#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

namespace choicelab {

using Rational = mpq_class;

/// Probability carrier: exact rationals or doubles.
template <class T>
concept ProbScalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Tolerances used only in float mode. Exact mode compares with ==.
struct ToleranceConfig {
  double eps_eq = 1e-9;    // relative tolerance on cross-multiplied products
  double eps_zero = 1e-12; // support threshold
  double eps_sum = 1e-9;   // row-sum tolerance
};

inline bool is_zero(const Rational& v, const ToleranceConfig&) { return sgn(v) == 0; }
inline bool is_zero(double v, const ToleranceConfig& tol) { return v <= tol.eps_zero && v >= -tol.eps_zero; }

inline bool is_positive(const Rational& v, const ToleranceConfig&) { return sgn(v) > 0; }
inline bool is_positive(double v, const ToleranceConfig& tol) { return v > tol.eps_zero; }

inline bool approx_equal(const Rational& a, const Rational& b, const ToleranceConfig&) { return a == b; }
bool approx_equal(double a, double b, const ToleranceConfig& tol);

inline bool approx_less_equal(const Rational& a, const Rational& b, const ToleranceConfig&) { return a <= b; }
bool approx_less_equal(double a, double b, const ToleranceConfig& tol);

/// Parses "num/den" or a bare integer. Throws ParseError otherwise.
Rational parse_rational(std::string_view text);
/// Parses a decimal literal. Throws ParseError otherwise.
double parse_decimal(std::string_view text);
/// True when the text is in "num/den" or integer form (no '.', no exponent).
bool is_rational_literal(std::string_view text);

/// Canonical text: "num/den" reduced, or "num" for integers.
std::string format_prob(const Rational& v);
/// Shortest round-trip decimal, always containing '.' or an exponent.
std::string format_prob(double v);

double to_double(const Rational& v);

template <ProbScalar S>
S from_rational(const Rational& v) {
  if constexpr (is_exact_v<S>) {
    return v;
  } else {
    return to_double(v);
  }
}

Rational pow_integer(const Rational& base, unsigned long exponent);

template <ProbScalar S>
constexpr std::string_view mode_name() {
  return is_exact_v<S> ? "exact" : "float";
}

}  // namespace choicelab
