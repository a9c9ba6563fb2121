#pragma once

// Integer plumbing shared by every module: arbitrary-precision integers and
// rationals, the library's exception types, and overflow-checked exponent
// arithmetic.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mef {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when an operation is called outside its contract (mismatched
/// rings, bad indices, non-units passed where a unit is required, ...).
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed-form sum was requested for a series that does not converge.
class divergence_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The operation is not defined over the given coefficient ring.
class unsupported_ring_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("exponent overflow");
  return r;
}

inline std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_sub_overflow(x, y, &r)) throw std::overflow_error("exponent overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("exponent overflow");
  return r;
}

inline std::int64_t dot(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s = checked_add(s, checked_mul(x[i], y[i]));
  return s;
}

inline std::int64_t to_int64(const Integer& n) {
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit an exponent: " + n.str());
  return static_cast<std::int64_t>(n);
}

}  // namespace detail

inline Integer gcd(const Integer& x, const Integer& y) {
  return boost::multiprecision::gcd(x, y);
}

/// lcm of non-negative integers; lcm(0, n) = 0.
inline Integer lcm(const Integer& x, const Integer& y) {
  if (x == 0 || y == 0) return 0;
  return x / gcd(x, y) * y;
}

inline Integer pow(const Integer& base, std::uint64_t exponent) {
  Integer result = 1;
  Integer b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

inline Integer binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (std::int64_t j = 1; j <= k; ++j) {
    r *= n - k + j;
    r /= j;
  }
  return r;
}

}  // namespace mef
