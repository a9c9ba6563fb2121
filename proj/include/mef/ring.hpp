#pragma once

/**
 * @file ring.hpp
 * @brief Coefficient rings R = R_{m_1} x ... x R_{m_s}.
 *
 * Each factor R_m is (Z/m)[L] localized at the multiplicative set generated
 * by L and the binomials L^i - 1 (i >= 1); m = 0 stands for Z. In R_m the
 * element L and every difference L^i - L^j (i != j) is a unit, and every
 * denominator has a unit leading coefficient, hence is a non-zero-divisor.
 * That last fact is what makes cross-multiplication a sound equality test
 * and lets torsion be read off the numerator alone.
 *
 * Fractions are not reduced by gcd (gcd over Z/m with composite m is not
 * well defined). After every operation we only cancel common powers of L
 * and exact factors (L^i - 1) that the denominator already carries.
 */

#include "mef/arith.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mef {

/// Characteristic of one ring factor: 0 for Z, m > 0 for Z/m.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(Integer m) : m_(std::move(m)) {
    if (m_ < 0) throw usage_error("modulus must be non-negative");
  }

  const Integer& value() const { return m_; }
  bool is_characteristic_zero() const { return m_ == 0; }

  /// Canonical representative: x itself over Z, the residue in [0, m) otherwise.
  Integer reduce(Integer x) const {
    if (m_ == 0) return x;
    x %= m_;
    if (x < 0) x += m_;
    return x;
  }

  std::string to_string() const { return m_ == 0 ? "Z" : "Z/" + m_.str(); }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  Integer m_ = 0;
};

/// Dense polynomial in L over Z/m, lowest degree first, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Modulus mod) : mod_(std::move(mod)) {}
  Poly(Modulus mod, std::vector<Integer> coeffs) : mod_(std::move(mod)), c_(std::move(coeffs)) {
    for (auto& x : c_) x = mod_.reduce(std::move(x));
    trim();
  }

  static Poly constant(const Modulus& mod, const Integer& value) { return Poly(mod, {value}); }

  static Poly monomial(const Modulus& mod, const Integer& value, std::size_t degree) {
    std::vector<Integer> c(degree + 1);
    c[degree] = value;
    return Poly(mod, std::move(c));
  }

  const Modulus& modulus() const { return mod_; }
  const std::vector<Integer>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

  /// Largest k with L^k dividing the polynomial (0 for the zero polynomial).
  std::size_t valuation() const {
    std::size_t k = 0;
    while (k < c_.size() && c_[k] == 0) ++k;
    return c_.empty() ? 0 : k;
  }

  Poly shifted_up(std::size_t k) const {
    if (is_zero() || k == 0) return *this;
    Poly r(mod_);
    r.c_.assign(k, Integer(0));
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
  }

  Poly shifted_down(std::size_t k) const {
    if (k > valuation() && !is_zero()) throw usage_error("polynomial not divisible by requested power of L");
    Poly r(mod_);
    if (k < c_.size()) r.c_.assign(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end());
    return r;
  }

  /// p * (L^i - 1)
  Poly times_binomial(std::size_t i) const {
    if (is_zero()) return *this;
    std::vector<Integer> r(c_.size() + i);
    for (std::size_t j = 0; j < c_.size(); ++j) {
      r[j + i] += c_[j];
      r[j] -= c_[j];
    }
    return Poly(mod_, std::move(r));
  }

  /// Exact quotient by the monic binomial L^i - 1, if it divides.
  std::optional<Poly> exact_quotient_binomial(std::size_t i) const {
    if (is_zero()) return *this;
    if (c_.size() <= i) return std::nullopt;
    const std::size_t n = c_.size() - 1;
    std::vector<Integer> q(n - i + 1);
    // coefficient j of (L^i - 1) q is q_{j-i} - q_j
    for (std::size_t j = n + 1; j-- > i;) {
      Integer qj = j < q.size() ? q[j] : Integer(0);
      q[j - i] = mod_.reduce(c_[j] + qj);
    }
    for (std::size_t j = 0; j < i; ++j) {
      Integer qj = j < q.size() ? q[j] : Integer(0);
      if (mod_.reduce(c_[j] + qj) != 0) return std::nullopt;
    }
    return Poly(mod_, std::move(q));
  }

  Poly scaled(const Integer& n) const {
    std::vector<Integer> r(c_);
    for (auto& x : r) x *= n;
    return Poly(mod_, std::move(r));
  }

  Poly operator-() const { return scaled(-1); }

  friend Poly operator+(const Poly& x, const Poly& y) {
    check_same(x, y);
    std::vector<Integer> r(std::max(x.c_.size(), y.c_.size()));
    for (std::size_t j = 0; j < x.c_.size(); ++j) r[j] += x.c_[j];
    for (std::size_t j = 0; j < y.c_.size(); ++j) r[j] += y.c_[j];
    return Poly(x.mod_, std::move(r));
  }

  friend Poly operator-(const Poly& x, const Poly& y) { return x + (-y); }

  friend Poly operator*(const Poly& x, const Poly& y) {
    check_same(x, y);
    if (x.is_zero() || y.is_zero()) return Poly(x.mod_);
    std::vector<Integer> r(x.c_.size() + y.c_.size() - 1);
    for (std::size_t i = 0; i < x.c_.size(); ++i) {
      if (x.c_[i] == 0) continue;
      for (std::size_t j = 0; j < y.c_.size(); ++j) r[i + j] += x.c_[i] * y.c_[j];
    }
    return Poly(x.mod_, std::move(r));
  }

  Rational evaluate(const Rational& t) const {
    Rational acc = 0;
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * t + Rational(c_[j]);
    return acc;
  }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  static void check_same(const Poly& x, const Poly& y) {
    if (x.mod_ != y.mod_) throw usage_error("polynomials over different moduli");
  }

  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  Modulus mod_;
  std::vector<Integer> c_;
};

/// sign * L^k * prod_i (L^i - 1)^{e_i}; a unit of every factor ring.
struct UnitDenominator {
  int sign = 1;
  std::int64_t l_power = 0;
  std::map<std::int64_t, std::int64_t> binomials;  // i -> e_i, only nonzero exponents

  bool is_one() const { return sign == 1 && l_power == 0 && binomials.empty(); }

  Poly expanded(const Modulus& mod) const {
    Poly p = Poly::monomial(mod, sign, static_cast<std::size_t>(l_power));
    for (const auto& [i, e] : binomials)
      for (std::int64_t r = 0; r < e; ++r) p = p.times_binomial(static_cast<std::size_t>(i));
    return p;
  }

  friend UnitDenominator operator*(const UnitDenominator& x, const UnitDenominator& y) {
    UnitDenominator r = x;
    r.sign *= y.sign;
    r.l_power = detail::checked_add(r.l_power, y.l_power);
    for (const auto& [i, e] : y.binomials) r.binomials[i] = detail::checked_add(r.binomials[i], e);
    return r;
  }

  friend bool operator==(const UnitDenominator&, const UnitDenominator&) = default;
};

namespace detail {

// Multiply p by the quotient `target / have`, where target dominates have
// exponent-wise (signs are handled by callers).
inline Poly lift_to(const Poly& p, const UnitDenominator& have, const UnitDenominator& target) {
  Poly r = p.shifted_up(static_cast<std::size_t>(target.l_power - have.l_power));
  for (const auto& [i, e] : target.binomials) {
    auto it = have.binomials.find(i);
    std::int64_t missing = e - (it == have.binomials.end() ? 0 : it->second);
    for (std::int64_t k = 0; k < missing; ++k) r = r.times_binomial(static_cast<std::size_t>(i));
  }
  return r;
}

inline UnitDenominator common_denominator(const UnitDenominator& x, const UnitDenominator& y) {
  UnitDenominator d;
  d.l_power = std::max(x.l_power, y.l_power);
  d.binomials = x.binomials;
  for (const auto& [i, e] : y.binomials) d.binomials[i] = std::max(d.binomials[i], e);
  return d;
}

}  // namespace detail

/// One element num/den of a single factor ring R_m.
class RingElem {
 public:
  RingElem() = default;
  explicit RingElem(Modulus mod) : num_(std::move(mod)) {}
  RingElem(Poly num, UnitDenominator den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RingElem integer(const Modulus& mod, const Integer& n) { return RingElem(Poly::constant(mod, n), {}); }

  /// L^k for any integer k.
  static RingElem l_power(const Modulus& mod, std::int64_t k) {
    if (k >= 0) return RingElem(Poly::monomial(mod, 1, static_cast<std::size_t>(k)), {});
    UnitDenominator d;
    d.l_power = -k;
    return RingElem(Poly::constant(mod, 1), d);
  }

  /// 1 / den
  static RingElem inverse_of(const Modulus& mod, const UnitDenominator& den) {
    return RingElem(Poly::constant(mod, 1), den);
  }

  const Poly& numerator() const { return num_; }
  const UnitDenominator& denominator() const { return den_; }
  const Modulus& modulus() const { return num_.modulus(); }
  bool is_zero() const { return num_.is_zero(); }

  /// Same stored (normalized) representation; stricter than `==`.
  bool identical(const RingElem& o) const { return num_ == o.num_ && den_ == o.den_; }

  RingElem scaled(const Integer& n) const { return RingElem(num_.scaled(n), den_); }
  RingElem operator-() const { return scaled(-1); }

  friend RingElem operator+(const RingElem& x, const RingElem& y) {
    auto d = detail::common_denominator(x.den_, y.den_);
    return RingElem(detail::lift_to(x.num_, x.den_, d) + detail::lift_to(y.num_, y.den_, d), d);
  }

  friend RingElem operator-(const RingElem& x, const RingElem& y) { return x + (-y); }

  friend RingElem operator*(const RingElem& x, const RingElem& y) {
    return RingElem(x.num_ * y.num_, x.den_ * y.den_);
  }

  /// Semantic equality: p1 q2 = p2 q1 over Z/m (computed on a common denominator).
  friend bool operator==(const RingElem& x, const RingElem& y) {
    if (x.modulus() != y.modulus()) throw usage_error("ring elements over different moduli");
    auto d = detail::common_denominator(x.den_, y.den_);
    return detail::lift_to(x.num_, x.den_, d) == detail::lift_to(y.num_, y.den_, d);
  }

  Rational evaluate(const Rational& t) const {
    return num_.evaluate(t) / den_.expanded(Modulus()).evaluate(t);
  }

 private:
  void normalize() {
    if (den_.sign < 0) {
      num_ = -num_;
      den_.sign = 1;
    }
    if (num_.is_zero()) {
      den_ = UnitDenominator{};
      return;
    }
    auto k = std::min<std::int64_t>(den_.l_power, static_cast<std::int64_t>(num_.valuation()));
    if (k > 0) {
      num_ = num_.shifted_down(static_cast<std::size_t>(k));
      den_.l_power -= k;
    }
    for (auto it = den_.binomials.begin(); it != den_.binomials.end();) {
      while (it->second > 0) {
        auto q = num_.exact_quotient_binomial(static_cast<std::size_t>(it->first));
        if (!q) break;
        num_ = std::move(*q);
        --it->second;
      }
      it = it->second == 0 ? den_.binomials.erase(it) : std::next(it);
    }
  }

  Poly num_;
  UnitDenominator den_;
};

/// Ordered list of factor moduli; textual form "Z x Z/2".
struct RingDesc {
  std::vector<Modulus> factors;

  RingDesc() = default;
  explicit RingDesc(std::vector<Modulus> f) : factors(std::move(f)) {
    if (factors.empty()) throw usage_error("a ring needs at least one factor");
  }

  std::size_t size() const { return factors.size(); }

  std::string to_string() const {
    std::string s;
    for (std::size_t j = 0; j < factors.size(); ++j) s += (j ? " x " : "") + factors[j].to_string();
    return s;
  }

  friend bool operator==(const RingDesc&, const RingDesc&) = default;
};

inline RingDesc integers() { return RingDesc({Modulus()}); }

/// Element of a product ring: one RingElem per factor.
class RingValue {
 public:
  RingValue() = default;
  explicit RingValue(std::vector<RingElem> parts) : parts_(std::move(parts)) {}

  static RingValue integer(const RingDesc& ring, const Integer& n) {
    std::vector<RingElem> p;
    for (const auto& m : ring.factors) p.push_back(RingElem::integer(m, n));
    return RingValue(std::move(p));
  }
  static RingValue zero(const RingDesc& ring) { return integer(ring, 0); }
  static RingValue one(const RingDesc& ring) { return integer(ring, 1); }

  static RingValue inverse_of(const RingDesc& ring, const UnitDenominator& den) {
    std::vector<RingElem> p;
    for (const auto& m : ring.factors) p.push_back(RingElem::inverse_of(m, den));
    return RingValue(std::move(p));
  }

  RingDesc desc() const {
    std::vector<Modulus> f;
    for (const auto& p : parts_) f.push_back(p.modulus());
    return RingDesc(std::move(f));
  }

  const std::vector<RingElem>& parts() const { return parts_; }
  const RingElem& part(std::size_t j) const { return parts_.at(j); }

  bool is_zero() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const RingElem& e) { return e.is_zero(); });
  }

  bool identical(const RingValue& o) const {
    if (parts_.size() != o.parts_.size()) return false;
    for (std::size_t j = 0; j < parts_.size(); ++j)
      if (!parts_[j].identical(o.parts_[j])) return false;
    return true;
  }

  RingValue scaled(const Integer& n) const {
    return map([&](const RingElem& e) { return e.scaled(n); });
  }
  RingValue operator-() const { return scaled(-1); }

  friend RingValue operator+(const RingValue& x, const RingValue& y) {
    return zip(x, y, [](const RingElem& a, const RingElem& b) { return a + b; });
  }
  friend RingValue operator-(const RingValue& x, const RingValue& y) {
    return zip(x, y, [](const RingElem& a, const RingElem& b) { return a - b; });
  }
  friend RingValue operator*(const RingValue& x, const RingValue& y) {
    return zip(x, y, [](const RingElem& a, const RingElem& b) { return a * b; });
  }
  friend RingValue operator*(const Integer& n, const RingValue& x) { return x.scaled(n); }

  RingValue& operator+=(const RingValue& y) { return *this = *this + y; }
  RingValue& operator-=(const RingValue& y) { return *this = *this - y; }
  RingValue& operator*=(const RingValue& y) { return *this = *this * y; }

  friend bool operator==(const RingValue& x, const RingValue& y) {
    check_same(x, y);
    for (std::size_t j = 0; j < x.parts_.size(); ++j)
      if (!(x.parts_[j] == y.parts_[j])) return false;
    return true;
  }

 private:
  static void check_same(const RingValue& x, const RingValue& y) {
    if (x.parts_.size() != y.parts_.size()) throw usage_error("ring descriptor mismatch");
    for (std::size_t j = 0; j < x.parts_.size(); ++j)
      if (x.parts_[j].modulus() != y.parts_[j].modulus()) throw usage_error("ring descriptor mismatch");
  }

  template <class F>
  RingValue map(F f) const {
    std::vector<RingElem> r;
    r.reserve(parts_.size());
    for (const auto& p : parts_) r.push_back(f(p));
    return RingValue(std::move(r));
  }

  template <class F>
  static RingValue zip(const RingValue& x, const RingValue& y, F f) {
    check_same(x, y);
    std::vector<RingElem> r;
    r.reserve(x.parts_.size());
    for (std::size_t j = 0; j < x.parts_.size(); ++j) r.push_back(f(x.parts_[j], y.parts_[j]));
    return RingValue(std::move(r));
  }

  std::vector<RingElem> parts_;
};

inline bool eq(const RingValue& x, const RingValue& y) { return x == y; }
inline bool is_zero(const RingValue& x) { return x.is_zero(); }

inline RingValue l_pow(const RingDesc& ring, std::int64_t k) {
  std::vector<RingElem> p;
  for (const auto& m : ring.factors) p.push_back(RingElem::l_power(m, k));
  return RingValue(std::move(p));
}

/// Inverse of L^i - L^j for i != j, via L^i - L^j = L^j (L^{i-j} - 1).
inline RingValue invert_l_pow_diff(const RingDesc& ring, std::int64_t i, std::int64_t j) {
  if (i == j) throw usage_error("L^i - L^j is zero for i = j");
  UnitDenominator d;
  std::int64_t low = std::min(i, j);
  d.sign = i > j ? 1 : -1;
  d.binomials[std::abs(detail::checked_sub(i, j))] = 1;
  if (low >= 0) {
    d.l_power = low;
    return RingValue::inverse_of(ring, d);
  }
  return RingValue::inverse_of(ring, d) * l_pow(ring, -low);
}

/// Inverse of 1 - L^b for b != 0.
inline RingValue invert_one_minus_l_pow(const RingDesc& ring, std::int64_t b) {
  if (b == 0) throw usage_error("1 - L^0 is zero");
  return invert_l_pow_diff(ring, 0, b);
}

/// Smallest n >= 1 with n x = 0, or nullopt when x is not torsion.
/// Denominators are non-zero-divisors, so only the numerator matters.
inline std::optional<Integer> torsion_annihilator(const RingElem& x) {
  const auto& m = x.modulus().value();
  if (m == 0) return x.is_zero() ? std::optional<Integer>(1) : std::nullopt;
  Integer n = 1;
  for (const auto& c : x.numerator().coefficients())
    if (c != 0) n = lcm(n, m / gcd(m, c));
  return n;
}

inline std::optional<Integer> torsion_annihilator(const RingValue& x) {
  Integer n = 1;
  for (const auto& p : x.parts()) {
    auto a = torsion_annihilator(p);
    if (!a) return std::nullopt;
    n = lcm(n, *a);
  }
  return n;
}

/// Specialize L to the rational t > 1; defined on characteristic-zero factors only.
inline Rational numeric_eval(const RingElem& x, const Rational& t) {
  if (!x.modulus().is_characteristic_zero())
    throw unsupported_ring_error("numeric evaluation needs a characteristic-zero factor, got " + x.modulus().to_string());
  if (t <= 1) throw usage_error("numeric evaluation needs t > 1");
  return x.evaluate(t);
}

inline Rational numeric_eval(const RingValue& x, const Rational& t) {
  for (const auto& p : x.parts())
    if (!p.modulus().is_characteristic_zero())
      throw unsupported_ring_error("numeric evaluation needs every factor to be Z");
  if (x.parts().size() != 1) throw usage_error("numeric evaluation of a product value: project to one factor first");
  return numeric_eval(x.parts().front(), t);
}

/// The j-th factor of x as a value of the one-factor ring.
inline RingValue project(const RingValue& x, std::size_t j) { return RingValue({x.part(j)}); }

}  // namespace mef
