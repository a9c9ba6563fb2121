#pragma once

/**
 * @file exppoly.hpp
 * @brief Exponential polynomials f = sum c_{a,b} g^a L^{b.g} on N^r.
 *
 * A term key is a pair (a, b) with a in N^r (polynomial exponents) and
 * b in Z^r (exponential slopes); the coefficient lives in a product ring
 * from ring.hpp. The term table never stores a zero coefficient, so the
 * empty table is the zero function and coefficient nullity is structural.
 *
 * Variables are indexed from 0 in this API; the textual syntax names them
 * g1..gr.
 */

#include "mef/ring.hpp"

#include <compare>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace mef {

using Point = std::vector<std::int64_t>;

/// (a, b); ordered lexicographically on a, then b.
struct TermKey {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;

  TermKey() = default;
  TermKey(std::vector<std::int64_t> a_, std::vector<std::int64_t> b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.size() != b.size()) throw usage_error("term key: exponent and slope tuples differ in length");
    for (auto x : a)
      if (x < 0) throw usage_error("term key: polynomial exponents must be non-negative");
  }

  static TermKey zero(std::size_t arity) { return TermKey(std::vector<std::int64_t>(arity), std::vector<std::int64_t>(arity)); }

  std::size_t arity() const { return a.size(); }

  friend TermKey operator+(const TermKey& x, const TermKey& y) {
    TermKey r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) {
      r.a[i] = detail::checked_add(r.a[i], y.a[i]);
      r.b[i] = detail::checked_add(r.b[i], y.b[i]);
    }
    return r;
  }

  friend auto operator<=>(const TermKey&, const TermKey&) = default;
  friend bool operator==(const TermKey&, const TermKey&) = default;
};

class ExpPoly {
 public:
  using Terms = std::map<TermKey, RingValue>;

  ExpPoly() = default;
  ExpPoly(std::size_t arity, RingDesc ring) : arity_(arity), ring_(std::move(ring)) {}

  static ExpPoly term(std::size_t arity, const TermKey& key, const RingValue& c) {
    ExpPoly f(arity, c.desc());
    f.accumulate(key, c);
    return f;
  }

  static ExpPoly constant(std::size_t arity, const RingValue& c) { return term(arity, TermKey::zero(arity), c); }

  /// g_i
  static ExpPoly variable(std::size_t arity, const RingDesc& ring, std::size_t i) {
    if (i >= arity) throw usage_error("variable index out of range");
    TermKey k = TermKey::zero(arity);
    k.a[i] = 1;
    return term(arity, k, RingValue::one(ring));
  }

  /// L^{b.g}
  static ExpPoly exponential(const RingDesc& ring, std::vector<std::int64_t> slope) {
    const std::size_t r = slope.size();
    return term(r, TermKey(std::vector<std::int64_t>(r), std::move(slope)), RingValue::one(ring));
  }

  std::size_t arity() const { return arity_; }
  const RingDesc& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  RingValue coefficient(const TermKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? RingValue::zero(ring_) : it->second;
  }

  /// The value of an arity-0 polynomial.
  RingValue constant_value() const {
    if (arity_ != 0) throw usage_error("constant_value needs arity 0");
    return coefficient(TermKey::zero(0));
  }

  /// Adds c * (term at key); drops the entry if the sum vanishes.
  void accumulate(const TermKey& key, const RingValue& c) {
    if (key.arity() != arity_) throw usage_error("term key arity mismatch");
    if (!(c.desc() == ring_)) throw usage_error("coefficient ring mismatch");
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(key, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  bool identical(const ExpPoly& o) const {
    if (arity_ != o.arity_ || !(ring_ == o.ring_) || terms_.size() != o.terms_.size()) return false;
    auto j = o.terms_.begin();
    for (auto i = terms_.begin(); i != terms_.end(); ++i, ++j)
      if (!(i->first == j->first) || !i->second.identical(j->second)) return false;
    return true;
  }

  ExpPoly scaled(const RingValue& c) const {
    ExpPoly r(arity_, ring_);
    for (const auto& [k, v] : terms_) r.accumulate(k, v * c);
    return r;
  }

  ExpPoly scaled(const Integer& n) const {
    ExpPoly r(arity_, ring_);
    for (const auto& [k, v] : terms_) r.accumulate(k, v.scaled(n));
    return r;
  }

  ExpPoly operator-() const { return scaled(Integer(-1)); }

  friend ExpPoly operator+(const ExpPoly& f, const ExpPoly& g) {
    check_same(f, g);
    ExpPoly r = f;
    for (const auto& [k, v] : g.terms_) r.accumulate(k, v);
    return r;
  }

  friend ExpPoly operator-(const ExpPoly& f, const ExpPoly& g) { return f + (-g); }

  friend ExpPoly operator*(const ExpPoly& f, const ExpPoly& g) {
    check_same(f, g);
    ExpPoly r(f.arity_, f.ring_);
    for (const auto& [k1, v1] : f.terms_)
      for (const auto& [k2, v2] : g.terms_) r.accumulate(k1 + k2, v1 * v2);
    return r;
  }

  friend ExpPoly operator*(const RingValue& c, const ExpPoly& f) { return f.scaled(c); }
  friend ExpPoly operator*(const Integer& n, const ExpPoly& f) { return f.scaled(n); }

  ExpPoly& operator+=(const ExpPoly& g) { return *this = *this + g; }
  ExpPoly& operator-=(const ExpPoly& g) { return *this = *this - g; }

  /// Same key set and semantically equal coefficients (the CZ notion of equality).
  friend bool operator==(const ExpPoly& f, const ExpPoly& g) {
    check_same(f, g);
    if (f.terms_.size() != g.terms_.size()) return false;
    auto j = g.terms_.begin();
    for (auto i = f.terms_.begin(); i != f.terms_.end(); ++i, ++j)
      if (!(i->first == j->first) || !(i->second == j->second)) return false;
    return true;
  }

 private:
  static void check_same(const ExpPoly& f, const ExpPoly& g) {
    if (f.arity_ != g.arity_) throw usage_error("arity mismatch");
    if (!(f.ring_ == g.ring_)) throw usage_error("ring descriptor mismatch");
  }

  std::size_t arity_ = 0;
  RingDesc ring_;
  Terms terms_;
};

namespace detail {

// Laurent polynomial accumulator in L with a movable lower end.
struct LaurentSum {
  std::int64_t low = 0;
  std::vector<Integer> c;

  void add(const Poly& p, const Integer& factor, std::int64_t shift) {
    if (p.is_zero() || factor == 0) return;
    const auto& pc = p.coefficients();
    if (c.empty()) low = shift;
    if (shift < low) {
      c.insert(c.begin(), static_cast<std::size_t>(low - shift), Integer(0));
      low = shift;
    }
    auto off = static_cast<std::size_t>(shift - low);
    if (c.size() < off + pc.size()) c.resize(off + pc.size());
    for (std::size_t j = 0; j < pc.size(); ++j) c[off + j] += pc[j] * factor;
  }

  RingElem finish(const Modulus& mod, UnitDenominator den) const {
    if (c.empty()) return RingElem(mod);
    UnitDenominator shift;
    std::vector<Integer> coeffs = c;
    if (low < 0) shift.l_power = -low;
    else coeffs.insert(coeffs.begin(), static_cast<std::size_t>(low), Integer(0));
    return RingElem(Poly(mod, std::move(coeffs)), den * shift);
  }
};

}  // namespace detail

/// Repeated point evaluation of one polynomial. Coefficients are put over a
/// common denominator once, so each point costs only Laurent additions.
class Evaluator {
 public:
  explicit Evaluator(const ExpPoly& f) : arity_(f.arity()), ring_(f.ring()) {
    for (std::size_t j = 0; j < ring_.size(); ++j) {
      UnitDenominator d;
      for (const auto& [k, v] : f.terms()) d = detail::common_denominator(d, v.part(j).denominator());
      dens_.push_back(d);
    }
    for (const auto& [k, v] : f.terms()) {
      std::vector<Poly> nums;
      for (std::size_t j = 0; j < ring_.size(); ++j)
        nums.push_back(detail::lift_to(v.part(j).numerator(), v.part(j).denominator(), dens_[j]));
      terms_.push_back({k, std::move(nums)});
    }
  }

  RingValue operator()(const Point& x) const {
    std::vector<detail::LaurentSum> acc(ring_.size());
    add_point(x, acc);
    return finish(acc);
  }

  /// Exact sum over the box {0..M}^r.
  RingValue box_sum(std::int64_t M) const {
    std::vector<detail::LaurentSum> acc(ring_.size());
    if (M >= 0) {
      Point x(arity_, 0);
      while (true) {
        add_point(x, acc);
        std::size_t i = arity_;
        while (i > 0 && x[i - 1] == M) x[--i] = 0;
        if (i == 0) break;
        ++x[i - 1];
      }
    }
    return finish(acc);
  }

 private:
  struct Term {
    TermKey key;
    std::vector<Poly> nums;
  };

  void add_point(const Point& x, std::vector<detail::LaurentSum>& acc) const {
    if (x.size() != arity_) throw usage_error("evaluation point has wrong arity");
    for (auto xi : x)
      if (xi < 0) throw usage_error("evaluation point must lie in N^r");
    for (const auto& t : terms_) {
      Integer mono = 1;
      for (std::size_t i = 0; i < arity_; ++i) mono *= pow(Integer(x[i]), static_cast<std::uint64_t>(t.key.a[i]));
      std::int64_t shift = detail::dot(t.key.b, x);
      for (std::size_t j = 0; j < ring_.size(); ++j) acc[j].add(t.nums[j], ring_.factors[j].reduce(mono), shift);
    }
  }

  RingValue finish(const std::vector<detail::LaurentSum>& acc) const {
    std::vector<RingElem> parts;
    for (std::size_t j = 0; j < ring_.size(); ++j) parts.push_back(acc[j].finish(ring_.factors[j], dens_[j]));
    return RingValue(std::move(parts));
  }

  std::size_t arity_;
  RingDesc ring_;
  std::vector<UnitDenominator> dens_;
  std::vector<Term> terms_;
};

/// f(x) = sum c_{a,b} x^a L^{b.x}, exactly.
inline RingValue evaluate(const ExpPoly& f, const Point& x) { return Evaluator(f)(x); }

inline void check_index(const ExpPoly& f, std::size_t i) {
  if (i >= f.arity()) throw usage_error("variable index " + std::to_string(i) + " out of range for arity " + std::to_string(f.arity()));
}

namespace detail {

inline std::vector<std::int64_t> drop(const std::vector<std::int64_t>& v, std::size_t i) {
  std::vector<std::int64_t> r;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != i) r.push_back(v[j]);
  return r;
}

inline std::vector<std::int64_t> insert(const std::vector<std::int64_t>& v, std::size_t i, std::int64_t x) {
  auto r = v;
  r.insert(r.begin() + static_cast<std::ptrdiff_t>(i), x);
  return r;
}

}  // namespace detail

/// Substitute g_i = x_i; the result has arity r - 1.
inline ExpPoly partial_evaluate(const ExpPoly& f, std::size_t i, std::int64_t xi) {
  check_index(f, i);
  if (xi < 0) throw usage_error("partial evaluation point must be a natural number");
  ExpPoly r(f.arity() - 1, f.ring());
  for (const auto& [k, c] : f.terms()) {
    Integer mono = pow(Integer(xi), static_cast<std::uint64_t>(k.a[i]));
    auto v = c.scaled(mono) * l_pow(f.ring(), detail::checked_mul(k.b[i], xi));
    r.accumulate(TermKey(detail::drop(k.a, i), detail::drop(k.b, i)), v);
  }
  return r;
}

/// Pullback along g_i -> e g_i + d (e >= 1, d >= 0).
inline ExpPoly affine_substitute(const ExpPoly& f, std::size_t i, std::int64_t e, std::int64_t d) {
  check_index(f, i);
  if (e <= 0) throw usage_error("affine substitution needs a positive stretch e");
  if (d < 0) throw usage_error("affine substitution needs a non-negative shift d");
  ExpPoly r(f.arity(), f.ring());
  for (const auto& [k, c] : f.terms()) {
    const std::int64_t ai = k.a[i];
    const std::int64_t bi = k.b[i];
    RingValue base = c * l_pow(f.ring(), detail::checked_mul(bi, d));
    TermKey nk = k;
    nk.b[i] = detail::checked_mul(e, bi);
    for (std::int64_t j = 0; j <= ai; ++j) {
      Integer s = binomial(ai, j) * pow(Integer(e), static_cast<std::uint64_t>(j)) *
                  pow(Integer(d), static_cast<std::uint64_t>(ai - j));
      nk.a[i] = j;
      r.accumulate(nk, base.scaled(s));
    }
  }
  return r;
}

/// f(.., g_i + 1, ..) - L^beta f
inline ExpPoly difference(const ExpPoly& f, std::size_t i, std::int64_t beta) {
  check_index(f, i);
  return affine_substitute(f, i, 1, 1) - f.scaled(l_pow(f.ring(), beta));
}

/// f regrouped as sum over (a_i, b_i) of c'_{a_i,b_i} g_i^{a_i} L^{b_i g_i},
/// with c' of arity r - 1 in the remaining variables.
struct CollectedPoly {
  std::size_t pivot = 0;
  std::size_t arity = 0;
  RingDesc ring;
  std::map<std::pair<std::int64_t, std::int64_t>, ExpPoly> table;
};

inline CollectedPoly collect(const ExpPoly& f, std::size_t i) {
  check_index(f, i);
  CollectedPoly cp{i, f.arity(), f.ring(), {}};
  for (const auto& [k, c] : f.terms()) {
    auto [it, fresh] = cp.table.try_emplace({k.a[i], k.b[i]}, f.arity() - 1, f.ring());
    it->second.accumulate(TermKey(detail::drop(k.a, i), detail::drop(k.b, i)), c);
  }
  return cp;
}

inline ExpPoly expand(const CollectedPoly& cp) {
  ExpPoly r(cp.arity, cp.ring);
  for (const auto& [ab, sub] : cp.table)
    for (const auto& [k, c] : sub.terms())
      r.accumulate(TermKey(detail::insert(k.a, cp.pivot, ab.first), detail::insert(k.b, cp.pivot, ab.second)), c);
  return r;
}

/// f = sum_b slice(b) L^{b.g}; each slice has only b = 0 keys.
inline std::map<std::vector<std::int64_t>, ExpPoly> slice_by_slope(const ExpPoly& f) {
  std::map<std::vector<std::int64_t>, ExpPoly> out;
  for (const auto& [k, c] : f.terms()) {
    auto [it, fresh] = out.try_emplace(k.b, f.arity(), f.ring());
    it->second.accumulate(TermKey(k.a, std::vector<std::int64_t>(f.arity())), c);
  }
  return out;
}

inline TermKey lex_max_key(const ExpPoly& f) {
  if (f.is_zero()) throw usage_error("lex_max_key of the zero function");
  return f.terms().rbegin()->first;
}

inline std::set<std::vector<std::int64_t>> distinct_slopes(const ExpPoly& f) {
  std::set<std::vector<std::int64_t>> s;
  for (const auto& [k, c] : f.terms()) s.insert(k.b);
  return s;
}

/// Largest single polynomial exponent a_i over all terms and coordinates.
inline std::int64_t max_degree(const ExpPoly& f) {
  std::int64_t m = 0;
  for (const auto& [k, c] : f.terms())
    for (auto x : k.a) m = std::max(m, x);
  return m;
}

/// The j-th factor of the coefficient ring.
inline ExpPoly project(const ExpPoly& f, std::size_t j) {
  ExpPoly r(f.arity(), RingDesc({f.ring().factors.at(j)}));
  for (const auto& [k, c] : f.terms()) r.accumulate(k, project(c, j));
  return r;
}

}  // namespace mef
