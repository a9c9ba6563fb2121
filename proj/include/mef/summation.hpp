#pragma once

// Closed-form sums over N^r for terms with strictly negative slopes.
//
//   sum_{x>=0} x^a q^x = q A_a(q) / (1-q)^{a+1},  A_a(q) = sum_j A(a,j) q^j,
//
// with A(a,j) the Eulerian numbers and q = L^b. Only integer multiples and
// the unit inverse of 1 - L^b appear, so the formula is valid over Z/m too.

#include "mef/exppoly.hpp"

#include <string>
#include <vector>

namespace mef {

/// Eulerian numbers A(n, k) for n <= max_degree.
class EulerianTable {
 public:
  static constexpr std::size_t default_max_degree = 32;

  explicit EulerianTable(std::size_t max_degree = default_max_degree) : rows_(max_degree + 1) {
    rows_[0] = {1};
    for (std::size_t n = 1; n <= max_degree; ++n) {
      rows_[n].assign(n, 0);
      for (std::size_t k = 0; k < n; ++k) {
        const auto& prev = rows_[n - 1];
        Integer same = k < prev.size() ? prev[k] : Integer(0);
        Integer lower = k >= 1 && k - 1 < prev.size() ? prev[k - 1] : Integer(0);
        rows_[n][k] = Integer(k + 1) * same + Integer(n - k) * lower;
      }
    }
  }

  std::size_t max_degree() const { return rows_.size() - 1; }

  const Integer& at(std::size_t n, std::size_t k) const {
    if (n > max_degree()) throw usage_error("Eulerian table holds degrees up to " + std::to_string(max_degree()));
    return rows_[n].at(k);
  }

  const std::vector<Integer>& row(std::size_t n) const {
    if (n > max_degree()) throw usage_error("Eulerian table holds degrees up to " + std::to_string(max_degree()));
    return rows_[n];
  }

 private:
  std::vector<std::vector<Integer>> rows_;
};

inline const EulerianTable& default_eulerian_table() {
  static const EulerianTable table;
  return table;
}

/// sum_{x >= 0} x^a L^{b x} for b <= -1.
inline RingValue series_sum(std::int64_t a, std::int64_t b, const RingDesc& ring,
                            const EulerianTable& table = default_eulerian_table()) {
  if (a < 0) throw usage_error("polynomial exponent must be non-negative");
  if (b >= 0) throw divergence_error("sum of x^" + std::to_string(a) + " L^(" + std::to_string(b) + "x) diverges");
  RingValue inv = invert_one_minus_l_pow(ring, b);
  if (a == 0) return inv;
  RingValue numer = RingValue::zero(ring);
  const auto& row = table.row(static_cast<std::size_t>(a));
  for (std::size_t j = 0; j < row.size(); ++j)
    numer += l_pow(ring, detail::checked_mul(b, static_cast<std::int64_t>(j) + 1)).scaled(row[j]);
  RingValue den = RingValue::one(ring);
  for (std::int64_t k = 0; k <= a; ++k) den *= inv;
  return numer * den;
}

/// sum over x in N^r of f(x); every slope coordinate of every term must be <= -1.
inline RingValue sum_all(const ExpPoly& f, const EulerianTable& table = default_eulerian_table()) {
  RingValue total = RingValue::zero(f.ring());
  for (const auto& [k, c] : f.terms()) {
    RingValue t = c;
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (k.b[i] >= 0) throw divergence_error("term has non-negative slope in coordinate g" + std::to_string(i + 1));
      t *= series_sum(k.a[i], k.b[i], f.ring(), table);
    }
    total += t;
  }
  return total;
}

/// Exact sum of f over the box {0..M}^r.
inline RingValue partial_sum(const ExpPoly& f, std::int64_t M) { return Evaluator(f).box_sum(M); }

}  // namespace mef
