#pragma once

/**
 * @file decide.hpp
 * @brief Decision procedures for nullity, torsion, equality and integrability.
 *
 * Statements about f = sum c_{a,b} g^a L^{b.g}:
 *   CZ  every c_{a,b} = 0                  -> coefficients_all_zero
 *   CT  every c_{a,b} is torsion           -> torsion_certificate
 *   EZ  f(x) = 0 for every x in N^r        -> pointwise_zero
 * In these rings CT is equivalent to "f is torsion" and to "every f(x) is
 * torsion", and EZ is the notion of f = 0 used throughout (equal() and
 * integrability both reduce to it).
 *
 * pointwise_zero works factor by factor. Over a Z factor the ring is a
 * domain of characteristic zero, so f vanishes pointwise iff every
 * coefficient does. Over a Z/m factor all coefficients are torsion; with
 * N the lcm of their annihilators, the pullback along x -> N x + i kills
 * every binomial term carrying a factor N and leaves the pure exponential
 * sum_b u_{i,b} L^{b.i} L^{N b.x}, u_{i,b} = sum_a c_{a,b} i^a. Such a sum
 * vanishes iff all u_{i,b} do, because the Vandermonde matrix in the
 * units L^{N b} has a unit determinant.
 */

#include "mef/exppoly.hpp"
#include "mef/summation.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace mef {

enum class VerdictTag { Zero, NonZero };

/// A Z-factor coefficient that is nonzero (hence not torsion).
struct NonTorsionCoefficient {
  TermKey key;
  std::size_t factor = 0;
};

/// A Z/m-factor residue class x = N x' + i on which the slope-b part survives.
struct ResidueClassFailure {
  Point residue;
  std::vector<std::int64_t> slope;
  Integer modulus;              // N
  std::int64_t box_side = 0;    // k: the witness lies in N {0..k-1}^r + i
  std::size_t factor = 0;
};

using Cause = std::variant<NonTorsionCoefficient, ResidueClassFailure>;

struct Verdict {
  VerdictTag tag = VerdictTag::Zero;
  std::optional<Cause> cause;
  std::optional<Point> witness;
  std::string diagnostic;

  bool is_zero() const { return tag == VerdictTag::Zero; }
};

struct DecideOptions {
  /// Caps the per-coordinate side of every witness search box.
  std::optional<std::int64_t> witness_bound;
};

struct IntegrabilityReport {
  ExpPoly l0_part;
  ExpPoly finf_part;
  Verdict finf_verdict;
  bool integrable = false;
  std::optional<RingValue> integral;
};

inline bool coefficients_all_zero(const ExpPoly& f) { return f.is_zero(); }

/// lcm of the coefficient annihilators; nullopt if some coefficient is not torsion.
inline std::optional<Integer> torsion_certificate(const ExpPoly& f) {
  Integer n = 1;
  for (const auto& [k, c] : f.terms()) {
    auto a = torsion_annihilator(c);
    if (!a) return std::nullopt;
    n = lcm(n, *a);
  }
  return n;
}

namespace detail {

// Visits {0..side-1}^r in lexicographic order until the visitor returns true.
inline bool first_in_box(std::size_t arity, std::int64_t side, const std::function<bool(const Point&)>& visit) {
  if (side <= 0) return false;
  Point x(arity, 0);
  while (true) {
    if (visit(x)) return true;
    std::size_t i = arity;
    while (i > 0 && x[i - 1] == side - 1) x[--i] = 0;
    if (i == 0) return false;
    ++x[i - 1];
  }
}

inline std::int64_t capped(std::int64_t side, const DecideOptions& opts) {
  return opts.witness_bound ? std::min(side, *opts.witness_bound) : side;
}

inline std::optional<Verdict> decide_char_zero_factor(const ExpPoly& fj, std::size_t factor, const DecideOptions& opts) {
  if (fj.is_zero()) return std::nullopt;
  Verdict v;
  v.tag = VerdictTag::NonZero;
  v.cause = NonTorsionCoefficient{fj.terms().begin()->first, factor};
  const std::int64_t side =
      capped((max_degree(fj) + 1) * static_cast<std::int64_t>(distinct_slopes(fj).size()), opts);
  Evaluator ev(fj);
  Point found;
  if (first_in_box(fj.arity(), side, [&](const Point& x) {
        if (ev(x).is_zero()) return false;
        found = x;
        return true;
      }))
    v.witness = found;
  else
    v.diagnostic = "no witness in the search box of side " + std::to_string(side);
  return v;
}

inline std::optional<Verdict> decide_torsion_factor(const ExpPoly& fj, std::size_t factor, const DecideOptions& opts) {
  if (fj.is_zero()) return std::nullopt;
  const Integer N = *torsion_certificate(fj);
  const std::int64_t n = to_int64(N);
  const auto slices = slice_by_slope(fj);
  std::vector<std::pair<std::vector<std::int64_t>, Evaluator>> slice_evals;
  for (const auto& [b, s] : slices) slice_evals.emplace_back(b, Evaluator(s));

  Point residue;
  std::vector<std::int64_t> slope;
  const bool failed = first_in_box(fj.arity(), n, [&](const Point& i) {
    for (const auto& [b, ev] : slice_evals) {
      if (!ev(i).is_zero()) {
        residue = i;
        slope = b;
        return true;
      }
    }
    return false;
  });
  if (!failed) return std::nullopt;

  const auto k = static_cast<std::int64_t>(slices.size());
  Verdict v;
  v.tag = VerdictTag::NonZero;
  v.cause = ResidueClassFailure{residue, slope, N, k, factor};
  Evaluator ev(fj);
  Point found;
  const std::int64_t side = capped(k, opts);
  if (first_in_box(fj.arity(), side, [&](const Point& xp) {
        Point x(xp.size());
        for (std::size_t t = 0; t < xp.size(); ++t) x[t] = checked_add(checked_mul(n, xp[t]), residue[t]);
        if (ev(x).is_zero()) return false;
        found = x;
        return true;
      }))
    v.witness = found;
  else
    v.diagnostic = "no witness in the residue box of side " + std::to_string(side);
  return v;
}

}  // namespace detail

/// Decides whether f(x) = 0 for every x in N^r.
inline Verdict pointwise_zero(const ExpPoly& f, const DecideOptions& opts = {}) {
  for (std::size_t j = 0; j < f.ring().size(); ++j) {
    ExpPoly fj = project(f, j);
    auto v = f.ring().factors[j].is_characteristic_zero() ? detail::decide_char_zero_factor(fj, j, opts)
                                                          : detail::decide_torsion_factor(fj, j, opts);
    if (v) return *v;
  }
  return Verdict{};
}

inline Verdict equal(const ExpPoly& f, const ExpPoly& g, const DecideOptions& opts = {}) {
  return pointwise_zero(f - g, opts);
}

/// (terms with every slope <= -1, the rest).
inline std::pair<ExpPoly, ExpPoly> split_integrable(const ExpPoly& f) {
  ExpPoly l0(f.arity(), f.ring());
  ExpPoly finf(f.arity(), f.ring());
  for (const auto& [k, c] : f.terms()) {
    bool negative = std::all_of(k.b.begin(), k.b.end(), [](std::int64_t b) { return b <= -1; });
    (negative ? l0 : finf).accumulate(k, c);
  }
  return {l0, finf};
}

/// f is integrable over N^r iff its non-decaying part f_inf vanishes pointwise;
/// the integral is then the closed-form sum of the decaying part.
inline IntegrabilityReport decide_integrable(const ExpPoly& f, const DecideOptions& opts = {},
                                             const EulerianTable& table = default_eulerian_table()) {
  auto [l0, finf] = split_integrable(f);
  IntegrabilityReport rep{l0, finf, pointwise_zero(finf, opts), false, std::nullopt};
  rep.integrable = rep.finf_verdict.is_zero();
  if (rep.integrable) rep.integral = sum_all(l0, table);
  return rep;
}

}  // namespace mef
