#pragma once

// Analytic quantities of the first-moment lower bound for s_{kn}(C_n^r).
//
// Sequences of N vectors in {0,1}^r are drawn with each coordinate equal to 1
// with probability q. A fixed length-kn subsequence sums to zero in one
// coordinate with probability Q = sum_i P_{in}, where
//   P_{in} = C(kn, in) q^{in} (1-q)^{(k-i)n},
// so the expected number of zero-sum kn-subsequences is E[Z] = C(N, kn) Q^r.
//
// Functions taking a Real q evaluate at q's precision. Overloads taking a
// Rational q are exact; they are the n = 1 oracle tier.

#include "zerosum/exactmath.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace zerosum {

struct ConstructionParams {
  long n = 1;  // group exponent
  long k = 2;  // length multiplier
  long r = 1;  // rank

  long L() const { return k * n; }

  // Throws std::invalid_argument unless n >= 1, k >= 2, r >= 1.
  void validate() const;
};

/// q* = 1 / (1 + C(kn,n)^{1/n}), the root of (1-q)^{kn} = C(kn,n) q^n (1-q)^{(k-1)n}.
Real balance_q(const ConstructionParams& params, const PrecisionContext& ctx);
/// Exact q* = 1/(1+k); only defined for n = 1.
Rational balance_q_exact(const ConstructionParams& params);

/// |(1-q)^{kn} - C(kn,n) q^n (1-q)^{(k-1)n}|.
Real balance_residual(const ConstructionParams& params, const Real& q);

/// Endpoints of the open interval that must contain q*:
/// (1/(1+B), 1/(1+(4(k-1)n)^{-1/n} B)) with B = k^k/(k-1)^{k-1}.
struct QInterval {
  Real lower;
  Real upper;
};
QInterval balance_q_interval(const ConstructionParams& params, const PrecisionContext& ctx);

/// Entries P_0, P_n, ..., P_{kn}. Throws std::domain_error unless 0 < q < 1.
std::vector<Real> coord_profile(const ConstructionParams& params, const Real& q);
std::vector<Rational> coord_profile(const ConstructionParams& params, const Rational& q);

/// Q, the probability that one coordinate of a length-kn draw sums to 0 mod n.
Real coord_zero_prob(const ConstructionParams& params, const Real& q);
Rational coord_zero_prob(const ConstructionParams& params, const Rational& q);

/// log E[Z] = log C(N, kn) + r log Q; std::nullopt when N < kn (E[Z] = 0).
std::optional<Real> log_expected_z(const ConstructionParams& params, const Real& q,
                                   const Integer& N);
/// E[Z] = C(N, kn) Q^r, evaluated in the log domain.
Real expected_z(const ConstructionParams& params, const Real& q, const Integer& N);
Rational expected_z(const ConstructionParams& params, const Rational& q, const Integer& N);

/// (4N/L)^L (k+1)^r (1-q)^{Lr}, the closed-form majorant of E[Z] at balanced q.
/// Requires N >= L.
Real paper_ez_bound(const ConstructionParams& params, const Real& q, const Integer& N);
Rational paper_ez_bound(const ConstructionParams& params, const Rational& q, const Integer& N);

/// Largest N with E[Z] < 1 (strict). At least L - 1.
Integer max_witness_n(const ConstructionParams& params, const Real& q);

struct QOptimum {
  Real q;
  Integer n;
};

inline constexpr std::size_t kQGridPoints = 10000;
inline constexpr int kQRefineBits = 40;

/// Maximises max_witness_n over q in (0,1). Since max_witness_n is
/// nonincreasing in Q, this minimises Q on a fixed grid, refines the best cell
/// by golden section to width 2^-40, and never returns less than balance_q
/// achieves. Ties go to the smaller q.
QOptimum optimize_q(const ConstructionParams& params, const PrecisionContext& ctx);

/// A(k,n) = 1 / ((k+1)^{1/(kn)} (1 - q*)). Values below 1 make the bound vacuous.
Real finite_base_a(const ConstructionParams& params, const PrecisionContext& ctx);

/// 1 + (k-1)^{k-1} / k^k.
Rational asymptotic_base(long k);
/// 1 + 1/(e k).
Real prior_base(long k, const PrecisionContext& ctx);

struct BaseComparison {
  Rational new_base;
  Real old_base;
  bool sharper = false;
};
/// Requires k >= 3.
BaseComparison compare_bases(long k, const PrecisionContext& ctx);

struct BoundReport {
  ConstructionParams params;
  Real q;
  std::vector<Real> profile;
  Real coord_zero_prob;
  Real a_finite;
  Rational a_asymptotic;
  Real prior_base;

  // Exact counterparts, present only for n = 1.
  std::optional<Rational> q_exact;
  std::optional<std::vector<Rational>> profile_exact;
  std::optional<Rational> coord_zero_prob_exact;

  bool vacuous() const { return a_finite <= Real(1L, a_finite.precision()); }
};

BoundReport bound_report(const ConstructionParams& params, const PrecisionContext& ctx);

}  // namespace zerosum
