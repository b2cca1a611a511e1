#include "zerosum/boundengine.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace zerosum {

void ConstructionParams::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1, got " + std::to_string(n));
  if (k < 2) throw std::invalid_argument("k must be >= 2, got " + std::to_string(k));
  if (r < 1) throw std::invalid_argument("r must be >= 1, got " + std::to_string(r));
}

namespace {

unsigned long ul(long v) { return static_cast<unsigned long>(v); }

void check_open_unit(const Real& q) {
  const Real zero(q.precision());
  const Real one(1L, q.precision());
  if (!(q > zero && q < one)) {
    throw std::domain_error("q must lie strictly inside (0,1), got " + q.to_string(20));
  }
}

void check_open_unit(const Rational& q) {
  if (!(q > Rational(0) && q < Rational(1))) {
    throw std::domain_error("q must lie strictly inside (0,1), got " + q.to_string());
  }
}

Real lift(const Integer& v, const Real& like) { return Real(v, like.precision()); }
Rational lift(const Integer& v, const Rational&) { return Rational(v); }
Real unit(const Real& like) { return Real(1L, like.precision()); }
Rational unit(const Rational&) { return Rational(1); }

template <class Scalar>
std::vector<Scalar> profile_impl(const ConstructionParams& params, const Scalar& q) {
  params.validate();
  check_open_unit(q);
  const Scalar p = unit(q) - q;
  std::vector<Scalar> out;
  out.reserve(ul(params.k) + 1);
  for (long i = 0; i <= params.k; ++i) {
    Scalar term = lift(binom(ul(params.L()), ul(i * params.n)), q);
    term = term * pow(q, ul(i * params.n));
    term = term * pow(p, ul((params.k - i) * params.n));
    out.push_back(std::move(term));
  }
  return out;
}

template <class Scalar>
Scalar sum(const std::vector<Scalar>& values, Scalar acc) {
  for (const auto& v : values) acc = acc + v;
  return acc;
}

}  // namespace

Real balance_q(const ConstructionParams& params, const PrecisionContext& ctx) {
  params.validate();
  ctx.validate();
  const Real c = nth_root(Rational(binom(ul(params.L()), ul(params.n))), ul(params.n), ctx);
  return Real(1L, ctx.bits) / (Real(1L, ctx.bits) + c);
}

Rational balance_q_exact(const ConstructionParams& params) {
  params.validate();
  if (params.n != 1) throw std::invalid_argument("exact balancing q is only rational for n = 1");
  return Rational(1) / Rational(params.k + 1);
}

Real balance_residual(const ConstructionParams& params, const Real& q) {
  params.validate();
  const unsigned bits = q.precision();
  const Real p = Real(1L, bits) - q;
  const Real lhs = pow(p, ul(params.L()));
  const Real rhs = Real(binom(ul(params.L()), ul(params.n)), bits) * pow(q, ul(params.n)) *
                   pow(p, ul((params.k - 1) * params.n));
  return abs(lhs - rhs);
}

QInterval balance_q_interval(const ConstructionParams& params, const PrecisionContext& ctx) {
  params.validate();
  ctx.validate();
  const Rational base = sondow_upper(params.k, 1);
  const Real one(1L, ctx.bits);
  const Real b(base, ctx.bits);
  const Real shrink = nth_root(Rational(4 * (params.k - 1) * params.n), ul(params.n), ctx);
  return QInterval{one / (one + b), one / (one + b / shrink)};
}

std::vector<Real> coord_profile(const ConstructionParams& params, const Real& q) {
  return profile_impl(params, q);
}

std::vector<Rational> coord_profile(const ConstructionParams& params, const Rational& q) {
  return profile_impl(params, q);
}

Real coord_zero_prob(const ConstructionParams& params, const Real& q) {
  return sum(coord_profile(params, q), Real(q.precision()));
}

Rational coord_zero_prob(const ConstructionParams& params, const Rational& q) {
  return sum(coord_profile(params, q), Rational(0));
}

std::optional<Real> log_expected_z(const ConstructionParams& params, const Real& q,
                                   const Integer& N) {
  const Real zero_prob = coord_zero_prob(params, q);
  if (N < params.L()) return std::nullopt;
  const PrecisionContext ctx{q.precision()};
  return log_binom(N, Integer(params.L()), ctx) + Real(params.r, ctx.bits) * log(zero_prob);
}

Real expected_z(const ConstructionParams& params, const Real& q, const Integer& N) {
  const auto logz = log_expected_z(params, q, N);
  if (!logz) return Real(q.precision());
  return exp(*logz);
}

Rational expected_z(const ConstructionParams& params, const Rational& q, const Integer& N) {
  const Rational zero_prob = coord_zero_prob(params, q);
  if (N < params.L()) return Rational(0);
  return Rational(binom(N, Integer(params.L()))) * pow(zero_prob, ul(params.r));
}

Real paper_ez_bound(const ConstructionParams& params, const Real& q, const Integer& N) {
  params.validate();
  check_open_unit(q);
  if (N < params.L()) throw std::domain_error("paper_ez_bound needs N >= kn");
  const unsigned bits = q.precision();
  const Real ratio = Real(Rational(4 * N, Integer(params.L())), bits);
  const Real l(params.L(), bits);
  Real logb = l * log(ratio);
  logb += Real(params.r, bits) * log(Real(params.k + 1, bits));
  logb += l * Real(params.r, bits) * log(Real(1L, bits) - q);
  return exp(logb);
}

Rational paper_ez_bound(const ConstructionParams& params, const Rational& q, const Integer& N) {
  params.validate();
  check_open_unit(q);
  if (N < params.L()) throw std::domain_error("paper_ez_bound needs N >= kn");
  const Rational ratio(4 * N, Integer(params.L()));
  return pow(ratio, ul(params.L())) * pow(Rational(params.k + 1), ul(params.r)) *
         pow(Rational(1) - q, ul(params.L() * params.r));
}

Integer max_witness_n(const ConstructionParams& params, const Real& q) {
  params.validate();
  check_open_unit(q);
  const Integer below(params.L() - 1);
  // In C_1 every coordinate sum is zero: Q = 1 and E[Z] = C(N, L) >= 1 for N >= L.
  if (params.n == 1) return below;

  auto free_on_average = [&](const Integer& N) {
    const auto logz = log_expected_z(params, q, N);
    return !logz || logz->sign() < 0;
  };
  Integer lo = below;  // E[Z](lo) < 1
  Integer hi = params.L();
  while (free_on_average(hi)) {
    lo = hi;
    hi *= 2;
  }
  // Invariant: E[Z](lo) < 1 <= E[Z](hi).
  while (hi - lo > 1) {
    const Integer mid = (lo + hi) / 2;
    if (free_on_average(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

QOptimum optimize_q(const ConstructionParams& params, const PrecisionContext& ctx) {
  params.validate();
  ctx.validate();
  const unsigned bits = ctx.bits;
  const Real one(1L, bits);
  const Real grid_den(static_cast<long>(kQGridPoints + 1), bits);
  auto grid_point = [&](std::size_t j) { return Real(static_cast<long>(j), bits) / grid_den; };

  if (params.n == 1) {
    // Q = 1 for every q, so every grid point ties; take the smallest.
    return QOptimum{grid_point(1), Integer(params.L() - 1)};
  }

  std::size_t best_j = 1;
  Real best_zero_prob = coord_zero_prob(params, grid_point(1));
  for (std::size_t j = 2; j <= kQGridPoints; ++j) {
    Real zp = coord_zero_prob(params, grid_point(j));
    if (zp < best_zero_prob) {
      best_zero_prob = std::move(zp);
      best_j = j;
    }
  }

  // Golden-section search for the minimum of Q on the neighbouring cells.
  Real a = grid_point(best_j - 1);
  Real b = best_j == kQGridPoints ? one : grid_point(best_j + 1);
  const Real inv_phi = (nth_root(Rational(5), 2, ctx) - one) / Real(2L, bits);
  Real tolerance(1L, bits);
  mpfr_div_2si(tolerance.get(), tolerance.get(), kQRefineBits, MPFR_RNDN);

  auto eval = [&](const Real& x) {
    if (x.sign() <= 0 || !(x < one)) return one;
    return coord_zero_prob(params, x);
  };
  Real c = b - inv_phi * (b - a);
  Real d = a + inv_phi * (b - a);
  Real fc = eval(c);
  Real fd = eval(d);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  Real refined = fc <= fd ? c : d;
  Real refined_zero_prob = eval(refined);

  Real q_opt = grid_point(best_j);
  if (refined_zero_prob < best_zero_prob) q_opt = std::move(refined);
  Integer n_opt = max_witness_n(params, q_opt);

  Real q_bal = balance_q(params, ctx);
  Integer n_bal = max_witness_n(params, q_bal);
  if (n_bal > n_opt) return QOptimum{std::move(q_bal), std::move(n_bal)};
  return QOptimum{std::move(q_opt), std::move(n_opt)};
}

Real finite_base_a(const ConstructionParams& params, const PrecisionContext& ctx) {
  params.validate();
  ctx.validate();
  const unsigned bits = ctx.bits;
  const Real one(1L, bits);
  // With c = C(kn,n)^{1/n}, 1 - q* = c / (1 + c).
  const Real c = nth_root(Rational(binom(ul(params.L()), ul(params.n))), ul(params.n), ctx);
  const Real root = nth_root(Rational(params.k + 1), ul(params.L()), ctx);
  return (one + c) / (c * root);
}

Rational asymptotic_base(long k) {
  if (k < 2) throw std::invalid_argument("asymptotic_base needs k >= 2, got " + std::to_string(k));
  return Rational(1) + Rational(1) / sondow_upper(k, 1);
}

Real prior_base(long k, const PrecisionContext& ctx) {
  if (k < 2) throw std::invalid_argument("prior_base needs k >= 2, got " + std::to_string(k));
  ctx.validate();
  const Real one(1L, ctx.bits);
  return one + one / (euler_e(ctx.bits) * Real(k, ctx.bits));
}

BaseComparison compare_bases(long k, const PrecisionContext& ctx) {
  if (k < 3) throw std::invalid_argument("compare_bases needs k >= 3, got " + std::to_string(k));
  Rational fresh = asymptotic_base(k);
  Real old = prior_base(k, ctx);
  const bool sharper = Real(fresh, ctx.bits) > old;
  return BaseComparison{std::move(fresh), std::move(old), sharper};
}

BoundReport bound_report(const ConstructionParams& params, const PrecisionContext& ctx) {
  params.validate();
  ctx.validate();
  BoundReport rep;
  rep.params = params;
  rep.q = balance_q(params, ctx);
  rep.profile = coord_profile(params, rep.q);
  rep.coord_zero_prob = coord_zero_prob(params, rep.q);
  rep.a_finite = finite_base_a(params, ctx);
  rep.a_asymptotic = asymptotic_base(params.k);
  rep.prior_base = prior_base(params.k, ctx);
  if (params.n == 1) {
    rep.q_exact = balance_q_exact(params);
    rep.profile_exact = coord_profile(params, *rep.q_exact);
    rep.coord_zero_prob_exact = coord_zero_prob(params, *rep.q_exact);
  }
  return rep;
}

}  // namespace zerosum
