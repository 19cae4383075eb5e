#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qident/errors.hpp"
#include "qident/hyper.hpp"
#include "qident/params.hpp"
#include "qident/qpochhammer.hpp"

namespace qident::abel {

using hyper::SeriesResult;
using hyper::SumMode;
using mp::PrecisionPolicy;
using mp::Scalar;
using qcore::QContext;

/// A sequence given by its value at the start index and the term ratio
/// s_{n+1}/s_n as a function of n and t = q^n. Every A_n, B_n in the catalog
/// has a ratio rational in t, which gives O(1) incremental term updates and
/// avoids cancellation in q-Pochhammer quotients.
struct SequenceSpec {
  Scalar initial;
  int start_index = 0;  // 0 or 1
  std::function<Scalar(long n, const Scalar& t)> ratio;
  std::function<Scalar(long n)> closed_form;  // optional cross-check
};

struct AbelPair {
  SequenceSpec A;
  SequenceSpec B;
  SumMode lhs_mode = SumMode::Direct;
  SumMode rhs_mode = SumMode::Direct;
};

/// Walks a SequenceSpec forward, keeping t = q^n in lockstep.
class SeqCursor {
 public:
  SeqCursor(const SequenceSpec& spec, const QContext& ctx)
      : spec_(&spec),
        q_(ctx.q.at_precision(ctx.bits())),
        n_(spec.start_index),
        value_(spec.initial.at_precision(ctx.bits())),
        t_(mp::pow_si(q_, spec.start_index)) {}

  long index() const { return n_; }
  const Scalar& value() const { return value_; }

  void advance() {
    value_ *= spec_->ratio(n_, t_);
    t_ *= q_;
    ++n_;
  }

  void advance_to(long n) {
    while (n_ < n) advance();
  }

 private:
  const SequenceSpec* spec_;
  Scalar q_;
  long n_;
  Scalar value_;
  Scalar t_;
};

/// Checks initial * prod(ratio) against the optional closed form for n <= 30.
void validate_sequence(const SequenceSpec& spec, const QContext& ctx);

/// sum_{n>=1} B_n (A_n - A_{n-1})
SeriesResult abel_lhs(const AbelPair& pair, const QContext& ctx);

/// (lim_m A_m B_{m+1}) - A_0 B_1 + sum_{n>=1} A_n (B_n - B_{n+1}).
/// The limit is taken along even m (evaluated at m and 2m and required to
/// stabilize); for pairs whose boundary term oscillates, the even-m
/// subsequence is the one along which the partial-sum identity closes with
/// the PairedTail series convention.
SeriesResult abel_rhs(const AbelPair& pair, const QContext& ctx);

/// The boundary term alone (diagnostic; same stabilization contract).
Scalar boundary_limit(const AbelPair& pair, const QContext& ctx);

// -- vanishing-coefficient solver ----------------------------------------

/// r1(t) = sign * (n0 + n1 t)^k / (d0 + d1 t)^k with odd k. Both proof
/// shapes in the catalog are of this form (k = 1 and k = 3).
template <class F>
struct PowerRatio {
  int sign = 1;
  F n0, n1;  // numerator  n0 + n1 t
  F d0, d1;  // denominator d0 + d1 t
  int k = 1;
};

template <class F>
struct RationalCoefficients {
  F a1, a2;
  F t_star;                    // root of r1(t) = 1
  std::optional<F> a3, a4;     // passthrough for the (a3 n + a4)/(a1 n + a2) form
};

/// Chooses a2 so that the partial-fraction residue at the pole of
/// r2(n) = 1/(a1 [n]_q + a2) vanishes: a2 = a1 (t* - 1)/(1 - q) where
/// r1(t*) = 1. Exact in any field (rational inputs give rational outputs).
template <class F>
RationalCoefficients<F> solve_vanishing_coefficient(const PowerRatio<F>& r1,
                                                    const F& q, const F& a1,
                                                    std::optional<F> a3 = {},
                                                    std::optional<F> a4 = {}) {
  if (r1.k <= 0 || r1.k % 2 == 0)
    throw std::invalid_argument(
        "solve_vanishing_coefficient: only odd power ratios are supported");
  const F zero = q - q;
  if (a1 == zero)
    throw std::invalid_argument("solve_vanishing_coefficient: a1 must be nonzero");
  // sign * N(t)^k = D(t)^k with k odd reduces to sign * N(t) = D(t).
  F c1 = (r1.sign > 0) ? F(r1.n1 - r1.d1) : F(zero - r1.n1 - r1.d1);
  F c0 = (r1.sign > 0) ? F(r1.d0 - r1.n0) : F(r1.d0 + r1.n0);
  if (c1 == zero) {
    if (c0 == zero)
      throw degenerate_ratio_error("solve_vanishing_coefficient: r1(t) == 1");
    throw no_solution_error("solve_vanishing_coefficient: r1(t) = 1 has no root");
  }
  F t_star = c0 / c1;
  F one = q / q;
  F a2 = a1 * (t_star - one) / (one - q);
  return {a1, a2, t_star, a3, a4};
}

// -- certification ---------------------------------------------------------

struct CertifyReport {
  Scalar lhs, rhs, claimed;
  Scalar dev_lhs_rhs, dev_lhs_claimed, dev_rhs_claimed;
  long terms_lhs = 0, terms_rhs = 0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Three-way check: abel_lhs(pair) = abel_rhs(pair) = claimed closed form.
CertifyReport certify_transformation(const AbelPair& pair,
                                     const std::function<Scalar()>& claimed,
                                     const QContext& ctx, double tolerance);

// -- catalog of the proof transformations ---------------------------------

/// Extra data printed by `certify --verbose` when the proof uses the
/// vanishing-coefficient substitution.
struct VanishingInfo {
  Scalar a1, a2, t_star;
};

struct ProofCase {
  std::string id;        // thm2.1, thm2.2, sec2.1, variant1..variant3, sec2.3
  std::string title;
  std::vector<std::pair<std::string, Interval>> params;
  // base of the QContext the pair lives in (sec2.3 works in base s^2)
  std::function<Scalar(const ParamMap&)> base;
  std::function<AbelPair(const ParamMap&, const QContext&)> make_pair;
  std::function<Scalar(const ParamMap&, const QContext&)> claimed;
  std::function<std::optional<VanishingInfo>(const ParamMap&, const QContext&)>
      vanishing;  // may return nullopt
  std::function<bool(const ParamMap&)> admissible;  // sampling predicate
};

const std::vector<ProofCase>& proof_catalog();
const ProofCase& proof_case(const std::string& id);

/// Deterministic admissible parameter point for a proof case.
ParamMap sample_proof_point(const ProofCase& pc, std::uint64_t seed, long bits);

}  // namespace qident::abel
