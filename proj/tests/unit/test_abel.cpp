#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qident/abel.hpp"
#include "qident/detail/rng.hpp"
#include "support/abel_pair_gen.hpp"
#include "support/rational_oracle.hpp"

using namespace qident;
using abel::AbelPair;
using abel::PowerRatio;
using abel::SequenceSpec;
using hyper::SumMode;
using mp::PrecisionPolicy;
using mp::Scalar;
using oracle::Rat;
using qcore::QContext;

namespace {

QContext ctx_of(double q, long bits = 192) {
  return QContext(Scalar::of(q, bits), PrecisionPolicy(bits, 0.0));
}

// B_n == 1
SequenceSpec const_one(long bits) {
  return {Scalar::of_int(1, bits), 0,
          [](long, const Scalar& t) { return 0 * t + 1; }, nullptr};
}

// A_n = q^n
SequenceSpec geometric(const QContext& ctx) {
  Scalar q = ctx.q;
  return {Scalar::of_int(1, ctx.bits()), 0,
          [q](long, const Scalar&) { return q; },
          [q](long n) { return mp::pow_si(q, n); }};
}

}  // namespace

TEST_CASE("pure telescope: B=1, A=q^n sums to -1 on both sides") {
  QContext ctx = ctx_of(0.37);
  AbelPair pair{geometric(ctx), const_one(192)};
  auto lhs = abel::abel_lhs(pair, ctx);
  auto rhs = abel::abel_rhs(pair, ctx);
  CHECK(mp::rel_close(lhs.value, Scalar::of_int(-1, 192), 1e-27));
  CHECK(mp::rel_close(rhs.value, Scalar::of_int(-1, 192), 1e-27));
}

TEST_CASE("constant A gives a zero backward-difference series") {
  QContext ctx = ctx_of(0.5);
  SequenceSpec constA{Scalar::of(3.25, 192), 0,
                      [](long, const Scalar& t) { return 0 * t + 1; }, nullptr};
  AbelPair pair{constA, const_one(192)};
  CHECK(abel::abel_lhs(pair, ctx).value.is_zero());
}

TEST_CASE("identically zero A gives a zero right-hand side") {
  QContext ctx = ctx_of(0.5);
  SequenceSpec zeroA{Scalar(192), 0,
                     [](long, const Scalar& t) { return 0 * t + 1; }, nullptr};
  // B decaying so the series side of the lemma is well posed
  AbelPair pair{zeroA, geometric(ctx)};
  CHECK(abel::abel_rhs(pair, ctx).value.is_zero());
  CHECK(abel::abel_lhs(pair, ctx).value.is_zero());
}

TEST_CASE("nonzero boundary term: A = c + q^n") {
  QContext ctx = ctx_of(0.45);
  Scalar c = Scalar::of(2.5, 192), q = ctx.q;
  SequenceSpec A{c + 1, 0,
                 [c, q](long, const Scalar& t) { return (c + q * t) / (c + t); },
                 nullptr};
  AbelPair pair{A, const_one(192)};
  Scalar lim = abel::boundary_limit(pair, ctx);
  CHECK(mp::rel_close(lim, c, 1e-25));
  auto lhs = abel::abel_lhs(pair, ctx);
  auto rhs = abel::abel_rhs(pair, ctx);
  CHECK(mp::rel_close(lhs.value, Scalar::of_int(-1, 192), 1e-27));
  CHECK(mp::rel_close(rhs.value, lhs.value, 1e-25));
}

TEST_CASE("a boundary term without a limit fails loudly") {
  QContext ctx = ctx_of(0.5, 64);
  SequenceSpec doubling{Scalar::of_int(1, 64), 0,
                        [](long, const Scalar& t) { return 0 * t + 2; }, nullptr};
  AbelPair pair{doubling, const_one(64)};
  CHECK_THROWS_AS(abel::boundary_limit(pair, ctx), limit_divergence_error);
}

TEST_CASE("sequence validation catches a wrong closed form") {
  QContext ctx = ctx_of(0.5);
  SequenceSpec bad = geometric(ctx);
  bad.closed_form = [&](long n) { return mp::pow_si(ctx.q, n) + 1; };
  CHECK_THROWS_AS(abel::validate_sequence(bad, ctx), numeric_error);
}

// ---------------------------------------------------------------------------
// vanishing-coefficient solver
// ---------------------------------------------------------------------------

TEST_CASE("solver reproduces the linear-case substitution exactly") {
  // r1(t) = x (1 - beta t)/(1 - q t); paper closed form:
  // a2 = a1 (-q + beta x - x + 1) / ((1-q)(q - beta x))
  Rat q(2, 5), beta(3, 10), x(4, 7), a1(1);
  PowerRatio<Rat> r1{+1, x, -x * beta, Rat(1), -q, 1};
  auto sol = abel::solve_vanishing_coefficient<Rat>(r1, q, a1);
  Rat expected = a1 * (-q + beta * x - x + 1) / ((1 - q) * (q - beta * x));
  CHECK(sol.a2 == expected);
  // postcondition: a1 (1 - t*)/(1 - q) + a2 == 0 exactly
  CHECK(a1 * (1 - sol.t_star) / (1 - q) + sol.a2 == 0);
  // and r1(t*) == 1 exactly
  CHECK(x * (1 - beta * sol.t_star) == (1 - q * sol.t_star));
}

TEST_CASE("solver reproduces the cubic-case substitution exactly") {
  // r1(t) = -((1 - s t)/(1 - s^2 t))^3; paper: a2 = (s+2)/((s+1)^2 s)
  Rat s(3, 5), u = s * s, a1(1);
  PowerRatio<Rat> r1{-1, Rat(1), -s, Rat(1), -u, 3};
  auto sol = abel::solve_vanishing_coefficient<Rat>(r1, u, a1);
  CHECK(sol.a2 == (s + 2) / ((s + 1) * (s + 1) * s));
  CHECK(sol.t_star == Rat(2) / (s + u));
  CHECK(a1 * (1 - sol.t_star) / (1 - u) + sol.a2 == 0);
}

TEST_CASE("the residue numerator v(q) vanishes identically with the solved a2") {
  Rat q(1, 3), beta(2, 7), x(5, 11), a1(2);
  PowerRatio<Rat> r1{+1, x, -x * beta, Rat(1), -q, 1};
  auto sol = abel::solve_vanishing_coefficient<Rat>(r1, q, a1);
  Rat a2 = sol.a2;
  Rat v = -a1 * q + a1 * beta * x - a1 * x + a1 + a2 * q * q - a2 * beta * q * x -
          a2 * q + a2 * beta * x;
  CHECK(v == 0);
}

TEST_CASE("partial-fraction display agrees with r2 (1 - r1) at five points") {
  Rat q(1, 3), beta(2, 7), x(5, 11), a1(2);
  PowerRatio<Rat> r1s{+1, x, -x * beta, Rat(1), -q, 1};
  auto sol = abel::solve_vanishing_coefficient<Rat>(r1s, q, a1);
  Rat a2 = sol.a2;
  Rat t = 1;
  for (long n = 1; n <= 5; ++n) {
    t *= q;  // t = q^n
    Rat r1 = x * (1 - beta * t) / (1 - q * t);
    Rat r2 = 1 / (a1 * (1 - t) / (1 - q) + a2);
    Rat lhs = r2 * (1 - r1);
    // with v == 0 only the first partial-fraction term survives:
    // (beta x - q x) / ((q^{n+1} - 1)(a1 - a2 q))
    Rat rhs = (beta * x - q * x) / ((q * t - 1) * (a1 - a2 * q));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("degenerate and solution-free ratios are rejected") {
  Rat q(1, 2), one(1);
  PowerRatio<Rat> ident{+1, one, -q, one, -q, 1};
  CHECK_THROWS_AS(abel::solve_vanishing_coefficient<Rat>(ident, q, Rat(1)),
                  degenerate_ratio_error);
  PowerRatio<Rat> constant{+1, Rat(2, 3), Rat(0), one, Rat(0), 1};
  CHECK_THROWS_AS(abel::solve_vanishing_coefficient<Rat>(constant, q, Rat(1)),
                  no_solution_error);
  PowerRatio<Rat> even{+1, one, -q, one, -q, 2};
  CHECK_THROWS_AS(abel::solve_vanishing_coefficient<Rat>(even, q, Rat(1)),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// the summation-by-parts master property
// ---------------------------------------------------------------------------

TEST_CASE("lemma holds on randomized admissible pairs") {
  detail::SplitMix64 rng(321);
  const long bits = 192;
  for (int done = 0; done < 50; ++done) {
    auto rp = testgen::make_random_pair(rng, bits);
    QContext ctx(Scalar::of(rp.q, bits), PrecisionPolicy(bits, 1e-30));
    auto lhs = abel::abel_lhs(rp.pair, ctx);
    auto rhs = abel::abel_rhs(rp.pair, ctx);
    CHECK(mp::rel_close(lhs.value, rhs.value, 1e-25, 1e-40));
  }
}

// ---------------------------------------------------------------------------
// the seven catalog transformations
// ---------------------------------------------------------------------------

TEST_CASE("every proof case certifies at sampled points") {
  for (const auto& pc : abel::proof_catalog()) {
    for (std::uint64_t seed : {1ull, 2ull}) {
      ParamMap pt = abel::sample_proof_point(pc, seed, 128);
      QContext ctx(pc.base(pt).at_precision(192), PrecisionPolicy(192, 1e-31));
      AbelPair pair = pc.make_pair(pt, ctx);
      auto rep = abel::certify_transformation(
          pair, [&] { return pc.claimed(pt, ctx); }, ctx, 1e-25);
      INFO(pc.id, " seed ", seed, " devs ", rep.dev_lhs_rhs.str(6), " ",
           rep.dev_lhs_claimed.str(6), " ", rep.dev_rhs_claimed.str(6));
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("first q-Gosper proof pair at the terminating point equals -2/3") {
  // q=1/2, a=1, b=1: the 2phi1 collapses to 1, so the sum is
  // -(1-q)^2/((1-q^b)(1-q^{b+1})) = -2/3
  const auto& pc = abel::proof_case("thm2.1");
  ParamMap pt;
  pt.set("q", Scalar::of_ratio(1, 2, 192));
  pt.set("a", Scalar::of_int(1, 192));
  pt.set("b", Scalar::of_int(1, 192));
  QContext ctx(pc.base(pt), PrecisionPolicy(192, 1e-31));
  auto lhs = abel::abel_lhs(pc.make_pair(pt, ctx), ctx);
  CHECK(mp::rel_close(lhs.value, Scalar::of_ratio(-2, 3, 192), 1e-28));
}

TEST_CASE("first q-Gosper proof pair certifies at q=1/2, a=2, b=1") {
  const auto& pc = abel::proof_case("thm2.1");
  ParamMap pt;
  pt.set("q", Scalar::of_ratio(1, 2, 192));
  pt.set("a", Scalar::of_int(2, 192));
  pt.set("b", Scalar::of_int(1, 192));
  QContext ctx(pc.base(pt), PrecisionPolicy(192, 1e-31));
  auto rep = abel::certify_transformation(
      pc.make_pair(pt, ctx), [&] { return pc.claimed(pt, ctx); }, ctx, 1e-25);
  CHECK(rep.pass);
}

TEST_CASE("6phi5 variant proof pair at the documented point") {
  const auto& pc = abel::proof_case("variant1");
  ParamMap pt;
  pt.set("q", Scalar::of_ratio(1, 2, 192));
  pt.set("a", Scalar::of_ratio(1, 3, 192));
  pt.set("b", Scalar::of_int(4, 192));
  QContext ctx(pc.base(pt), PrecisionPolicy(192, 1e-31));
  auto rep = abel::certify_transformation(
      pc.make_pair(pt, ctx), [&] { return pc.claimed(pt, ctx); }, ctx, 1e-25);
  CHECK(rep.pass);
}

TEST_CASE("a perturbed closed form is rejected") {
  const auto& pc = abel::proof_case("thm2.1");
  ParamMap pt = abel::sample_proof_point(pc, 5, 128);
  QContext ctx(pc.base(pt).at_precision(192), PrecisionPolicy(192, 1e-31));
  auto rep = abel::certify_transformation(
      pc.make_pair(pt, ctx),
      [&] { return pc.claimed(pt, ctx) * Scalar::of(1.000001, 192); }, ctx, 1e-25);
  CHECK_FALSE(rep.pass);
  CHECK(rep.dev_lhs_rhs <= Scalar::of(1e-25, 192));  // the lemma itself still holds
}

TEST_CASE("verbose vanishing info is exposed where the proof uses it") {
  const auto& pc = abel::proof_case("thm2.2");
  ParamMap pt = abel::sample_proof_point(pc, 3, 128);
  QContext ctx(pc.base(pt).at_precision(192), PrecisionPolicy(192, 1e-31));
  auto info = pc.vanishing(pt, ctx);
  REQUIRE(info.has_value());
  CHECK(info->a1 == Scalar::of_int(1, 192));
  CHECK(!info->a2.is_zero());
  CHECK(!abel::proof_case("thm2.1").vanishing(pt, ctx).has_value());
}

TEST_CASE("starved sampler reports starvation") {
  abel::ProofCase pc = abel::proof_case("thm2.1");
  pc.admissible = [](const ParamMap&) { return false; };
  CHECK_THROWS_AS(abel::sample_proof_point(pc, 0, 128), sampler_starvation_error);
}
