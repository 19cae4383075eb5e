#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qident/detail/rng.hpp"
#include "qident/errors.hpp"
#include "qident/hyper.hpp"
#include "qident/identities.hpp"
#include "support/rational_oracle.hpp"

using namespace qident;
using hyper::BasicSeriesSpec;
using hyper::ClassicalSeriesSpec;
using hyper::SumMode;
using mp::PrecisionPolicy;
using mp::Scalar;
using qcore::QContext;

namespace {
PrecisionPolicy pol192() { return PrecisionPolicy(192, 0.0); }
}  // namespace

TEST_CASE("direct summation of a geometric series") {
  auto make = [] {
    return hyper::stream_of(
        [](long n) { return mp::pow_si(Scalar::of_ratio(1, 2, 192), n); });
  };
  auto r = hyper::sum_series(make, pol192(), SumMode::Direct);
  CHECK(mp::rel_close(r.value, Scalar::of_int(2, 192), 1e-27));
  CHECK(r.last_term_magnitude <= Scalar::of(pol192().target(), 192) * r.value);
}

TEST_CASE("terminating classical series is summed exactly") {
  // 2F1[1-a, b; b+2; b/(a+b)] at a=1 kills every n>=1 term
  Scalar b = Scalar::of(2.0, 192);
  ClassicalSeriesSpec s{{Scalar(192), b}, {b + 2}, b / 3};
  auto r = hyper::eval_classical(s, pol192());
  CHECK(r.value == Scalar::of_int(1, 192));
}

TEST_CASE("Gosper evaluation point a=3 b=2 equals 81/125") {
  Scalar a = Scalar::of_int(3, 192), b = Scalar::of_int(2, 192);
  ClassicalSeriesSpec s{{1 - a, b}, {b + 2}, b / (a + b)};
  auto r = hyper::eval_classical(s, pol192());
  // exact oracle: the 3-term terminating sum
  oracle::Rat exact =
      oracle::f_partial({oracle::rat(-2), oracle::rat(2)}, {oracle::rat(4)},
                        oracle::rat(2, 5), 4);
  CHECK(exact == oracle::rat(81, 125));
  CHECK(oracle::close_to(r.value, exact, oracle::Rat(mpz_class(1), mpz_class(1) << 150)));
}

TEST_CASE("zero argument gives 1 for both families") {
  QContext ctx(Scalar::of(0.4, 192), pol192());
  BasicSeriesSpec bs{{ctx.scalar(0.3), ctx.scalar(0.7)}, {ctx.scalar(0.2)}, Scalar(192)};
  CHECK(hyper::eval_basic(bs, ctx).value == Scalar::of_int(1, 192));
  ClassicalSeriesSpec cs{{Scalar::of(1.1, 192)}, {Scalar::of(2.2, 192)}, Scalar(192)};
  CHECK(hyper::eval_classical(cs, pol192()).value == Scalar::of_int(1, 192));
}

TEST_CASE("incremental terms match bracket-ratio products") {
  QContext ctx(Scalar::of(0.37, 256), PrecisionPolicy(256, 0.0));
  Scalar a1 = ctx.scalar(1.4), a2 = ctx.scalar(0.6), b1 = ctx.scalar(0.25);
  Scalar x = ctx.scalar(0.52);
  BasicSeriesSpec spec{{a1, a2}, {b1}, x};
  auto st = hyper::basic_term_stream(spec, ctx)();
  double tol = 10.0 * ctx.policy.target();
  for (long n = 0; n <= 50; ++n) {
    Scalar term = st->next();
    Scalar direct = qcore::qpoch_finite(a1, ctx, n) * qcore::qpoch_finite(a2, ctx, n) /
                    (qcore::qpoch_finite(ctx.q, ctx, n) * qcore::qpoch_finite(b1, ctx, n)) *
                    mp::pow_si(x, n);
    CHECK(mp::rel_close(term, direct, tol));
  }
}

TEST_CASE("partial sums against the exact rational oracle") {
  // 2phi1[q, q^b; q^(b+2); q, x] at q=1/3, b=2, x=1/4
  oracle::Rat q = oracle::rat(1, 3), x = oracle::rat(1, 4);
  oracle::Rat exact = oracle::phi_partial({q, oracle::rat(1, 9)}, {oracle::rat(1, 81)},
                                          q, x, 40);
  QContext ctx(Scalar::of_ratio(1, 3, 256), PrecisionPolicy(256, 0.0));
  BasicSeriesSpec spec{{ctx.q, Scalar::of_ratio(1, 9, 256)},
                       {Scalar::of_ratio(1, 81, 256)},
                       Scalar::of_ratio(1, 4, 256)};
  auto st = hyper::basic_term_stream(spec, ctx)();
  Scalar sum(256);
  for (int n = 0; n < 40; ++n) sum += st->next();
  CHECK(oracle::close_to(sum, exact, oracle::Rat(mpz_class(1), mpz_class(1) << 200)));
}

TEST_CASE("q-binomial theorem property at 192 bits") {
  detail::SplitMix64 rng(2024);
  PrecisionPolicy policy(192, 1e-34);
  for (int i = 0; i < 50; ++i) {
    double qd = rng.uniform(0.05, 0.9);
    double al = rng.uniform(0.05, 2.5);
    double xd = rng.uniform(-0.9, 0.9);
    if (std::fabs(xd) < 0.02) xd = 0.31;
    QContext ctx(Scalar::of(qd, 192), policy);
    Scalar alpha = ctx.scalar(al), x = ctx.scalar(xd);
    auto lhs = hyper::eval_basic({{alpha}, {}, x}, ctx);
    Scalar rhs = qcore::qpoch_infinite(alpha * x, ctx) / qcore::qpoch_infinite(x, ctx);
    CHECK(mp::rel_close(lhs.value, rhs, 1e-30));
  }
}

TEST_CASE("stopping soundness: twenty more terms move nothing") {
  QContext ctx(Scalar::of(0.66, 192), pol192());
  BasicSeriesSpec spec{{ctx.scalar(0.8), ctx.scalar(1.3)}, {ctx.scalar(0.45)},
                       ctx.scalar(0.77)};
  auto res = hyper::eval_basic(spec, ctx);
  auto st = hyper::basic_term_stream(spec, ctx)();
  Scalar resum(192);
  for (long n = 0; n < res.terms_used + 20; ++n) resum += st->next();
  CHECK(mp::abs(resum - res.value) <
        Scalar::of(ctx.policy.target(), 192) * mp::abs(res.value));
}

TEST_CASE("divergent argument raises divergence_error") {
  QContext ctx(Scalar::of(0.5, 128), PrecisionPolicy(128, 0.0));
  BasicSeriesSpec spec{{ctx.scalar(0.3)}, {}, ctx.scalar(1.2)};
  CHECK_THROWS_AS(hyper::eval_basic(spec, ctx), divergence_error);
}

TEST_CASE("lower parameter pole raises singular_parameter_error") {
  QContext ctx(Scalar::of_ratio(1, 2, 128), PrecisionPolicy(128, 0.0));
  BasicSeriesSpec spec{{ctx.scalar(0.3)}, {Scalar::of_int(4, 128)}, ctx.scalar(0.5)};
  CHECK_THROWS_AS(hyper::eval_basic(spec, ctx), singular_parameter_error);
}

TEST_CASE("unit weight reduces the weighted evaluator to the plain one") {
  QContext ctx(Scalar::of(0.52, 192), pol192());
  BasicSeriesSpec spec{{ctx.scalar(0.9)}, {ctx.scalar(0.3)}, ctx.scalar(0.44)};
  auto plain = hyper::eval_basic(spec, ctx);
  auto weighted = hyper::eval_weighted_basic(
      spec, [](long, const Scalar& t) { return 0 * t + 1; }, ctx);
  CHECK(mp::rel_close(plain.value, weighted.value, 1e-40));
}

TEST_CASE("alternating accelerator reproduces ln 2") {
  PrecisionPolicy policy(192, 1e-34);
  auto make = [] {
    return hyper::stream_of([](long n) {
      Scalar t = Scalar::of_ratio(1, n + 1, 192);
      return (n % 2 == 0) ? t : -t;
    });
  };
  auto r = hyper::sum_series(make, policy, SumMode::AlternatingAccel);
  CHECK(mp::rel_close(r.value, mp::log(Scalar::of_int(2, 192)), 1e-30));
}

TEST_CASE("alternating accelerator handles geometric and polynomial decay") {
  // geometric: sum (-9/10)^n = 10/19, cross-checked against the exact value
  auto geo = [](long n) { return mp::pow_si(Scalar::of_ratio(-9, 10, 192), n); };
  auto fast = hyper::sum_series([&] { return hyper::stream_of(geo); },
                                PrecisionPolicy(192, 1e-32), SumMode::AlternatingAccel);
  CHECK(mp::rel_close(fast.value, Scalar::of_ratio(10, 19, 192), 1e-30));

  // polynomial: sum (-1)^n / sqrt(n+1) = (1 - sqrt 2) zeta(1/2)
  auto term = [](long n) {
    Scalar t = 1 / mp::sqrt(Scalar::of_int(n + 1, 192));
    return (n % 2 == 0) ? t : -t;
  };
  auto eta = hyper::sum_series([&] { return hyper::stream_of(term); },
                               PrecisionPolicy(192, 1e-30), SumMode::AlternatingAccel);
  Scalar ref = Scalar::parse("0.6048986434216303702472659142359554997598", 192);
  CHECK(mp::rel_close(eta.value, ref, 1e-30));
}

TEST_CASE("paired summation assigns 5/3 to the even partial sums") {
  // t_n = (-1)^n (1 + 2^-n): lim S_2m = 2 - sum 4^-k = 5/3
  auto make = [] {
    return hyper::stream_of([](long n) {
      Scalar t = 1 + mp::pow_si(Scalar::of_ratio(1, 2, 192), n);
      return (n % 2 == 0) ? t : -t;
    });
  };
  auto r = hyper::sum_series(make, pol192(), SumMode::PairedTail);
  CHECK(mp::rel_close(r.value, Scalar::of_ratio(5, 3, 192), 1e-27));
}

TEST_CASE("paper polynomial transcriptions match an independent rational route") {
  // rho1, rho2, and p(n) evaluated at q=1/2 (and rational a, b) for n=0,1,2
  oracle::Rat q = oracle::rat(1, 2);
  for (long n = 0; n <= 2; ++n) {
    // literal monomial-by-monomial transcription
    auto qp = [&](long e) {
      oracle::Rat r = 1;
      for (long i = 0; i < e; ++i) r *= q;
      return r;
    };
    oracle::Rat r1 = -8 * qp(2 * n) - 7 * qp(2 * n + 1) - 6 * qp(2 * n + 2) -
                     9 * qp(2 * n + 3) - 4 * qp(2 * n + 4) - qp(2 * n + 5) +
                     2 * qp(2 * n + 6) + qp(2 * n + 7) + 4 * qp(4 * n + 1) +
                     8 * qp(4 * n + 2) + 4 * qp(4 * n + 3) + 16 * qp(1);
    oracle::Rat r2 = -11 * qp(2 * n + 2) + 2 * qp(2 * n + 3) - 2 * qp(2 * n + 5) -
                     qp(2 * n + 6) - qp(4 * n + 3) + 12 * qp(4 * n + 4) +
                     qp(4 * n + 5) - qp(4 * n + 6) + qp(4 * n + 8) -
                     4 * qp(6 * n + 6) + qp(4) + qp(3) - qp(2) - qp(1) + 4;
    Scalar qs = Scalar::of_ratio(1, 2, 256);
    CHECK(oracle::close_to(ident::c2_rho1(qs, n), r1,
                           oracle::Rat(mpz_class(1), mpz_class(1) << 200)));
    CHECK(oracle::close_to(ident::c2_rho2(qs, n), r2,
                           oracle::Rat(mpz_class(1), mpz_class(1) << 200)));

    // p(n) for G3 at a=2, b=3 (both exact in dyadic arithmetic)
    oracle::Rat a = 2, b = 3, qa = qp(2);
    oracle::Rat f1 = b * qa * qp(n) + a * qa * qp(n) - a * qa - b * qp(n);
    oracle::Rat f2 = b * qa * qp(n + 1) + a * qa * qp(n + 1) - a * qa - b * qp(n + 1);
    CHECK(oracle::close_to(ident::g3_p(qs, Scalar::of_int(2, 256),
                                       Scalar::of_int(3, 256), n),
                           f1 * f2, oracle::Rat(mpz_class(1), mpz_class(1) << 200)));
  }

  // first term of the q-Cantarini left side: bracket_0 = 1, so the term is
  // rho1(0) / ((1-q)(q+q^2-2)); pinned by the exact oracle at q = 1/2
  {
    oracle::Rat q = oracle::rat(1, 2);
    oracle::Rat r1_0 = -oracle::rat(8) - 7 * q - 6 * q * q - 9 * q * q * q -
                       4 * q * q * q * q - q * q * q * q * q +
                       2 * q * q * q * q * q * q + q * q * q * q * q * q * q +
                       4 * q + 8 * q * q + 4 * q * q * q + 16 * q;
    oracle::Rat term0 = r1_0 / ((1 - q) * (q + q * q - 2));
    Scalar qs = Scalar::of_ratio(1, 2, 256);
    Scalar got = ident::c2_rho1(qs, 0) /
                 ((1 - qs) * (qs + qs * qs - 2));
    CHECK(oracle::close_to(got, term0, oracle::Rat(mpz_class(1), mpz_class(1) << 200)));
  }
}

TEST_CASE("G3 left side against a terminating exact oracle") {
  // a=2 makes the series terminate after n=1; everything is dyadic-exact
  oracle::Rat q = oracle::rat(1, 2), a = 2, b = 1;
  oracle::Rat qa = oracle::rat(1, 4);
  auto p_of = [&](long n) -> oracle::Rat {
    oracle::Rat qn = 1, qn1 = q;
    for (long i = 0; i < n; ++i) { qn *= q; qn1 *= q; }
    oracle::Rat f1 = b * qa * qn + a * qa * qn - a * qa - b * qn;
    oracle::Rat f2 = b * qa * qn1 + a * qa * qn1 - a * qa - b * qn1;
    return f1 * f2;
  };
  // bracket [q^{-1}; q]_n = (2;q)_n/(q;q)_n vanishes for n >= 2
  oracle::Rat x = b * q / (a + b);  // 1/6
  oracle::Rat sum = 1 / p_of(0) +
                    x * oracle::qpoch(oracle::Rat(2), q, 1) / oracle::qpoch(q, q, 1) / p_of(1);
  oracle::Rat prefactor = (a + b) * (1 - q) * (1 - q) * q * q * q;  // (a+b)(1-q)^2 q^{2a-1}
  oracle::Rat exact = prefactor * sum;

  ParamMap pt;
  pt.set("q", Scalar::of_ratio(1, 2, 256));
  pt.set("a", Scalar::of_int(2, 256));
  pt.set("b", Scalar::of_int(1, 256));
  auto lhs = ident::eval_side("G3", true, pt, PrecisionPolicy(256, 0.0));
  CHECK(oracle::close_to(lhs.value, exact, oracle::Rat(mpz_class(1), mpz_class(1) << 180)));
  // and the identity itself holds there
  auto rhs = ident::eval_side("G3", false, pt, PrecisionPolicy(256, 0.0));
  CHECK(mp::rel_close(lhs.value, rhs.value, 1e-50));
}
