#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qident/detail/rng.hpp"
#include "qident/errors.hpp"
#include "qident/qpochhammer.hpp"
#include "support/rational_oracle.hpp"

using namespace qident;
using mp::PrecisionPolicy;
using mp::Scalar;
using qcore::QContext;

namespace {
QContext ctx_half(long bits = 192) {
  return QContext(Scalar::of_ratio(1, 2, bits), PrecisionPolicy(bits, 0.0));
}
}  // namespace

TEST_CASE("finite q-shifted factorial basics") {
  QContext ctx = ctx_half();
  Scalar a = Scalar::of(0.73, 192);
  CHECK(qcore::qpoch_finite(a, ctx, 0) == Scalar::of_int(1, 192));
  // (q;q)_2 at q=1/2 -> (1-1/2)(1-1/4) = 3/8, exact as a dyadic product
  CHECK(qcore::qpoch_finite(ctx.q, ctx, 2) == Scalar::of_ratio(3, 8, 192));
  CHECK(qcore::qpoch_finite(Scalar(192), ctx, 17) == Scalar::of_int(1, 192));
}

TEST_CASE("infinite product against the exact rational oracle") {
  QContext ctx(Scalar::of_ratio(1, 2, 256), PrecisionPolicy(256, 1e-65));
  Scalar v = qcore::qpoch_infinite(ctx.q, ctx);
  CHECK(v.str(13).substr(0, 15) == "2.887880950866e");
  // 200 exact factors leave a tail below 2^-199
  oracle::Rat exact = oracle::qpoch(oracle::rat(1, 2), oracle::rat(1, 2), 200);
  CHECK(oracle::close_to(v, exact, oracle::Rat(mpz_class(1), mpz_class(1) << 190)));
}

TEST_CASE("infinite product of zero argument and exact zeros") {
  QContext ctx = ctx_half();
  CHECK(qcore::qpoch_infinite(Scalar(192), ctx) == Scalar::of_int(1, 192));
  // a = q^-2 = 4 zeroes the k=2 factor exactly
  CHECK(qcore::qpoch_infinite(Scalar::of_int(4, 192), ctx).is_zero());
}

TEST_CASE("splitting identity (a;q)_inf = (a;q)_n (a q^n;q)_inf") {
  QContext ctx(Scalar::of(0.41, 256), PrecisionPolicy(256, 0.0));
  Scalar a = Scalar::of(0.83, 256);
  Scalar full = qcore::qpoch_infinite(a, ctx);
  for (long n : {1L, 5L, 17L}) {
    Scalar head = qcore::qpoch_finite(a, ctx, n);
    Scalar tail = qcore::qpoch_infinite(a * mp::pow_si(ctx.q, n), ctx);
    CHECK(mp::rel_close(full, head * tail, 10.0 * ctx.policy.target()));
  }
}

TEST_CASE("functional equation exactly in rationals, closely in scalars") {
  detail::SplitMix64 rng(11);
  for (int i = 0; i < 50; ++i) {
    long an = 1 + static_cast<long>(rng.next() % 19);
    long qd = 3 + static_cast<long>(rng.next() % 17);
    oracle::Rat a = oracle::rat(an, 20), q = oracle::rat(2, qd + 2);
    long m = static_cast<long>(rng.next() % 31), n = static_cast<long>(rng.next() % 31);
    oracle::Rat lhs = oracle::qpoch(a, q, m + n);
    oracle::Rat aqm = a;
    for (long k = 0; k < m; ++k) aqm *= q;
    oracle::Rat rhs = oracle::qpoch(a, q, m) * oracle::qpoch(aqm, q, n);
    CHECK(lhs == rhs);  // exact

    QContext ctx(oracle::to_scalar(q, 192), PrecisionPolicy(192, 0.0));
    Scalar as = oracle::to_scalar(a, 192);
    Scalar sl = qcore::qpoch_finite(as, ctx, m + n);
    Scalar sr = qcore::qpoch_finite(as, ctx, m) *
                qcore::qpoch_finite(as * mp::pow_si(ctx.q, m), ctx, n);
    CHECK(mp::rel_close(sl, sr, 10.0 * ctx.policy.target()));
  }
}

TEST_CASE("bracket ratio basics") {
  QContext ctx = ctx_half();
  Scalar a = Scalar::of(0.9, 192);
  CHECK(qcore::bracket_ratio({{a}, {}, 0}, ctx) == Scalar::of_int(1, 192));
  CHECK(qcore::bracket_ratio({{ctx.q}, {ctx.q}, 12}, ctx) == Scalar::of_int(1, 192));
}

TEST_CASE("bracket ratio at the Yamaguchi lambda point") {
  // q=1/2, a=1, b=1: lambda = q^2(1-q)/(1-q^2) = 1/6
  QContext ctx = ctx_half(256);
  Scalar lam = Scalar::of_ratio(1, 6, 256);
  Scalar lhs = qcore::bracket_ratio({{lam * 2}, {lam}, std::nullopt}, ctx);
  Scalar direct = qcore::qpoch_infinite(Scalar::of_ratio(1, 3, 256), ctx) /
                  qcore::qpoch_infinite(Scalar::of_ratio(1, 6, 256), ctx);
  CHECK(mp::rel_close(lhs, direct, 1e-60));
  // 60 exact factors of each product pin the value independently
  oracle::Rat num = oracle::qpoch(oracle::rat(1, 3), oracle::rat(1, 2), 60);
  oracle::Rat den = oracle::qpoch(oracle::rat(1, 6), oracle::rat(1, 2), 60);
  CHECK(oracle::close_to(lhs, num / den, oracle::Rat(mpz_class(1), mpz_class(1) << 50)));
}

TEST_CASE("vanishing denominator factor is reported with its index") {
  QContext ctx = ctx_half();
  qcore::BracketRatio spec{{ctx.scalar(0.3)}, {Scalar::of_int(4, 192)}, 5};
  CHECK_THROWS_AS(qcore::bracket_ratio(spec, ctx), singular_parameter_error);
  try {
    qcore::bracket_ratio(spec, ctx);
  } catch (const singular_parameter_error& e) {
    CHECK(e.index() == 2);  // 4 * (1/2)^2 = 1
  }
}

TEST_CASE("q-bracket values") {
  QContext ctx = ctx_half();
  CHECK(qcore::qbracket(0, ctx).is_zero());
  CHECK(qcore::qbracket(1, ctx) == Scalar::of_int(1, 192));
  CHECK(qcore::qbracket(3, ctx) == Scalar::of_ratio(7, 4, 192));
}

TEST_CASE("context rejects q outside (0,1)") {
  CHECK_THROWS_AS(QContext(Scalar::of(1.5, 64), PrecisionPolicy(64, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(QContext(Scalar::of(-0.5, 64), PrecisionPolicy(64, 0.0)),
                  std::invalid_argument);
}
