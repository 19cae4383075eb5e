#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qident/limits.hpp"
#include "qident/qpochhammer.hpp"

using namespace qident;
using limits::LimitSchedule;
using mp::PrecisionPolicy;
using mp::Scalar;

namespace {
PrecisionPolicy base() { return PrecisionPolicy(192, 1e-16); }
}  // namespace

TEST_CASE("(q^a;q)_n/(1-q)^n recovers the shifted factorial") {
  // a=2, n=3: (2)(3)(4) = 24
  limits::FamilyFn fam = [](const Scalar& q, const PrecisionPolicy& pol) {
    qcore::QContext ctx(q, pol);
    Scalar num = qcore::qpoch_finite(mp::pow_si(q, 2), ctx, 3);
    return num / mp::pow_si(1 - q, 3);
  };
  auto lim = limits::q_limit(fam, {4, 12, 3}, base());
  CHECK(mp::abs(lim.value - 24) <= lim.error_estimate + Scalar::of(1e-6, 192) * 24);
}

TEST_CASE("constant family extrapolates to itself") {
  limits::FamilyFn fam = [](const Scalar&, const PrecisionPolicy& pol) {
    return Scalar::of(2.75, pol.working_bits);
  };
  auto lim = limits::q_limit(fam, {4, 11, 3}, base());
  CHECK(mp::rel_close(lim.value, Scalar::of(2.75, 192), 1e-30));
}

TEST_CASE("raising the order moves the limit less than the estimate") {
  limits::FamilyFn fam = [](const Scalar& q, const PrecisionPolicy& pol) {
    qcore::QContext ctx(q, pol);
    return qcore::qpoch_finite(mp::pow_si(q, 2), ctx, 3) / mp::pow_si(1 - q, 3);
  };
  auto l3 = limits::q_limit(fam, {4, 12, 3}, base());
  auto l4 = limits::q_limit(fam, {4, 12, 4}, base());
  CHECK(mp::abs(l3.value - l4.value) <= l3.error_estimate + l4.error_estimate);
}

TEST_CASE("a family with no limit raises extrapolation failure") {
  limits::FamilyFn fam = [](const Scalar& q, const PrecisionPolicy& pol) {
    return 1 / (1 - q.at_precision(pol.working_bits));  // blows up like 2^j
  };
  CHECK_THROWS_AS(limits::q_limit(fam, {4, 11, 3}, base()),
                  extrapolation_failure_error);
}

TEST_CASE("bad schedules are rejected") {
  CHECK_THROWS_AS((LimitSchedule{4, 6, 3}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((LimitSchedule{6, 4, 2}.validate()), std::invalid_argument);
}

TEST_CASE("G2 falls back to Gosper's evaluation") {
  ParamMap pt;
  pt.set("a", Scalar::of_int(3, 128));
  pt.set("b", Scalar::of_int(2, 128));
  auto rep = limits::check_limit_pair("G2:G1", pt, {4, 12, 3}, base(), 1e-6);
  CHECK(rep.pass);
  CHECK(mp::rel_close(rep.classical_value, Scalar::of_ratio(81, 125, 192), 1e-25));
}

TEST_CASE("G3 falls back to the scaled Gosper evaluation") {
  ParamMap pt;
  pt.set("a", Scalar::of_int(2, 128));
  pt.set("b", Scalar::of_int(3, 128));
  auto rep = limits::check_limit_pair("G3:G1", pt, {4, 12, 3}, base(), 1e-6);
  CHECK(rep.pass);
}

TEST_CASE("Heine falls back to the Gauss value") {
  ParamMap pt;
  pt.set("a", Scalar::of(0.5, 128));
  pt.set("b", Scalar::of(0.7, 128));
  pt.set("ce", Scalar::of(1.5, 128));
  auto rep = limits::check_limit_pair("H1:GAUSS", pt, {4, 10, 3}, base(), 1e-5);
  CHECK(rep.pass);
}

TEST_CASE("6phi5 variant falls back to the Dougall limit") {
  ParamMap pt;
  pt.set("a", Scalar::of_int(2, 128));
  pt.set("b", Scalar::of(0.5, 128));
  auto rep = limits::check_limit_pair("K2:D2", pt, {4, 10, 3}, base(), 1e-5);
  CHECK(rep.pass);
}

TEST_CASE("q-Cantarini ratio check stabilizes both scalars") {
  auto rep = limits::check_limit_pair("C2:C1", {}, {4, 10, 3}, base(), 1e-3);
  CHECK(rep.ratio_mode);
  CHECK(rep.pass);
  // the two sides pin different scalars (4 and 1/2); both must be stable and
  // the full limits of the two sides must coincide
  CHECK(mp::abs(rep.ratio_lhs - 4) < Scalar::of(0.01, 192));
  CHECK(mp::abs(rep.ratio_rhs - Scalar::of_ratio(1, 2, 192)) < Scalar::of(0.01, 192));
  CHECK(rep.full_difference <= rep.full_error + Scalar::of(1e-3, 192) * 2);
}

TEST_CASE("unknown pairs are rejected") {
  CHECK_THROWS_AS(limits::check_limit_pair("Z9:Z8", {}, {4, 11, 3}, base(), 1e-6),
                  std::invalid_argument);
}

TEST_CASE("limit pair sampling is deterministic") {
  auto p1 = limits::sample_limit_point("K3:D2", 5);
  auto p2 = limits::sample_limit_point("K3:D2", 5);
  CHECK(p1.get("a") == p2.get("a"));
  CHECK(limits::limit_pairs().size() == 7);
}
