#include "qident/qpochhammer.hpp"

#include "qident/errors.hpp"

namespace qident::qcore {

Scalar qpoch_finite(const Scalar& a, const QContext& ctx, long n) {
  if (n < 0) throw std::invalid_argument("qpoch_finite: n must be >= 0");
  long prec = std::max(a.precision_bits(), ctx.bits());
  Scalar prod = Scalar::of_int(1, prec);
  Scalar aqk = a.at_precision(prec);  // a * q^k
  for (long k = 0; k < n; ++k) {
    prod *= (1 - aqk);
    if (prod.is_zero()) return prod;  // stays zero
    aqk *= ctx.q;
  }
  return prod;
}

Scalar qpoch_infinite(const Scalar& a, const QContext& ctx) {
  long prec = std::max(a.precision_bits(), ctx.bits());
  const double target = ctx.policy.target();
  if (a.is_zero()) return Scalar::of_int(1, prec);

  // Truncate at N with |a| q^N < eps_tail = target (1-q)/4. The dropped
  // factors satisfy |log tail| <= sum_{k>=N} |a| q^k / (1 - |a| q^k), bounded
  // by the geometric sum |a| q^N / ((1-q)(1 - |a| q^N)); the (1-q) in
  // eps_tail keeps that bound below target/2 uniformly in q, and the bound is
  // asserted before the tail is treated as 1.
  Scalar eps_tail = Scalar::of(target / 4.0, prec) * (1 - ctx.q);
  Scalar prod = Scalar::of_int(1, prec);
  Scalar aqk = a.at_precision(prec);
  long k = 0;
  const long cap = 80'000'000;  // only approachable when q is extremely near 1
  while (mp::abs(aqk) >= eps_tail) {
    prod *= (1 - aqk);
    if (prod.is_zero()) return prod;
    aqk *= ctx.q;
    if (++k > cap)
      throw divergence_error("qpoch_infinite: truncation index exploded");
  }
  Scalar bound = mp::abs(aqk) / ((1 - ctx.q) * (1 - mp::abs(aqk)));
  if (!(bound < Scalar::of(target / 2.0, prec)))
    throw divergence_error("qpoch_infinite: tail bound exceeds target");
  return prod;
}

Scalar qbracket(long n, const QContext& ctx) {
  if (n < 0) throw std::invalid_argument("qbracket: n must be >= 0");
  Scalar qn = mp::pow_si(ctx.q, n);
  return (1 - qn) / (1 - ctx.q);
}

Scalar bracket_ratio(const BracketRatio& spec, const QContext& ctx) {
  long prec = ctx.bits();
  Scalar num = Scalar::of_int(1, prec);
  Scalar den = Scalar::of_int(1, prec);
  if (spec.length.has_value()) {
    long n = *spec.length;
    for (const Scalar& a : spec.numerators) num *= qpoch_finite(a, ctx, n);
    for (size_t j = 0; j < spec.denominators.size(); ++j) {
      Scalar f = qpoch_finite(spec.denominators[j], ctx, n);
      if (f.is_zero()) {
        // locate the vanishing factor for the error message
        Scalar aqk = spec.denominators[j];
        for (long k = 0; k < n; ++k) {
          if ((1 - aqk).is_zero())
            throw singular_parameter_error(
                "bracket_ratio: denominator parameter b=" +
                    spec.denominators[j].str(8) + " vanishes: b*q^k = 1",
                k);
          aqk *= ctx.q;
        }
        throw singular_parameter_error("bracket_ratio: denominator vanishes", n);
      }
      den *= f;
    }
  } else {
    for (const Scalar& a : spec.numerators) num *= qpoch_infinite(a, ctx);
    for (size_t j = 0; j < spec.denominators.size(); ++j) {
      Scalar f = qpoch_infinite(spec.denominators[j], ctx);
      if (f.is_zero())
        throw singular_parameter_error(
            "bracket_ratio: infinite denominator product vanishes for b=" +
                spec.denominators[j].str(8),
            -1);
      den *= f;
    }
  }
  return num / den;
}

}  // namespace qident::qcore
