#pragma once

#include <optional>
#include <vector>

#include "qident/scalar.hpp"

namespace qident::qcore {

using mp::PrecisionPolicy;
using mp::Scalar;

/// The base q together with the precision policy that governs every
/// evaluation made against it. The whole catalog works with 0 < q < 1.
struct QContext {
  Scalar q;
  PrecisionPolicy policy;

  QContext(Scalar base, PrecisionPolicy pol) : q(std::move(base)), policy(pol) {
    if (!(q > 0 && q < 1))
      throw std::invalid_argument("QContext requires 0 < q < 1, got " + q.str(8));
  }

  long bits() const { return policy.working_bits; }
  Scalar scalar(double v) const { return Scalar::of(v, bits()); }
  Scalar scalar(long v) const { return Scalar::of_int(v, bits()); }
};

/// (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k). The incremental recurrence
/// (a;q)_n = (a;q)_{n-1} (1 - a q^{n-1}) is also what the series evaluators
/// use term by term.
Scalar qpoch_finite(const Scalar& a, const QContext& ctx, long n);

/// (a;q)_inf, truncated where the remaining factors provably contribute a
/// relative error below the policy target. Exact zero if some factor is zero.
Scalar qpoch_infinite(const Scalar& a, const QContext& ctx);

/// (1 - q^n) / (1 - q).
Scalar qbracket(long n, const QContext& ctx);

/// The bracketed quotient of q-shifted factorials
/// [a1,...,ar; b1,...,bs; q]_len, with len = nullopt meaning infinity.
struct BracketRatio {
  std::vector<Scalar> numerators;
  std::vector<Scalar> denominators;
  std::optional<long> length;  // nullopt = infinite
};

Scalar bracket_ratio(const BracketRatio& spec, const QContext& ctx);

}  // namespace qident::qcore
