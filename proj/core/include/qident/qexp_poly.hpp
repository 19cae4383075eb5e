#pragma once

#include <vector>

#include "qident/qpochhammer.hpp"

namespace qident::hyper {

using mp::Scalar;
using qcore::QContext;

/// A sum of monomials c * q^(mult*n + shift), transcribed verbatim from a
/// polynomial weight. Grouping by `mult` lets the evaluator reuse powers of
/// q^n (t, t^2, t^3, ...).
struct QExpPoly {
  struct Group {
    int mult = 0;                  // exponent multiple of n: q^(mult*n)
    std::vector<long> coeffs;      // coeffs[i] multiplies q^(shift0 + i)
    int shift0 = 0;
  };
  std::vector<Group> groups;

  /// Evaluate at integer index n given q and t = q^n.
  Scalar eval(const QContext& ctx, const Scalar& t) const {
    Scalar total(ctx.bits());
    for (const Group& g : groups) {
      Scalar qpow = mp::pow_si(ctx.q, g.shift0);
      Scalar inner(ctx.bits());
      for (size_t i = 0; i < g.coeffs.size(); ++i) {
        if (g.coeffs[i] != 0) inner += qpow * g.coeffs[i];
        qpow *= ctx.q;
      }
      if (g.mult != 0) inner *= mp::pow_si(t, g.mult);
      total += inner;
    }
    return total;
  }
};

}  // namespace qident::hyper
