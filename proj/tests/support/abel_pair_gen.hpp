#pragma once

// Randomized admissible Abel pairs for the summation-by-parts property:
// B has a basic-hypergeometric term ratio with |x| < 1, A is drawn from three
// decaying/stabilizing families, so both series in the lemma converge.

#include "qident/abel.hpp"
#include "qident/detail/rng.hpp"

namespace testgen {

using qident::abel::AbelPair;
using qident::abel::SequenceSpec;
using qident::mp::Scalar;
using qident::qcore::QContext;

struct RandomPair {
  double q;
  AbelPair pair;
};

inline RandomPair make_random_pair(qident::detail::SplitMix64& rng, long bits) {
  double qd = rng.uniform(0.1, 0.85);
  Scalar q = Scalar::of(qd, bits);

  double xd = rng.uniform(0.1, 0.85) * (rng.next() % 2 ? 1 : -1);
  int nup = static_cast<int>(rng.next() % 3);
  std::vector<Scalar> ups;
  for (int k = 0; k < nup; ++k) ups.push_back(Scalar::of(rng.uniform(0.1, 2.0), bits));
  Scalar x = Scalar::of(xd, bits);
  SequenceSpec B{Scalar::of_int(1, bits), 0,
                 [ups, x, q](long, const Scalar& t) {
                   Scalar num = x;
                   for (const Scalar& u : ups) num *= (1 - u * t);
                   return num / (1 - q * t);
                 },
                 nullptr};

  SequenceSpec A;
  switch (rng.next() % 3) {
    case 0: {
      Scalar c = Scalar::of(rng.uniform(0.1, 0.9), bits);
      A = {1 / (1 - c), 0,
           [q, c](long, const Scalar& t) { return q * (1 - c * t) / (1 - c * q * t); },
           nullptr};
      break;
    }
    case 1: {
      Scalar a2 = Scalar::of(rng.uniform(1.5, 5.0), bits);
      A = {1 / a2, 0,
           [q, a2](long, const Scalar& t) {
             return ((1 - t) + a2 * (1 - q)) / ((1 - q * t) + a2 * (1 - q));
           },
           nullptr};
      break;
    }
    default: {
      A = {Scalar::of_int(1, bits), 0, [q](long, const Scalar&) { return q; }, nullptr};
      break;
    }
  }
  return {qd, AbelPair{A, B}};
}

}  // namespace testgen
