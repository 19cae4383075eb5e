#pragma once

#include <functional>
#include <memory>

#include "qident/scalar.hpp"

namespace qident::hyper {

using mp::PrecisionPolicy;
using mp::Scalar;

struct SeriesResult {
  Scalar value;
  long terms_used = 0;
  Scalar last_term_magnitude;
  int escalations = 0;
};

/// A forward-only term source. Streams are cheap to construct; adaptive
/// summation modes that need to restart consume a factory instead.
class TermStream {
 public:
  virtual ~TermStream() = default;
  virtual Scalar next() = 0;  // term at the current index, then advance
};

using StreamFactory = std::function<std::unique_ptr<TermStream>()>;

/// Wraps a callable f(n) -> Scalar as a stream starting at `first_index`.
std::unique_ptr<TermStream> stream_of(std::function<Scalar(long)> f,
                                      long first_index = 0);

/// How a series is to be summed.
///  - Direct: plain partial sums under the stopping rule (three consecutive
///    terms below target * |partial sum|, hard cap, divergence probe).
///  - PairedTail: limit of even-indexed partial sums, i.e. term 0 alone and
///    then pairs (t_{2k-1} + t_{2k}). This is the summation convention for the
///    alternating series whose terms approach a nonzero constant; pair sums
///    decay geometrically and the Direct rule applies to them.
///  - AlternatingAccel: CVZ Chebyshev acceleration for slowly convergent
///    strictly alternating series (terms must alternate in sign beyond a
///    short prefix). The node count doubles until two estimates agree.
enum class SumMode { Direct, PairedTail, AlternatingAccel };

inline constexpr long kDefaultTermCap = 1'000'000;

SeriesResult sum_direct(TermStream& terms, const PrecisionPolicy& policy,
                        long first_index = 0, long max_terms = kDefaultTermCap);

SeriesResult sum_paired(TermStream& terms, const PrecisionPolicy& policy,
                        long first_index = 0, long max_terms = kDefaultTermCap);

SeriesResult sum_alternating_accel(const StreamFactory& make,
                                   const PrecisionPolicy& policy,
                                   long prefix = 8);

SeriesResult sum_series(const StreamFactory& make, const PrecisionPolicy& policy,
                        SumMode mode, long first_index = 0,
                        long max_terms = kDefaultTermCap);

}  // namespace qident::hyper
