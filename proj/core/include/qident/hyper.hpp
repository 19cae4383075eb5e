#pragma once

#include <functional>
#include <vector>

#include "qident/qpochhammer.hpp"
#include "qident/series.hpp"

namespace qident::hyper {

using qcore::QContext;

/// rFs with upper parameters a1..ar, lower b1..bs and argument x.
struct ClassicalSeriesSpec {
  std::vector<Scalar> upper;
  std::vector<Scalar> lower;
  Scalar argument;
};

/// r phi_{r-1}: upper a1..ar, lower b1..b_{r-1} (the (q;q)_n factor is
/// implicit), argument x, all against a QContext.
struct BasicSeriesSpec {
  std::vector<Scalar> upper;
  std::vector<Scalar> lower;
  Scalar argument;
};

/// Weight applied on top of a hypergeometric term, as a function of the
/// index n and t = q^n (basic) or of n alone (classical, t unused).
using WeightFn = std::function<Scalar(long n, const Scalar& t)>;

SeriesResult eval_classical(const ClassicalSeriesSpec& spec,
                            const PrecisionPolicy& policy,
                            SumMode mode = SumMode::Direct);

SeriesResult eval_basic(const BasicSeriesSpec& spec, const QContext& ctx,
                        SumMode mode = SumMode::Direct);

/// sum_n weight(n) * base_term(n) where base_term follows the basic
/// hypergeometric term recurrence of `spec`. This is the evaluator for every
/// non-purely-hypergeometric sum in the catalog.
SeriesResult eval_weighted_basic(const BasicSeriesSpec& spec,
                                 const WeightFn& weight, const QContext& ctx,
                                 SumMode mode = SumMode::Direct);

SeriesResult eval_weighted_classical(const ClassicalSeriesSpec& spec,
                                     const WeightFn& weight,
                                     const PrecisionPolicy& policy,
                                     SumMode mode = SumMode::Direct);

/// Term streams for callers that need to assemble their own sums.
StreamFactory basic_term_stream(const BasicSeriesSpec& spec,
                                const QContext& ctx,
                                WeightFn weight = nullptr);
StreamFactory classical_term_stream(const ClassicalSeriesSpec& spec,
                                    const PrecisionPolicy& policy,
                                    WeightFn weight = nullptr);

}  // namespace qident::hyper
