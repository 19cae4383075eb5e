#include "qident/hyper.hpp"

#include "qident/errors.hpp"

namespace qident::hyper {

namespace {

// Terms of a basic hypergeometric series, advanced by the exact ratio
//   t(n+1)/t(n) = prod(1 - a_i q^n) / ((1 - q^{n+1}) prod(1 - b_j q^n)) * x.
class BasicStream final : public TermStream {
 public:
  BasicStream(const BasicSeriesSpec& spec, const QContext& ctx, WeightFn weight)
      : spec_(spec),
        ctx_(ctx),
        weight_(std::move(weight)),
        term_(Scalar::of_int(1, ctx.bits())),
        qn_(Scalar::of_int(1, ctx.bits())),
        n_(0) {}

  Scalar next() override {
    Scalar out = weight_ ? weight_(n_, qn_) * term_ : term_;
    advance();
    return out;
  }

 private:
  void advance() {
    if (!term_.is_zero()) {
      Scalar num = Scalar::of_int(1, ctx_.bits());
      for (const Scalar& a : spec_.upper) num *= (1 - a * qn_);
      Scalar qn1 = qn_ * ctx_.q;
      Scalar den = 1 - qn1;
      for (size_t j = 0; j < spec_.lower.size(); ++j) {
        Scalar f = 1 - spec_.lower[j] * qn_;
        if (f.is_zero())
          throw singular_parameter_error(
              "basic series: lower parameter b=" + spec_.lower[j].str(8) +
                  " hits a pole",
              n_);
        den *= f;
      }
      term_ *= num;
      term_ /= den;
      term_ *= spec_.argument;
      qn_ = qn1;
    } else {
      qn_ *= ctx_.q;  // terminated: remaining terms are exactly zero
    }
    ++n_;
  }

  BasicSeriesSpec spec_;
  QContext ctx_;
  WeightFn weight_;
  Scalar term_;
  Scalar qn_;
  long n_;
};

// Classical rFs terms: t(n+1)/t(n) = prod(a_i + n) / prod(b_j + n) * x/(n+1).
class ClassicalStream final : public TermStream {
 public:
  ClassicalStream(const ClassicalSeriesSpec& spec, long bits, WeightFn weight)
      : spec_(spec),
        bits_(bits),
        weight_(std::move(weight)),
        term_(Scalar::of_int(1, bits)),
        n_(0) {}

  Scalar next() override {
    Scalar out = term_;
    if (weight_) {
      // classical weights receive the index as a Scalar in the second slot
      out = weight_(n_, Scalar::of_int(n_, bits_)) * term_;
    }
    advance();
    return out;
  }

 private:
  void advance() {
    if (!term_.is_zero()) {
      Scalar num = Scalar::of_int(1, bits_);
      for (const Scalar& a : spec_.upper) num *= (a + n_);
      Scalar den = Scalar::of_int(n_ + 1, bits_);
      for (size_t j = 0; j < spec_.lower.size(); ++j) {
        Scalar f = spec_.lower[j] + n_;
        if (f.is_zero())
          throw singular_parameter_error(
              "classical series: lower parameter b=" + spec_.lower[j].str(8) +
                  " is a nonpositive integer",
              n_);
        den *= f;
      }
      term_ *= num;
      term_ /= den;
      term_ *= spec_.argument;
    }
    ++n_;
  }

  ClassicalSeriesSpec spec_;
  long bits_;
  WeightFn weight_;
  Scalar term_;
  long n_;
};

void check_basic_spec(const BasicSeriesSpec& spec, const QContext& ctx) {
  // A lower parameter of the form q^-k (k >= 0) zeroes a denominator factor
  // at index k. Probe a generous horizon exactly.
  for (const Scalar& b : spec.lower) {
    Scalar bqk = b;
    for (long k = 0; k < 64; ++k) {
      if ((1 - bqk).is_zero())
        throw singular_parameter_error(
            "basic series: lower parameter b=" + b.str(8) + " equals q^-k", k);
      bqk = bqk * ctx.q;
    }
  }
}

}  // namespace

StreamFactory basic_term_stream(const BasicSeriesSpec& spec, const QContext& ctx,
                                WeightFn weight) {
  return [spec, ctx, weight]() -> std::unique_ptr<TermStream> {
    return std::make_unique<BasicStream>(spec, ctx, weight);
  };
}

StreamFactory classical_term_stream(const ClassicalSeriesSpec& spec,
                                    const PrecisionPolicy& policy,
                                    WeightFn weight) {
  long bits = policy.working_bits;
  return [spec, bits, weight]() -> std::unique_ptr<TermStream> {
    return std::make_unique<ClassicalStream>(spec, bits, weight);
  };
}

SeriesResult eval_basic(const BasicSeriesSpec& spec, const QContext& ctx,
                        SumMode mode) {
  check_basic_spec(spec, ctx);
  return sum_series(basic_term_stream(spec, ctx), ctx.policy, mode);
}

SeriesResult eval_weighted_basic(const BasicSeriesSpec& spec,
                                 const WeightFn& weight, const QContext& ctx,
                                 SumMode mode) {
  check_basic_spec(spec, ctx);
  return sum_series(basic_term_stream(spec, ctx, weight), ctx.policy, mode);
}

SeriesResult eval_classical(const ClassicalSeriesSpec& spec,
                            const PrecisionPolicy& policy, SumMode mode) {
  return sum_series(classical_term_stream(spec, policy), policy, mode);
}

SeriesResult eval_weighted_classical(const ClassicalSeriesSpec& spec,
                                     const WeightFn& weight,
                                     const PrecisionPolicy& policy,
                                     SumMode mode) {
  return sum_series(classical_term_stream(spec, policy, weight), policy, mode);
}

}  // namespace qident::hyper
