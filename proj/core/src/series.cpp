#include "qident/series.hpp"

#include <vector>

#include "qident/errors.hpp"

namespace qident::hyper {

namespace {

class FnStream final : public TermStream {
 public:
  FnStream(std::function<Scalar(long)> f, long first) : f_(std::move(f)), n_(first) {}
  Scalar next() override { return f_(n_++); }

 private:
  std::function<Scalar(long)> f_;
  long n_;
};

// Accumulates terms under the stopping rule. |group| magnitudes feed both the
// three-consecutive-small acceptance and a windowed divergence probe.
// The acceptance threshold carries a ratio-aware safety factor (1 - r)/4,
// with r the observed |t_n/t_{n-1}|: the geometric tail left behind is then
// bounded by target * |sum| regardless of how close r sits to 1.
struct Accumulator {
  explicit Accumulator(const PrecisionPolicy& policy)
      : sum(policy.working_bits),
        last_mag(policy.working_bits),
        prev_mag(policy.working_bits),
        threshold_factor(Scalar::of(policy.target() / 4.0, policy.working_bits)) {}

  Scalar sum;
  Scalar last_mag;
  Scalar prev_mag;
  Scalar threshold_factor;  // target/4
  int consec_small = 0;
  long count = 0;

  // divergence probe state: window maxima of |term|
  Scalar window_max{mp::kMinPrecisionBits};
  Scalar prev_window_max{mp::kMinPrecisionBits};
  int growing_windows = 0;
  static constexpr long kWindow = 64;

  bool push(const Scalar& term) {
    sum += term;
    prev_mag = last_mag;
    last_mag = mp::abs(term);
    ++count;

    // one_minus_r in [1e-3, 1]
    Scalar one_minus_r(64);
    if (prev_mag.is_zero() || last_mag.is_zero() || last_mag >= prev_mag) {
      one_minus_r = (last_mag.is_zero() || prev_mag.is_zero())
                        ? Scalar::of_int(1, 64)
                        : Scalar::of(1e-3, 64);
    } else {
      one_minus_r = 1 - last_mag / prev_mag;
      if (one_minus_r < Scalar::of(1e-3, 64)) one_minus_r = Scalar::of(1e-3, 64);
    }
    Scalar threshold = threshold_factor * one_minus_r * mp::abs(sum);
    if (last_mag <= threshold || last_mag.is_zero()) {
      if (++consec_small >= 3) return true;
    } else {
      consec_small = 0;
    }

    if (last_mag > window_max) window_max = last_mag;
    if (count % kWindow == 0) {
      // strictly growing window maxima for three windows in a row is a
      // divergence signal; legitimate q-Pochhammer transients in this catalog
      // span only a handful of terms
      if (!prev_window_max.is_zero() &&
          window_max > prev_window_max * Scalar::of(1.01, 64)) {
        if (++growing_windows >= 3)
          throw divergence_error(
              "series terms not decreasing over probation window (|t| ~ " +
              last_mag.str(6) + " after " + std::to_string(count) + " terms)");
      } else {
        growing_windows = 0;
      }
      prev_window_max = window_max;
      window_max = Scalar(mp::kMinPrecisionBits);
    }
    return false;
  }
};

}  // namespace

std::unique_ptr<TermStream> stream_of(std::function<Scalar(long)> f, long first_index) {
  return std::make_unique<FnStream>(std::move(f), first_index);
}

SeriesResult sum_direct(TermStream& terms, const PrecisionPolicy& policy,
                        long first_index, long max_terms) {
  (void)first_index;
  Accumulator acc(policy);
  for (long i = 0; i < max_terms; ++i) {
    if (acc.push(terms.next()))
      return {acc.sum, acc.count, acc.last_mag, 0};
  }
  throw divergence_error("series did not meet the stopping rule within " +
                         std::to_string(max_terms) + " terms");
}

SeriesResult sum_paired(TermStream& terms, const PrecisionPolicy& policy,
                        long first_index, long max_terms) {
  // Groups follow absolute indices: group 0 is index 0 alone, group k is
  // {2k-1, 2k}. A stream starting at index 1 therefore opens with a full pair.
  if (first_index != 0 && first_index != 1)
    throw std::invalid_argument("sum_paired: first_index must be 0 or 1");
  Accumulator acc(policy);
  long consumed = 0;
  if (first_index == 0) {
    ++consumed;
    if (acc.push(terms.next())) return {acc.sum, consumed, acc.last_mag, 0};
  }
  while (consumed + 2 <= max_terms) {
    Scalar pair = terms.next();
    pair += terms.next();
    consumed += 2;
    if (acc.push(pair)) return {acc.sum, consumed, acc.last_mag, 0};
  }
  throw divergence_error("paired series did not meet the stopping rule within " +
                         std::to_string(max_terms) + " terms");
}

SeriesResult sum_alternating_accel(const StreamFactory& make,
                                   const PrecisionPolicy& policy,
                                   long prefix) {
  const long bits = policy.working_bits;
  const double target = policy.target();

  // CVZ ("Convergence acceleration of alternating series", Cohen,
  // Rodriguez Villegas, Zagier): with N Chebyshev nodes the estimate of
  // sum (-1)^k a_k converges like (3+sqrt(8))^-N for totally monotone a_k.
  auto cvz = [&](long N, int sign0, const std::vector<Scalar>& a) {
    Scalar d = Scalar::of_int(3, bits) + mp::sqrt(Scalar::of_int(8, bits));
    d = mp::pow_si(d, N);
    d = (d + 1 / d) / 2;
    Scalar b = Scalar::of_int(-1, bits);
    Scalar c = -d;
    Scalar s = Scalar(bits);
    for (long k = 0; k < N; ++k) {
      c = b - c;
      s += c * a[static_cast<size_t>(k)];
      // b <- (k+N)(k-N) b / ((k+1/2)(k+1))
      b *= (k + N);
      b *= (k - N);
      b /= (2 * k + 1);
      b *= 2;
      b /= (k + 1);
    }
    s /= d;
    return sign0 > 0 ? s : -s;
  };

  // prefix terms summed directly; |terms| beyond must strictly alternate
  auto gather = [&](long count, Scalar& prefix_sum, int& sign0,
                    std::vector<Scalar>& mags, long& used) {
    auto st = make();
    prefix_sum = Scalar(bits);
    mags.clear();
    mags.reserve(static_cast<size_t>(count));
    int expected = 0;
    used = 0;
    for (long n = 0; n < prefix; ++n) {
      prefix_sum += st->next();
      ++used;
    }
    for (long k = 0; k < count; ++k) {
      Scalar t = st->next();
      ++used;
      int sg = t.sign();
      if (sg == 0) {
        // a terminated series; the remaining tail is exactly zero
        mags.push_back(Scalar(bits));
        continue;
      }
      if (k == 0) {
        sign0 = sg;
        expected = -sg;
      } else {
        if (sg != expected)
          throw divergence_error(
              "alternating accelerator: sign pattern broke at offset " +
              std::to_string(k));
        expected = -sg;
      }
      mags.push_back(mp::abs(t));
    }
  };

  const long kMaxNodes = 8192;
  Scalar prev(bits);
  bool have_prev = false;
  for (long N = 32; N <= kMaxNodes; N *= 2) {
    Scalar prefix_sum(bits);
    int sign0 = 1;
    std::vector<Scalar> mags;
    long used = 0;
    gather(N, prefix_sum, sign0, mags, used);
    Scalar est = prefix_sum + cvz(N, sign0, mags);
    if (have_prev) {
      Scalar diff = mp::abs(est - prev);
      Scalar scale = mp::max(mp::abs(est), Scalar::of(1e-30, bits));
      if (diff <= scale * Scalar::of(target, bits))
        return {est, used, diff, 0};
    }
    prev = est;
    have_prev = true;
  }
  throw divergence_error(
      "alternating accelerator did not stabilize within node budget");
}

SeriesResult sum_series(const StreamFactory& make, const PrecisionPolicy& policy,
                        SumMode mode, long first_index, long max_terms) {
  switch (mode) {
    case SumMode::Direct: {
      auto st = make();
      return sum_direct(*st, policy, first_index, max_terms);
    }
    case SumMode::PairedTail: {
      auto st = make();
      return sum_paired(*st, policy, first_index, max_terms);
    }
    case SumMode::AlternatingAccel:
      return sum_alternating_accel(make, policy);
  }
  throw std::logic_error("unreachable");
}

}  // namespace qident::hyper
