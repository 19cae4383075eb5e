#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "qident/errors.hpp"

namespace qident::mp {

inline constexpr long kMinPrecisionBits = 64;

/// Arbitrary-precision real number backed by MPFR, rounded to nearest.
/// Every value carries its own working precision; binary operations are
/// performed at the max of the two operand precisions and the result
/// carries that precision.
class Scalar {
 public:
  Scalar() : Scalar(kMinPrecisionBits) {}

  explicit Scalar(long precision_bits) {
    check_precision(precision_bits);
    mpfr_init2(v_, precision_bits);
    mpfr_set_zero(v_, 1);
  }

  Scalar(const Scalar& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  Scalar(Scalar&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }

  Scalar& operator=(const Scalar& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  Scalar& operator=(Scalar&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }

  ~Scalar() { mpfr_clear(v_); }

  static Scalar of(double x, long bits) {
    Scalar s(bits);
    mpfr_set_d(s.v_, x, MPFR_RNDN);
    return s;
  }

  static Scalar of_int(long x, long bits) {
    Scalar s(bits);
    mpfr_set_si(s.v_, x, MPFR_RNDN);
    return s;
  }

  static Scalar of_ratio(long num, long den, long bits) {
    Scalar s = of_int(num, bits);
    Scalar d = of_int(den, bits);
    mpfr_div(s.v_, s.v_, d.v_, MPFR_RNDN);
    return s;
  }

  /// Parses a decimal string such as "1e-30" or "0.3333".
  static Scalar parse(const std::string& text, long bits) {
    Scalar s(bits);
    if (mpfr_set_str(s.v_, text.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("unparseable number: \"" + text + "\"");
    return s;
  }

  long precision_bits() const { return mpfr_get_prec(v_); }

  /// Returns a copy carried at (at least) the given precision.
  Scalar at_precision(long bits) const {
    Scalar s(bits);
    mpfr_set(s.v_, v_, MPFR_RNDN);
    return s;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  /// Decimal string with full precision (digits=0) or a fixed digit count.
  /// Full precision prints enough digits to round-trip the binary value,
  /// so equal values at equal precision serialize identically.
  std::string str(int digits = 0) const;

  // -- arithmetic ------------------------------------------------------

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    Scalar r(joint(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    Scalar r(joint(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar r(joint(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    Scalar r(joint(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  Scalar operator-() const {
    Scalar r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  // In-place variants keep the left operand's storage (grown if the right
  // side is wider), which matters in series inner loops.
  Scalar& operator+=(const Scalar& o) { grow(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Scalar& operator-=(const Scalar& o) { grow(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Scalar& operator*=(const Scalar& o) { grow(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Scalar& operator/=(const Scalar& o) { grow(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  Scalar& operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
  Scalar& operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }

  friend Scalar operator*(const Scalar& a, long k) { Scalar r(a); r *= k; return r; }
  friend Scalar operator*(long k, const Scalar& a) { return a * k; }
  friend Scalar operator/(const Scalar& a, long k) { Scalar r(a); r /= k; return r; }
  friend Scalar operator+(const Scalar& a, long k) {
    Scalar r(a);
    mpfr_add_si(r.v_, r.v_, k, MPFR_RNDN);
    return r;
  }
  friend Scalar operator+(long k, const Scalar& a) { return a + k; }
  friend Scalar operator-(const Scalar& a, long k) { return a + (-k); }
  friend Scalar operator-(long k, const Scalar& a) {
    Scalar r(a);
    mpfr_si_sub(r.v_, k, r.v_, MPFR_RNDN);
    return r;
  }
  friend Scalar operator/(long k, const Scalar& a) {
    Scalar r(a);
    mpfr_si_div(r.v_, k, r.v_, MPFR_RNDN);
    return r;
  }

  // -- comparisons (exact, precision-independent) -----------------------

  friend bool operator==(const Scalar& a, const Scalar& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  friend bool operator==(const Scalar& a, long k) { return mpfr_cmp_si(a.v_, k) == 0; }
  friend bool operator<(const Scalar& a, long k) { return mpfr_cmp_si(a.v_, k) < 0; }
  friend bool operator>(const Scalar& a, long k) { return mpfr_cmp_si(a.v_, k) > 0; }
  friend bool operator<=(const Scalar& a, long k) { return mpfr_cmp_si(a.v_, k) <= 0; }
  friend bool operator>=(const Scalar& a, long k) { return mpfr_cmp_si(a.v_, k) >= 0; }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  static void check_precision(long bits) {
    if (bits < kMinPrecisionBits)
      throw std::invalid_argument("precision_bits must be >= 64, got " +
                                  std::to_string(bits));
  }
  static long joint(const Scalar& a, const Scalar& b) {
    return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
  }
  void grow(const Scalar& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) {
      mpfr_t tmp;
      mpfr_init2(tmp, mpfr_get_prec(o.v_));
      mpfr_set(tmp, v_, MPFR_RNDN);
      mpfr_swap(v_, tmp);
      mpfr_clear(tmp);
    }
  }

  mpfr_t v_;
};

// -- elementary functions ----------------------------------------------

Scalar abs(const Scalar& x);
Scalar sqrt(const Scalar& x);   // x >= 0
Scalar exp(const Scalar& x);
Scalar log(const Scalar& x);    // x > 0

/// exp(y * ln x); requires x > 0.
Scalar pow(const Scalar& x, const Scalar& y);
Scalar pow_si(const Scalar& x, long k);

/// Euler Gamma for x > 0 (nonpositive arguments are out of scope here).
/// MPFR evaluates it correctly rounded, so the claimed relative error bound
/// is 2^(1-precision).
Scalar gamma(const Scalar& x);

/// Pi at the requested precision. Safe under concurrent first use.
Scalar const_pi(long bits);

inline Scalar max(const Scalar& a, const Scalar& b) { return a >= b ? a : b; }
inline Scalar min(const Scalar& a, const Scalar& b) { return a <= b ? a : b; }

/// |a - b| <= tol * max(|a|, |b|, floor)
bool rel_close(const Scalar& a, const Scalar& b, double tol, double floor = 0.0);

/// |a - b| / max(|a|, |b|, floor)
Scalar rel_error(const Scalar& a, const Scalar& b, const Scalar& floor);

// -- precision policy ----------------------------------------------------

/// Working precision plus the truncation / agreement target every adaptive
/// computation honors. Escalation doubles working_bits; once max_escalations
/// is spent, evaluation throws rather than returning an unverified value.
struct PrecisionPolicy {
  long working_bits = 192;
  double target_rel_error = 0.0;  // 0 resolves to 2^-(working_bits/2)
  int max_escalations = 3;

  PrecisionPolicy() = default;
  PrecisionPolicy(long bits, double target, int esc = 3)
      : working_bits(bits), target_rel_error(target), max_escalations(esc) {
    validate();
  }

  double target() const {
    if (target_rel_error > 0.0) return target_rel_error;
    double t = 1.0;
    for (long i = 0; i < working_bits / 2; ++i) t *= 0.5;
    return t;
  }

  PrecisionPolicy escalated() const {
    PrecisionPolicy p = *this;
    p.target_rel_error = target();  // pin: the goal does not move with the bits
    p.working_bits *= 2;
    return p;
  }

  void validate() const {
    if (working_bits < kMinPrecisionBits)
      throw std::invalid_argument("working_bits must be >= 64");
    if (target_rel_error < 0.0 || target_rel_error >= 1.0)
      throw std::invalid_argument("target_rel_error must lie in (0, 1)");
    if (max_escalations < 0 || max_escalations > 16)
      throw std::invalid_argument("max_escalations out of range");
  }
};

/// Runs eval(policy) at the working precision and again at doubled precision;
/// accepts the doubled-precision value once the two agree to the target.
/// Each disagreement escalates the base precision (up to max_escalations).
template <class Eval>
Scalar with_escalation(const PrecisionPolicy& policy, Eval&& eval,
                       int* escalations_out = nullptr) {
  PrecisionPolicy p = policy;
  for (int e = 0; e <= policy.max_escalations; ++e) {
    Scalar lo = eval(p);
    Scalar hi = eval(p.escalated());
    if (rel_close(lo, hi, p.target())) {
      if (escalations_out) *escalations_out = e;
      return hi;
    }
    p = p.escalated();
  }
  throw escalation_exhausted_error(
      "precision escalation exhausted after " +
      std::to_string(policy.max_escalations) + " doublings");
}

}  // namespace qident::mp
