#include "qident/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <vector>

namespace qident::mp {

std::string Scalar::str(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (digits <= 0) {
    // ceil(prec * log10(2)) + 2 digits round-trips the binary value
    digits = static_cast<int>(precision_bits() * 0.30103) + 3;
  }
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRe", digits - 1);
  char* out = nullptr;
  mpfr_asprintf(&out, fmt, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

Scalar abs(const Scalar& x) {
  Scalar r(x);
  mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

Scalar sqrt(const Scalar& x) {
  if (x.sign() < 0) throw std::domain_error("sqrt: negative argument");
  Scalar r(x);
  mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

Scalar exp(const Scalar& x) {
  Scalar r(x);
  mpfr_exp(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

Scalar log(const Scalar& x) {
  if (x.sign() <= 0) throw std::domain_error("log: argument must be positive");
  Scalar r(x);
  mpfr_log(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

Scalar pow(const Scalar& x, const Scalar& y) {
  if (x.sign() <= 0) {
    if (x.is_zero() && y.sign() > 0) return Scalar(x.precision_bits());
    throw std::domain_error("pow: base must be positive");
  }
  Scalar r(std::max(x.precision_bits(), y.precision_bits()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Scalar pow_si(const Scalar& x, long k) {
  Scalar r(x);
  mpfr_pow_si(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}

Scalar gamma(const Scalar& x) {
  if (x.sign() <= 0)
    throw std::domain_error("gamma: argument must be positive, got " + x.str(8));
  Scalar r(x);
  mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Scalar const_pi(long bits) {
  // mpfr_const_pi maintains an internal cache; serialize first computation
  // so callers may fan out across threads freely.
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  Scalar r(bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

bool rel_close(const Scalar& a, const Scalar& b, double tol, double floor) {
  long prec = std::max(a.precision_bits(), b.precision_bits());
  Scalar diff = abs(a - b);
  Scalar scale = max(abs(a), abs(b));
  if (floor > 0.0) scale = max(scale, Scalar::of(floor, prec));
  if (scale.is_zero()) return diff.is_zero();
  return diff <= scale * Scalar::of(tol, prec);
}

Scalar rel_error(const Scalar& a, const Scalar& b, const Scalar& floor) {
  Scalar scale = max(max(abs(a), abs(b)), floor);
  return abs(a - b) / scale;
}

}  // namespace qident::mp
