#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qident/hyper.hpp"
#include "qident/params.hpp"

namespace qident::ident {

using hyper::SumMode;
using mp::PrecisionPolicy;
using mp::Scalar;

enum class Tier {
  Standard,          // 1e-30 at 192 bits
  GammaLimited,      // 1e-25: Gamma/pi evaluations bound the error
  LimitConsistency,  // C3: checked through the q->1 machinery, dual-route here
  Experimental       // X1: reported, never gates
};

struct EvalOut {
  Scalar value;
  long terms = 0;
};

using SideFn = std::function<EvalOut(const ParamMap&, const PrecisionPolicy&)>;

struct IdentityRecord {
  std::string id;
  std::string citation;
  std::vector<std::pair<std::string, Interval>> params;
  std::vector<std::string> constraint_text;  // documented tiny-grammar strings
  // returns the first violated predicate's text, if any
  std::function<std::optional<std::string>(const ParamMap&)> violated;
  SideFn lhs, rhs;
  Tier tier = Tier::Standard;
  double default_tolerance = 1e-30;

  bool experimental() const { return tier == Tier::Experimental; }
};

struct VerificationReport {
  std::string id;
  ParamMap point;
  Scalar lhs, rhs, rel_error;
  long terms_lhs = 0, terms_rhs = 0;
  long precision_bits = 0;
  int escalations = 0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifySummary {
  std::string id;
  std::vector<VerificationReport> points;
  Scalar max_rel_error;
  double tolerance = 0.0;
  bool pass = false;
  bool experimental = false;
};

class Registry {
 public:
  static const Registry& instance();
  const std::vector<IdentityRecord>& all() const { return records_; }
  const IdentityRecord& find(const std::string& id) const;
  bool contains(const std::string& id) const;

 private:
  Registry();
  std::vector<IdentityRecord> records_;
};

/// JSON description of the registry (ids, citations, parameter intervals,
/// constraints); the docs, the CLI `list --format json` and the tests all
/// read this one serialization.
std::string registry_json();

/// Relative error floor used in reports: 10^(-bits/3).
Scalar report_floor(long bits);

VerificationReport evaluate(const std::string& id, const ParamMap& point,
                            const PrecisionPolicy& policy, double tolerance,
                            double rhs_scale = 1.0);

/// Deterministic rejection sampling from the declared intervals.
ParamMap sample_point(const std::string& id, std::uint64_t seed, long bits = 128);

VerifySummary verify(const std::string& id, int n_samples,
                     const PrecisionPolicy& policy, double tolerance,
                     std::uint64_t seed = 0, int workers = 1,
                     double rhs_scale = 1.0);

// -- building blocks shared with the limits module -------------------------

EvalOut eval_side(const std::string& id, bool lhs, const ParamMap& point,
                  const PrecisionPolicy& policy);

/// q-Cantarini pieces at the theorem's base variable q (series work in q^2).
EvalOut c2_lhs(const Scalar& q, const PrecisionPolicy& policy);
EvalOut c2_rhs_series(const Scalar& q, const PrecisionPolicy& policy);
Scalar c2_rhs_closed(const Scalar& q, const PrecisionPolicy& policy);

// -- paper-polynomial accessors (transcription tests target these) ---------

Scalar g3_p(const Scalar& q, const Scalar& a, const Scalar& b, long n);
Scalar c2_rho1(const Scalar& q, long n);
Scalar c2_rho2(const Scalar& q, long n);

}  // namespace qident::ident
