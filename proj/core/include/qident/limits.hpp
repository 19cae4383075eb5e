#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qident/identities.hpp"
#include "qident/params.hpp"

namespace qident::limits {

using mp::PrecisionPolicy;
using mp::Scalar;

/// Evaluation points q_j = 1 - 2^-j, j = j0..j1, extrapolated in h = 1 - q.
/// Precision escalates with j (series near q = 1 converge slowly and lose
/// leading bits to cancellation): step j runs at max(base, 64 + 16 j) bits.
struct LimitSchedule {
  int j0 = 4;
  int j1 = 12;
  int order = 3;

  void validate() const {
    if (j0 < 1 || j1 <= j0 || order < 1)
      throw std::invalid_argument("bad LimitSchedule");
    if (j1 - j0 < order + 2)
      throw std::invalid_argument("LimitSchedule needs j1 - j0 >= order + 2");
  }
};

struct LimitResult {
  Scalar value;
  Scalar error_estimate;
  std::vector<Scalar> samples;  // f(q_j) in j order
};

using FamilyFn = std::function<Scalar(const Scalar& q, const PrecisionPolicy&)>;

LimitResult q_limit(const FamilyFn& family, const LimitSchedule& sched,
                    const PrecisionPolicy& base);

struct LimitPairReport {
  std::string pair_id;
  ParamMap point;
  bool ratio_mode = false;
  // value mode
  Scalar limit_value, limit_error, classical_value, difference;
  // ratio mode (C2:C1): the scalar each side stabilizes to, with the
  // extrapolation error of the ratio, plus the full-limit cross check
  Scalar ratio_lhs, ratio_lhs_error, ratio_rhs, ratio_rhs_error;
  Scalar full_lhs, full_rhs, full_difference, full_error;
  bool pass = false;
};

struct LimitPairSpec {
  std::string id;           // e.g. "G2:G1"
  std::string description;
  std::vector<std::pair<std::string, Interval>> params;
  LimitSchedule default_schedule;
};

const std::vector<LimitPairSpec>& limit_pairs();
const LimitPairSpec& limit_pair(const std::string& id);

ParamMap sample_limit_point(const std::string& pair_id, std::uint64_t seed,
                            long bits = 128);

/// Runs the registered q->1 check. `tolerance` is the allowance added on top
/// of the extrapolation error estimate (value mode), or the required relative
/// stability of the scalar ratios (ratio mode).
LimitPairReport check_limit_pair(const std::string& pair_id, const ParamMap& point,
                                 const LimitSchedule& sched,
                                 const PrecisionPolicy& base, double tolerance);

}  // namespace qident::limits
