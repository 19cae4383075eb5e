#pragma once

#include <stdexcept>
#include <string>

namespace qident {

// Base for everything that should surface as a numerical failure (CLI exit 3),
// as opposed to usage errors (std::invalid_argument, exit 2).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// A q-Pochhammer (or shifted-factorial) denominator factor vanished, or a
// weight denominator hit zero at some index.
class singular_parameter_error : public numeric_error {
 public:
  singular_parameter_error(const std::string& what, long index)
      : numeric_error(what + " (index n=" + std::to_string(index) + ")"),
        index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

class divergence_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

class limit_divergence_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

class escalation_exhausted_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

class extrapolation_failure_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// solve_vanishing_coefficient: B_{n+1}/B_n identically one.
class degenerate_ratio_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// solve_vanishing_coefficient: r1(t) = 1 has no admissible solution.
class no_solution_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// Rejection sampler failed to find an admissible point.
class sampler_starvation_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// A parameter point violates a registry constraint.
class rejected_point_error : public std::invalid_argument {
 public:
  rejected_point_error(const std::string& identity, const std::string& predicate)
      : std::invalid_argument("point rejected for " + identity +
                              ": violates \"" + predicate + "\""),
        predicate_(predicate) {}
  const std::string& predicate() const { return predicate_; }

 private:
  std::string predicate_;
};

}  // namespace qident
