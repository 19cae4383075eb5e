#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qident/identities.hpp"

namespace qident::report {

using Json = nlohmann::ordered_json;

/// Everything a verification run needs; mirrors the CLI flags and the
/// --config JSON schema.
struct RunConfig {
  std::vector<std::string> ids;  // resolved, never "all"
  int samples = 25;
  std::uint64_t seed = 0;
  long precision_bits = 192;
  std::optional<std::string> tolerance;  // decimal string; per-record default if unset
  int workers = 1;
  std::string format = "text";  // text | json | csv
  double rhs_scale = 1.0;       // negative-control hook

  void validate() const;
  mp::PrecisionPolicy policy_for(double tolerance_value) const;
};

/// Expands "all" and validates ids against the registry.
std::vector<std::string> resolve_ids(const std::vector<std::string>& ids);

double tolerance_for(const RunConfig& cfg, const ident::IdentityRecord& rec);

struct VerifyOutcome {
  Json json;
  bool pass = false;  // experimental identities never affect this
};

/// Runs identities::verify over cfg.ids and assembles the canonical report.
/// Identical configs produce byte-identical JSON.
VerifyOutcome run_verify(const RunConfig& cfg);

std::string render_text(const Json& report);
std::string render_csv(const Json& report);

Json registry_listing(const std::optional<std::string>& only_id);

}  // namespace qident::report
