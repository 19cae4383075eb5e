#include "report.hpp"

#include <sstream>

namespace qident::report {

void RunConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (precision_bits < 64) throw std::invalid_argument("precision-bits must be >= 64");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (tolerance) {
    double t = std::stod(*tolerance);
    if (!(t > 0.0 && t < 1.0))
      throw std::invalid_argument("tolerance must lie in (0, 1)");
  }
  if (format != "text" && format != "json" && format != "csv")
    throw std::invalid_argument("format must be text, json or csv");
}

mp::PrecisionPolicy RunConfig::policy_for(double tolerance_value) const {
  // the evaluation target sits well below the acceptance tolerance
  return mp::PrecisionPolicy(precision_bits, tolerance_value * 1e-4);
}

std::vector<std::string> resolve_ids(const std::vector<std::string>& ids) {
  const auto& reg = ident::Registry::instance();
  std::vector<std::string> out;
  for (const auto& id : ids) {
    if (id == "all") {
      for (const auto& r : reg.all()) out.push_back(r.id);
    } else {
      reg.find(id);  // throws std::invalid_argument for unknown ids
      out.push_back(id);
    }
  }
  if (out.empty()) throw std::invalid_argument("no identities selected");
  return out;
}

double tolerance_for(const RunConfig& cfg, const ident::IdentityRecord& rec) {
  return cfg.tolerance ? std::stod(*cfg.tolerance) : rec.default_tolerance;
}

namespace {

Json point_json(const ident::VerificationReport& r) {
  Json par = Json::object();
  for (const auto& [name, value] : r.point.items()) par[name] = value.str(17);
  Json p;
  p["params"] = par;
  p["lhs"] = r.lhs.str();
  p["rhs"] = r.rhs.str();
  p["rel_error"] = r.rel_error.str(6);
  p["terms_lhs"] = r.terms_lhs;
  p["terms_rhs"] = r.terms_rhs;
  p["bits"] = r.precision_bits;
  p["escalations"] = r.escalations;
  p["pass"] = r.pass;
  return p;
}

}  // namespace

VerifyOutcome run_verify(const RunConfig& cfg) {
  cfg.validate();
  const auto& reg = ident::Registry::instance();

  Json root;
  Json jcfg;
  jcfg["ids"] = cfg.ids;
  jcfg["samples"] = cfg.samples;
  jcfg["seed"] = cfg.seed;
  jcfg["precision_bits"] = cfg.precision_bits;
  jcfg["tolerance"] = cfg.tolerance ? Json(*cfg.tolerance) : Json(nullptr);
  jcfg["workers"] = cfg.workers;
  if (cfg.rhs_scale != 1.0) jcfg["rhs_scale"] = cfg.rhs_scale;
  root["run_config"] = jcfg;

  Json results = Json::array();
  bool overall = true;
  long total_points = 0, failures = 0, experimental_failures = 0;

  for (const auto& id : cfg.ids) {
    const auto& rec = reg.find(id);
    double tol = tolerance_for(cfg, rec);
    int n = rec.params.empty() ? 1 : cfg.samples;
    auto summary = ident::verify(id, n, cfg.policy_for(tol), tol, cfg.seed,
                                 cfg.workers, cfg.rhs_scale);
    Json entry;
    entry["id"] = id;
    entry["citation"] = rec.citation;
    entry["tolerance"] = tol;
    entry["experimental"] = rec.experimental();
    entry["pass"] = summary.pass;
    entry["max_rel_error"] = summary.max_rel_error.str(6);
    Json pts = Json::array();
    for (const auto& r : summary.points) {
      pts.push_back(point_json(r));
      ++total_points;
      if (!r.pass) {
        if (rec.experimental())
          ++experimental_failures;
        else
          ++failures;
      }
    }
    entry["points"] = pts;
    results.push_back(entry);
    if (!rec.experimental()) overall = overall && summary.pass;
  }
  root["results"] = results;

  Json sum;
  sum["identities"] = cfg.ids.size();
  sum["points"] = total_points;
  sum["failures"] = failures;
  sum["experimental_failures"] = experimental_failures;
  sum["pass"] = overall;
  root["summary"] = sum;
  return {root, overall};
}

std::string render_text(const Json& report) {
  std::ostringstream os;
  for (const auto& e : report.at("results")) {
    bool exp = e.at("experimental").get<bool>();
    os << (e.at("pass").get<bool>() ? "PASS " : "FAIL ") << e.at("id").get<std::string>()
       << (exp ? "  [EXPERIMENTAL]" : "") << "\n"
       << "  " << e.at("citation").get<std::string>() << "\n"
       << "  max rel error " << e.at("max_rel_error").get<std::string>()
       << "  (tolerance " << e.at("tolerance").dump() << ", "
       << e.at("points").size() << " points)\n";
    for (const auto& p : e.at("points")) {
      if (p.at("pass").get<bool>()) continue;
      os << "    FAILED point " << p.at("params").dump()
         << " rel_error " << p.at("rel_error").get<std::string>() << "\n";
    }
  }
  const auto& s = report.at("summary");
  os << (s.at("pass").get<bool>() ? "PASS" : "FAIL") << ": " << s.at("points")
     << " points over " << s.at("identities") << " identities, "
     << s.at("failures") << " failures";
  if (s.at("experimental_failures").get<long>() > 0)
    os << " (+" << s.at("experimental_failures") << " experimental)";
  os << "\n";
  return os.str();
}

namespace {

std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string render_csv(const Json& report) {
  std::ostringstream os;
  os << "id,point,params,lhs,rhs,rel_error,terms_lhs,terms_rhs,bits,pass\r\n";
  for (const auto& e : report.at("results")) {
    long idx = 0;
    for (const auto& p : e.at("points")) {
      std::string params;
      for (auto it = p.at("params").begin(); it != p.at("params").end(); ++it) {
        if (!params.empty()) params += ";";
        params += it.key() + "=" + it.value().get<std::string>();
      }
      os << csv_quote(e.at("id").get<std::string>()) << "," << idx++ << ","
         << csv_quote(params) << "," << csv_quote(p.at("lhs").get<std::string>())
         << "," << csv_quote(p.at("rhs").get<std::string>()) << ","
         << csv_quote(p.at("rel_error").get<std::string>()) << ","
         << p.at("terms_lhs") << "," << p.at("terms_rhs") << "," << p.at("bits")
         << "," << (p.at("pass").get<bool>() ? "true" : "false") << "\r\n";
    }
  }
  return os.str();
}

Json registry_listing(const std::optional<std::string>& only_id) {
  Json all = Json::parse(ident::registry_json());
  if (!only_id) return all;
  Json out = Json::array();
  for (const auto& e : all)
    if (e.at("id") == *only_id) out.push_back(e);
  if (out.empty()) throw std::invalid_argument("unknown identity \"" + *only_id + "\"");
  return out;
}

}  // namespace qident::report
