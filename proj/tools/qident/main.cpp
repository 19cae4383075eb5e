// qident: list, verify, sweep, limit-check and certify the q-series
// identity catalog from the command line.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "qident/abel.hpp"
#include "qident/errors.hpp"
#include "qident/limits.hpp"
#include "report.hpp"

namespace {

using Json = nlohmann::ordered_json;
using qident::ParamMap;
using qident::mp::PrecisionPolicy;
using qident::mp::Scalar;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string& payload, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream f(output_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file " + output_path);
    f << payload;
  }
}

long default_precision_bits() {
  if (const char* env = std::getenv("QVERIFY_PRECISION_BITS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 64) return v;
  }
  return 192;
}

struct CommonOpts {
  int samples = 25;
  std::uint64_t seed = 0;
  long precision_bits = default_precision_bits();
  std::string tolerance;  // empty = per-record default
  int workers = 1;
  std::string format = "text";
  std::string output;
  std::string config_path;
  double rhs_scale = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--samples", o.samples, "points per identity");
  cmd->add_option("--seed", o.seed, "deterministic sampling seed");
  cmd->add_option("--precision-bits", o.precision_bits, "working precision in bits");
  cmd->add_option("--tolerance", o.tolerance, "relative tolerance (decimal string)");
  cmd->add_option("--workers", o.workers, "parallel point evaluations");
  cmd->add_option("--format", o.format, "text | json | csv");
  cmd->add_option("--output", o.output, "write the report to a file");
  cmd->add_option("--config", o.config_path, "JSON config file (flags win)");
  cmd->add_option("--rhs-scale", o.rhs_scale,
                  "multiply every right-hand side (negative-control hook)");
}

// config file < explicit flags; flag presence is detected through CLI11
void merge_config(const CLI::App* cmd, CommonOpts& o) {
  if (o.config_path.empty()) return;
  std::ifstream f(o.config_path);
  if (!f) throw std::invalid_argument("cannot read config file " + o.config_path);
  Json cfg = Json::parse(f);
  auto given = [&](const char* flag) { return cmd->count(flag) > 0; };
  if (cfg.contains("samples") && !given("--samples")) o.samples = cfg["samples"];
  if (cfg.contains("seed") && !given("--seed")) o.seed = cfg["seed"];
  if (cfg.contains("precision_bits") && !given("--precision-bits"))
    o.precision_bits = cfg["precision_bits"];
  if (cfg.contains("tolerance") && !given("--tolerance") && !cfg["tolerance"].is_null())
    o.tolerance = cfg["tolerance"].get<std::string>();
  if (cfg.contains("workers") && !given("--workers")) o.workers = cfg["workers"];
  if (cfg.contains("format") && !given("--format"))
    o.format = cfg["format"].get<std::string>();
  if (cfg.contains("output") && !given("--output"))
    o.output = cfg["output"].get<std::string>();
}

qident::report::RunConfig to_run_config(const CommonOpts& o,
                                        const std::vector<std::string>& ids) {
  qident::report::RunConfig cfg;
  cfg.ids = qident::report::resolve_ids(ids);
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.precision_bits = o.precision_bits;
  if (!o.tolerance.empty()) cfg.tolerance = o.tolerance;
  cfg.workers = o.workers;
  cfg.format = o.format;
  cfg.rhs_scale = o.rhs_scale;
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------

int cmd_list(const std::optional<std::string>& id, const std::string& format,
             const std::string& output) {
  Json listing = qident::report::registry_listing(id);
  if (format == "json") {
    emit(listing.dump(2), output);
  } else {
    std::ostringstream os;
    for (const auto& e : listing) {
      os << e.at("id").get<std::string>() << "  [" << e.at("tier").get<std::string>()
         << ", tolerance " << e.at("default_tolerance").dump() << "]\n  "
         << e.at("citation").get<std::string>() << "\n";
      if (!e.at("params").empty()) {
        os << "  params:";
        for (const auto& p : e.at("params"))
          os << " " << p.at("name").get<std::string>() << " in ["
             << p.at("lo").dump() << ", " << p.at("hi").dump() << "]";
        os << "\n";
      }
      if (!e.at("constraints").empty()) {
        os << "  constraints:";
        for (const auto& c : e.at("constraints")) os << " " << c.get<std::string>() << ";";
        os << "\n";
      }
    }
    os << listing.size() << " identities\n";
    emit(os.str(), output);
  }
  return kExitPass;
}

int cmd_verify(const CommonOpts& o, const std::vector<std::string>& ids) {
  auto cfg = to_run_config(o, ids);
  auto outcome = qident::report::run_verify(cfg);
  if (cfg.format == "json")
    emit(outcome.json.dump(2), o.output);
  else if (cfg.format == "csv")
    emit(qident::report::render_csv(outcome.json), o.output);
  else
    emit(qident::report::render_text(outcome.json), o.output);
  return outcome.pass ? kExitPass : kExitVerifyFail;
}

// --param name=lo:hi:step or name=value
struct GridAxis {
  std::string name;
  std::vector<double> values;
};

GridAxis parse_axis(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("malformed --param \"" + spec + "\"");
  GridAxis ax;
  ax.name = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  auto c1 = rest.find(':');
  if (c1 == std::string::npos) {
    ax.values.push_back(std::stod(rest));
    return ax;
  }
  auto c2 = rest.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::invalid_argument("malformed --param \"" + spec + "\" (need lo:hi:step)");
  double lo = std::stod(rest.substr(0, c1));
  double hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
  double step = std::stod(rest.substr(c2 + 1));
  if (step <= 0 || hi < lo)
    throw std::invalid_argument("malformed --param range \"" + spec + "\"");
  for (double v = lo; v <= hi + 1e-12; v += step) ax.values.push_back(v);
  return ax;
}

int cmd_sweep(const CommonOpts& o, const std::string& id,
              const std::vector<std::string>& axis_specs) {
  const auto& rec = qident::ident::Registry::instance().find(id);
  std::vector<GridAxis> axes;
  for (const auto& s : axis_specs) axes.push_back(parse_axis(s));
  for (const auto& [pname, iv] : rec.params) {
    (void)iv;
    bool covered = false;
    for (const auto& ax : axes) covered = covered || ax.name == pname;
    if (!covered)
      throw std::invalid_argument("sweep: parameter \"" + pname + "\" not given");
  }
  double tol = o.tolerance.empty() ? rec.default_tolerance : std::stod(o.tolerance);
  PrecisionPolicy policy(o.precision_bits, tol * 1e-4);

  Json cells = Json::array();
  bool all_pass = true;
  std::string max_err = "0";
  Scalar max_rel(o.precision_bits);
  std::vector<size_t> idx(axes.size(), 0);
  bool done = axes.empty();
  long evaluated = 0, skipped = 0;
  while (!done) {
    ParamMap pt;
    for (size_t k = 0; k < axes.size(); ++k)
      pt.set(axes[k].name, Scalar::of(axes[k].values[idx[k]], 128));
    Json cell;
    Json par = Json::object();
    for (const auto& [name, value] : pt.items()) par[name] = value.str(10);
    cell["params"] = par;
    if (auto viol = rec.violated(pt)) {
      cell["status"] = "skip";
      cell["violates"] = *viol;
      ++skipped;
    } else {
      auto r = qident::ident::evaluate(id, pt, policy, tol, o.rhs_scale);
      cell["status"] = r.pass ? "pass" : "fail";
      cell["rel_error"] = r.rel_error.str(6);
      if (r.rel_error > max_rel) max_rel = r.rel_error;
      all_pass = all_pass && r.pass;
      ++evaluated;
    }
    cells.push_back(cell);
    // advance the odometer
    size_t k = 0;
    for (; k < axes.size(); ++k) {
      if (++idx[k] < axes[k].values.size()) break;
      idx[k] = 0;
    }
    done = (k == axes.size());
  }
  max_err = max_rel.str(6);

  Json root;
  root["identity"] = id;
  root["tolerance"] = tol;
  root["cells"] = cells;
  root["evaluated"] = evaluated;
  root["skipped"] = skipped;
  root["max_rel_error"] = max_err;
  root["pass"] = all_pass;

  if (o.format == "json") {
    emit(root.dump(2), o.output);
  } else if (o.format == "csv") {
    std::ostringstream os;
    os << "params,status,rel_error\r\n";
    for (const auto& c : cells) {
      std::string params;
      for (auto it = c.at("params").begin(); it != c.at("params").end(); ++it) {
        if (!params.empty()) params += ";";
        params += it.key() + "=" + it.value().get<std::string>();
      }
      os << "\"" << params << "\"," << c.at("status").get<std::string>() << ","
         << (c.contains("rel_error") ? c.at("rel_error").get<std::string>() : "")
         << "\r\n";
    }
    os << "\"max=" << max_err << "\"," << (all_pass ? "PASS" : "FAIL") << ",\r\n";
    emit(os.str(), o.output);
  } else {
    std::ostringstream os;
    for (const auto& c : cells) {
      os << c.at("params").dump() << "  " << c.at("status").get<std::string>();
      if (c.contains("rel_error")) os << "  rel_error " << c.at("rel_error").get<std::string>();
      os << "\n";
    }
    os << evaluated << " cells evaluated, " << skipped << " skipped, max rel error "
       << max_err << "\n"
       << (all_pass ? "PASS" : "FAIL") << "\n";
    emit(os.str(), o.output);
  }
  return all_pass ? kExitPass : kExitVerifyFail;
}

int cmd_limit(const CommonOpts& o, const std::string& pair_id,
              std::optional<int> j0, std::optional<int> j1, std::optional<int> order,
              const std::map<std::string, double>& point_flags, int n_samples) {
  const auto& spec = qident::limits::limit_pair(pair_id);
  qident::limits::LimitSchedule sched = spec.default_schedule;
  if (j0) sched.j0 = *j0;
  if (j1) sched.j1 = *j1;
  if (order) sched.order = *order;
  sched.validate();
  bool ratio_pair = spec.params.empty();
  double tol = o.tolerance.empty() ? (ratio_pair ? 1e-4 : 1e-6) : std::stod(o.tolerance);
  PrecisionPolicy base(o.precision_bits, 1e-16);

  std::vector<ParamMap> points;
  bool explicit_point = !point_flags.empty();
  if (explicit_point) {
    ParamMap pt;
    for (const auto& [name, iv] : spec.params) {
      (void)iv;
      auto it = point_flags.find(name);
      if (it == point_flags.end())
        throw std::invalid_argument("limit: missing --" + name + " for " + pair_id);
      pt.set(name, Scalar::of(it->second, 128));
    }
    points.push_back(pt);
  } else {
    int n = spec.params.empty() ? 1 : n_samples;
    for (int i = 0; i < n; ++i)
      points.push_back(qident::limits::sample_limit_point(
          pair_id, o.seed + static_cast<std::uint64_t>(i)));
  }

  Json runs = Json::array();
  bool all_pass = true;
  for (const auto& pt : points) {
    auto rep = qident::limits::check_limit_pair(pair_id, pt, sched, base, tol);
    Json e;
    Json par = Json::object();
    for (const auto& [name, value] : pt.items()) par[name] = value.str(17);
    e["point"] = par;
    if (rep.ratio_mode) {
      e["ratio_lhs"] = rep.ratio_lhs.str(20);
      e["ratio_lhs_error"] = rep.ratio_lhs_error.str(4);
      e["ratio_rhs"] = rep.ratio_rhs.str(20);
      e["ratio_rhs_error"] = rep.ratio_rhs_error.str(4);
      e["full_limit_lhs"] = rep.full_lhs.str(25);
      e["full_limit_rhs"] = rep.full_rhs.str(25);
      e["full_difference"] = rep.full_difference.str(4);
    } else {
      e["extrapolant"] = rep.limit_value.str(25);
      e["error_estimate"] = rep.limit_error.str(4);
      e["classical_value"] = rep.classical_value.str(25);
      e["difference"] = rep.difference.str(4);
    }
    e["pass"] = rep.pass;
    runs.push_back(e);
    all_pass = all_pass && rep.pass;
  }

  Json root;
  root["pair"] = pair_id;
  root["description"] = spec.description;
  root["schedule"] = {{"j0", sched.j0}, {"j1", sched.j1}, {"order", sched.order}};
  root["tolerance"] = tol;
  root["runs"] = runs;
  root["pass"] = all_pass;

  if (o.format == "json") {
    emit(root.dump(2), o.output);
  } else {
    std::ostringstream os;
    os << pair_id << ": " << spec.description << "\n";
    for (const auto& e : runs) {
      os << "  point " << e.at("point").dump() << "\n";
      if (e.contains("extrapolant")) {
        os << "    q->1 extrapolant  " << e.at("extrapolant").get<std::string>() << "\n"
           << "    classical value   " << e.at("classical_value").get<std::string>() << "\n"
           << "    error estimate    " << e.at("error_estimate").get<std::string>()
           << ", difference " << e.at("difference").get<std::string>() << "\n";
      } else {
        os << "    lhs scalar ratio  " << e.at("ratio_lhs").get<std::string>()
           << " (err " << e.at("ratio_lhs_error").get<std::string>() << ")\n"
           << "    rhs scalar ratio  " << e.at("ratio_rhs").get<std::string>()
           << " (err " << e.at("ratio_rhs_error").get<std::string>() << ")\n"
           << "    full limits       " << e.at("full_limit_lhs").get<std::string>()
           << " vs " << e.at("full_limit_rhs").get<std::string>() << "\n";
      }
      os << "    " << (e.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
    }
    emit(os.str(), o.output);
  }
  return all_pass ? kExitPass : kExitVerifyFail;
}

int cmd_certify(const CommonOpts& o, const std::string& proof_id, bool verbose,
                int n_samples) {
  using qident::abel::proof_catalog;
  std::vector<const qident::abel::ProofCase*> cases;
  if (proof_id == "all") {
    for (const auto& pc : proof_catalog()) cases.push_back(&pc);
  } else {
    cases.push_back(&qident::abel::proof_case(proof_id));
  }
  double tol = o.tolerance.empty() ? 1e-25 : std::stod(o.tolerance);
  Json root = Json::array();
  bool all_pass = true;
  for (const auto* pc : cases) {
    Json runs = Json::array();
    for (int i = 0; i < n_samples; ++i) {
      ParamMap pt = qident::abel::sample_proof_point(
          *pc, o.seed + static_cast<std::uint64_t>(i), 128);
      qident::qcore::QContext ctx(pc->base(pt).at_precision(o.precision_bits),
                                  PrecisionPolicy(o.precision_bits,
                                                  std::min(1e-31, tol * 1e-4)));
      auto pair = pc->make_pair(pt, ctx);
      auto rep = qident::abel::certify_transformation(
          pair, [&] { return pc->claimed(pt, ctx); }, ctx, tol);
      Json e;
      Json par = Json::object();
      for (const auto& [name, value] : pt.items()) par[name] = value.str(17);
      e["point"] = par;
      e["lhs"] = rep.lhs.str(25);
      e["rhs"] = rep.rhs.str(25);
      e["claimed"] = rep.claimed.str(25);
      e["dev_lhs_rhs"] = rep.dev_lhs_rhs.str(4);
      e["dev_lhs_claimed"] = rep.dev_lhs_claimed.str(4);
      e["dev_rhs_claimed"] = rep.dev_rhs_claimed.str(4);
      e["pass"] = rep.pass;
      if (verbose) {
        if (auto info = pc->vanishing(pt, ctx)) {
          e["a1"] = info->a1.str(20);
          e["a2"] = info->a2.str(20);
          e["t_star"] = info->t_star.str(20);
        }
      }
      runs.push_back(e);
      all_pass = all_pass && rep.pass;
    }
    Json entry;
    entry["proof"] = pc->id;
    entry["title"] = pc->title;
    entry["runs"] = runs;
    root.push_back(entry);
  }

  if (o.format == "json") {
    emit(root.dump(2), o.output);
  } else {
    std::ostringstream os;
    for (const auto& entry : root) {
      os << entry.at("proof").get<std::string>() << ": "
         << entry.at("title").get<std::string>() << "\n";
      for (const auto& e : entry.at("runs")) {
        os << "  " << (e.at("pass").get<bool>() ? "PASS" : "FAIL") << " point "
           << e.at("point").dump() << "\n    lhs=rhs dev "
           << e.at("dev_lhs_rhs").get<std::string>() << ", vs closed form "
           << e.at("dev_lhs_claimed").get<std::string>() << "\n";
        if (e.contains("a2"))
          os << "    a1 " << e.at("a1").get<std::string>() << ", a2 "
             << e.at("a2").get<std::string>() << ", t* "
             << e.at("t_star").get<std::string>() << "\n";
      }
    }
    emit(os.str(), o.output);
  }
  return all_pass ? kExitPass : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "arbitrary-precision verification of a catalog of classical and basic "
      "(q-)hypergeometric summation identities"};
  app.require_subcommand(1);

  // list
  auto* list = app.add_subcommand("list", "show the identity catalog");
  std::string list_id, list_format = "text", list_output;
  list->add_option("id", list_id, "restrict to one identity");
  list->add_option("--format", list_format, "text | json");
  list->add_option("--output", list_output, "write to file");

  // verify
  auto* verify = app.add_subcommand("verify", "sample parameter points and compare sides");
  CommonOpts vo;
  std::vector<std::string> verify_ids;
  verify->add_option("ids", verify_ids, "identity ids or 'all'")->required();
  add_common(verify, vo);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "relative-error table over a parameter grid");
  CommonOpts so;
  std::string sweep_id;
  std::vector<std::string> sweep_axes;
  sweep->add_option("id", sweep_id, "identity id")->required();
  sweep->add_option("--param", sweep_axes, "name=lo:hi:step or name=value")->required();
  add_common(sweep, so);

  // limit
  auto* limit = app.add_subcommand("limit", "q->1 limit check of a registered pair");
  CommonOpts lo;
  std::string limit_pair;
  std::optional<int> lj0, lj1, lorder;
  double la = 0, lb = 0, lc = 0, lce = 0;
  limit->add_option("pair", limit_pair, "pair id, e.g. G2:G1")->required();
  limit->add_option("--j0", lj0, "first schedule index");
  limit->add_option("--j1", lj1, "last schedule index");
  limit->add_option("--order", lorder, "Richardson order");
  auto* fa = limit->add_option("--a", la, "classical parameter a");
  auto* fb = limit->add_option("--b", lb, "classical parameter b");
  auto* fc = limit->add_option("--c", lc, "classical parameter c");
  auto* fce = limit->add_option("--ce", lce, "c = a+b+ce for the Gauss pair");
  add_common(limit, lo);

  // certify
  auto* certify = app.add_subcommand("certify", "three-way check of a proof transformation");
  CommonOpts co;
  co.samples = 10;
  std::string certify_id;
  bool certify_verbose = false;
  certify->add_option("proof", certify_id, "thm2.1 | thm2.2 | sec2.1 | variant1..3 | sec2.3 | all")
      ->required();
  certify->add_flag("--verbose", certify_verbose, "print a1, a2 and t*");
  add_common(certify, co);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (list->parsed()) {
      std::optional<std::string> only;
      if (!list_id.empty()) only = list_id;
      return cmd_list(only, list_format, list_output);
    }
    if (verify->parsed()) {
      merge_config(verify, vo);
      return cmd_verify(vo, verify_ids);
    }
    if (sweep->parsed()) {
      merge_config(sweep, so);
      return cmd_sweep(so, sweep_id, sweep_axes);
    }
    if (limit->parsed()) {
      merge_config(limit, lo);
      std::map<std::string, double> flags;
      if (fa->count()) flags["a"] = la;
      if (fb->count()) flags["b"] = lb;
      if (fc->count()) flags["c"] = lc;
      if (fce->count()) flags["ce"] = lce;
      int n_points = limit->count("--samples") ? lo.samples : 5;
      return cmd_limit(lo, limit_pair, lj0, lj1, lorder, flags, n_points);
    }
    if (certify->parsed()) {
      merge_config(certify, co);
      return cmd_certify(co, certify_id, certify_verbose, co.samples);
    }
  } catch (const qident::numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
