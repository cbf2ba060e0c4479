#include "smactl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "sma/bounds.hpp"
#include "sma/datadep.hpp"
#include "sma/errors.hpp"
#include "sma/mc.hpp"
#include "sma/neural.hpp"
#include "sma/verify.hpp"
#include "smactl/output.hpp"

namespace smactl {

namespace {

sma::mc::ExperimentConfig experiment_config(Settings& s) {
  sma::mc::ExperimentConfig cfg;
  cfg.allocator.kind = sma::mc::parse_allocator_kind(get_string(s, "allocator"));
  cfg.allocator.n = get_size(s, "n");
  cfg.allocator.p = get_double(s, "p");
  cfg.allocator.c1 = get_double(s, "c1");
  cfg.allocator.c2 = get_double(s, "c2");
  cfg.allocator.r_n = get_size(s, "rn");
  cfg.trials = get_size(s, "trials");
  cfg.master_seed = resolve_seed(s);
  cfg.threads = resolve_threads(s);
  cfg.density_grid = get_double_list(s, "densities");
  cfg.fresh_allocator = get_bool(s, "fresh");
  cfg.kappa = get_double(s, "kappa");
  if (has(s, "distances")) cfg.distance_grid = get_size_list(s, "distances");
  return cfg;
}

bool out_requested(const Settings& s) { return has(s, "out"); }

void finish_run(const std::string& command, const Settings& s, std::uint64_t seed, unsigned threads,
                const std::string& started, std::vector<OutputFile> outputs,
                std::vector<std::string> warnings) {
  Manifest m;
  m.command = command;
  m.config = s;
  m.seed = seed;
  m.threads = threads;
  m.started_at = started;
  m.finished_at = utc_timestamp();
  m.outputs = std::move(outputs);
  m.warnings = std::move(warnings);
  write_manifest(get_string(s, "out"), m);
}

std::vector<std::string> degenerate_warning(std::size_t trials, std::ostream& err) {
  if (trials > 1) return {};
  const std::string w = "trials = 1: standard errors are 0 and degenerate";
  err << "warning: " << w << "\n";
  return {w};
}

// --- bounds -----------------------------------------------------------------

using Report = sma::bounds::BoundReport;

void add_input(Report& r, const std::string& key, double value) { r.inputs.emplace_back(key, value); }
void add_extra(Report& r, const std::string& key, double value) { r.extras.emplace_back(key, value); }

Report theorem1(const Settings& s) {
  Report r;
  const double eps = get_double(s, "eps");
  const double slack = get_double(s, "slack");
  add_input(r, "eps", eps);
  add_input(r, "slack", slack);
  r.value = static_cast<double>(sma::bounds::capacity_from_pairwise_error(eps, slack));
  r.asserted = false;
  r.notes.push_back("capacity floor(slack / sqrt(eps)); slack stands in for the unspecified o(1) sequence");
  return r;
}

Report theorem2(const Settings& s) {
  Report r;
  const auto n = get_size(s, "n");
  const auto rn = get_size(s, "rn");
  const double delta = get_double(s, "delta");
  const double mu = get_double(s, "mu");
  const double lambda = get_double(s, "lambda");
  add_input(r, "n", static_cast<double>(n));
  add_input(r, "r_n", static_cast<double>(rn));
  add_input(r, "delta", delta);
  add_input(r, "mu", mu);
  add_input(r, "lambda", lambda);
  r.value = sma::bounds::error_prob_lower_bound(n, rn, delta, mu, lambda);
  r.log_domain = true;
  r.asserted = false;
  r.notes.push_back("main term of log epsilon_n; the Omega constant is unknown and not included");
  return r;
}

Report packing(const Settings& s, bool upper) {
  Report r;
  const auto n = get_size(s, "n");
  const auto rn = get_size(s, "rn");
  const auto b = get_size(s, "b");
  add_input(r, "n", static_cast<double>(n));
  add_input(r, "r_n", static_cast<double>(rn));
  add_input(r, "b_n", static_cast<double>(b));
  const double alpha = static_cast<double>(rn) / static_cast<double>(n);
  const double beta = static_cast<double>(b) / ((upper ? 4.0 : 2.0) * static_cast<double>(rn));
  r.log_domain = true;
  add_extra(r, "alpha", alpha);
  add_extra(r, "beta", beta);
  if (upper) {
    r.value = sma::bounds::capacity_upper_bound(n, rn, b);
    const double q = static_cast<double>(b) / 4.0;
    add_extra(r, "exact_packing_log_ratio",
              sma::bounds::log_binomial(static_cast<double>(n), static_cast<double>(rn)) -
                  sma::bounds::log_binomial(static_cast<double>(rn), q) -
                  sma::bounds::log_binomial(static_cast<double>(n - rn), q));
    r.notes.push_back("log K_n main term, o(1) n omitted; beta = B_n / (4 r_n)");
  } else {
    r.value = sma::bounds::datadep_capacity_lower(n, rn, b);
    r.notes.push_back("threshold on log |S_n| for the random-map construction; beta = B_n / (2 r_n)");
  }
  return r;
}

Report theorem5(const Settings& s) {
  Report r;
  sma::bounds::Theorem5Inputs in;
  in.n = get_size(s, "n");
  in.r_n = get_size(s, "rn");
  in.s0 = get_double(s, "s0");
  in.gamma = get_double(s, "gamma");
  in.epsilon = get_double(s, "eps");
  in.t = has(s, "t") ? get_double(s, "t") : 1.0;
  in.z0 = has(s, "z0") ? get_double(s, "z0") : 1.0;
  in.a = has(s, "a") ? get_double(s, "a") : 0.1;
  in.distance = has(s, "distance") ? get_size(s, "distance") : 1;
  in.log_base = has(s, "log-base") ? get_double(s, "log-base") : 0.0;
  add_input(r, "n", static_cast<double>(in.n));
  add_input(r, "r_n", static_cast<double>(in.r_n));
  add_input(r, "s0", in.s0);
  add_input(r, "gamma", in.gamma);
  add_input(r, "eps", in.epsilon);
  add_input(r, "t", in.t);
  add_input(r, "z0", in.z0);
  add_input(r, "a", in.a);
  add_input(r, "distance", static_cast<double>(in.distance));
  add_input(r, "log_base", in.log_base);
  const auto b = sma::bounds::theorem5_tail_bounds(in);
  r.value = b.stability;
  add_extra(r, "continuity", b.continuity);
  add_extra(r, "orthogonality", b.orthogonality);
  add_extra(r, "b", b.b);
  add_extra(r, "b1", b.b1);
  add_extra(r, "band_halfwidth", b.band_halfwidth);
  add_extra(r, "mu_n", b.mu_n);
  r.notes.push_back("value is the stability tail bound");
  r.notes.push_back("stability band read as two-sided with half-width log(n/r_n)/sqrt(s0 n^(1-gamma))");
  r.notes.push_back(in.log_base > 0.0 ? "log(n/r_n) and log n taken in the requested base"
                                      : "log(n/r_n) and log n taken as natural logarithms");
  return r;
}

Report lemma12(const Settings& s, int lemma) {
  Report r;
  const auto m = get_size(s, "m");
  const double p = get_double(s, "p");
  add_input(r, "m", static_cast<double>(m));
  add_input(r, "p", p);
  const auto atoms = sma::bounds::lemma1_exact(m, p);
  const auto b = sma::bounds::lemma12_bounds(m, p);
  if (lemma == 1) {
    r.value = atoms.p_zero;
    add_extra(r, "p_one", atoms.p_one);
    add_extra(r, "pr_positive", 0.5 * (1.0 - atoms.p_zero));
    add_extra(r, "gap_bound", b.stability_gap_bound);
    r.notes.push_back("value is the exact Pr{beta^T x = 0}; gap_bound bounds 1/2 - Pr{beta^T x > 0}");
  } else {
    r.value = sma::bounds::onebit_flip_exact(m, p);
    add_extra(r, "flip_bound", b.onebit_flip_bound);
    r.notes.push_back("value is the exact one-bit flip probability p (Pr{0} + Pr{1})");
  }
  return r;
}

Report lemma3(const Settings& s) {
  Report r;
  const auto wx = get_size(s, "wx");
  const auto wy = get_size(s, "wy");
  const auto wxy = get_size(s, "overlap");
  add_input(r, "wx", static_cast<double>(wx));
  add_input(r, "wy", static_cast<double>(wy));
  add_input(r, "overlap", static_cast<double>(wxy));
  const auto f = sma::bounds::lemma3_flip_prob(wx, wy, wxy);
  r.value = f.value;
  if (f.clamped) r.notes.push_back("correlation clamped to 1");
  return r;
}

Report lemma4(const Settings& s) {
  Report r;
  const double n = get_double(s, "n");
  const double c = get_double(s, "c");
  const double p = get_double(s, "p");
  const double eta = get_double(s, "eta");
  add_input(r, "n", n);
  add_input(r, "c", c);
  add_input(r, "p", p);
  add_input(r, "eta", eta);
  r.value = sma::bounds::lemma4_flip_prob(n, c, p, eta);
  add_extra(r, "variance", sma::bounds::sign_variance(c, p));
  r.notes.push_back("Gaussian approximation; poor when 2 p eta n is well below 1");
  return r;
}

Report network(const Settings& s) {
  Report r;
  const auto n = get_size(s, "n");
  const double p = get_double(s, "p");
  const auto rn = get_size(s, "rn");
  const double s0 = get_double(s, "s0");
  const double gamma = get_double(s, "gamma");
  const double z0 = has(s, "z0") ? get_double(s, "z0") : 1.0;
  add_input(r, "n", static_cast<double>(n));
  add_input(r, "p", p);
  add_input(r, "r_n", static_cast<double>(rn));
  add_input(r, "s0", s0);
  add_input(r, "gamma", gamma);
  add_input(r, "z0", z0);
  const auto net = sma::compute_network_params(n, p, rn, s0, gamma, z0);
  r.value = net.c2;
  add_extra(r, "s", net.s);
  add_extra(r, "mu_n", net.mu_n);
  r.notes.push_back("value is the output-layer threshold C2");
  return r;
}

Report make_report(const std::string& name, const Settings& s) {
  Report r;
  if (name == "theorem1") r = theorem1(s);
  else if (name == "theorem2") r = theorem2(s);
  else if (name == "theorem3") r = packing(s, true);
  else if (name == "theorem4") r = packing(s, false);
  else if (name == "theorem5") r = theorem5(s);
  else if (name == "lemma1") r = lemma12(s, 1);
  else if (name == "lemma2") r = lemma12(s, 2);
  else if (name == "lemma3") r = lemma3(s);
  else if (name == "lemma4") r = lemma4(s);
  else if (name == "network") r = network(s);
  else {
    throw sma::UsageError("unknown bound '" + name +
                          "' (expected theorem1..theorem5, lemma1..lemma4 or network)");
  }
  r.name = name;
  return r;
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << "bound: " << r.name << "\n";
  for (const auto& [k, v] : r.inputs) out << "input." << k << ": " << format_double(v) << "\n";
  out << "value: " << format_double(r.value) << "\n";
  out << "log_domain: " << (r.log_domain ? "yes" : "no") << "\n";
  out << "asserted: " << (r.asserted ? "yes" : "no") << "\n";
  for (const auto& [k, v] : r.extras) out << k << ": " << format_double(v) << "\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  return out.str();
}

std::string render_json(const Report& r) {
  nlohmann::ordered_json doc;
  doc["bound"] = r.name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  doc["inputs"] = inputs;
  doc["value"] = r.value;
  doc["log_domain"] = r.log_domain;
  doc["asserted"] = r.asserted;
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  doc["extras"] = extras;
  doc["notes"] = r.notes;
  return doc.dump(2) + "\n";
}

std::string render_rows(const std::vector<sma::verify::CheckRow>& rows) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-52s %14s %14s %12s  %s\n", "check", "empirical", "analytic",
                "tolerance", "verdict");
  out << line;
  std::size_t passed = 0;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-52s %14.6g %14.6g %12.4g  %s", r.name.c_str(), r.empirical,
                  r.analytic, r.tolerance, r.pass ? "PASS" : "FAIL");
    out << line;
    if (!r.note.empty()) out << "  " << r.note;
    out << "\n";
    passed += r.pass ? 1 : 0;
  }
  out << passed << " of " << rows.size() << " checks passed\n";
  return out.str();
}

}  // namespace

Settings command_defaults(const std::string& command) {
  Settings s = default_settings();
  if (command == "bounds" || command == "verify" || command == "datadep") {
    s.erase("out");
    s.erase("trials");
  }
  if (command == "datadep") {
    s["n"] = "200";
    s["rn"] = "20";
    s["b"] = "10";
    s["items"] = "16";
    s["attempts"] = "10000";
    s["density"] = "0.5";
  }
  return s;
}

int cmd_stability(Settings s, CommandIo io) {
  const auto started = utc_timestamp();
  const auto cfg = experiment_config(s);
  const auto rows = sma::mc::stability_curve(cfg);
  std::string csv = "input_density,layer2_mean,layer2_se,output_mean,output_se,trials\n";
  for (const auto& r : rows) {
    csv += format_double(r.input_density) + "," + format_double(r.layer2.mean) + "," +
           format_double(r.layer2.std_error) + "," + format_double(r.output.mean) + "," +
           format_double(r.output.std_error) + "," + std::to_string(r.output.count) + "\n";
  }
  auto warnings = degenerate_warning(cfg.trials, io.err);
  auto file = write_output(get_string(s, "out"), "stability.csv", csv);
  io.out << "wrote " << (std::filesystem::path(get_string(s, "out")) / file.name).string() << " ("
         << rows.size() << " rows)\n";
  finish_run("stability", s, cfg.master_seed, cfg.threads, started, {file}, std::move(warnings));
  return 0;
}

int cmd_expansion(Settings s, CommandIo io) {
  const auto started = utc_timestamp();
  const auto cfg = experiment_config(s);
  const auto rows = sma::mc::expansion_curve(cfg);
  std::string csv = "input_density,L,expansion_mean,expansion_se,trials\n";
  for (const auto& r : rows) {
    csv += format_double(r.input_density) + "," + std::to_string(r.distance) + "," +
           format_double(r.expansion.mean) + "," + format_double(r.expansion.std_error) + "," +
           std::to_string(r.expansion.count) + "\n";
  }
  auto warnings = degenerate_warning(cfg.trials, io.err);
  auto file = write_output(get_string(s, "out"), "expansion.csv", csv);
  io.out << "wrote " << (std::filesystem::path(get_string(s, "out")) / file.name).string() << " ("
         << rows.size() << " rows)\n";
  finish_run("expansion", s, cfg.master_seed, cfg.threads, started, {file}, std::move(warnings));
  return 0;
}

int cmd_bounds(const std::string& name, Settings s, bool json, CommandIo io) {
  const auto started = utc_timestamp();
  s["name"] = name;
  const auto report = make_report(name, s);
  const std::string text = json ? render_json(report) : render_text(report);
  io.out << text;
  if (out_requested(s)) {
    auto file = write_output(get_string(s, "out"), "bounds-" + name + (json ? ".json" : ".txt"), text);
    finish_run("bounds", s, 0, 1, started, {file}, {});
  }
  return 0;
}

int cmd_verify(const std::string& suite, Settings s, CommandIo io) {
  const auto started = utc_timestamp();
  s["suite"] = suite;
  sma::verify::VerifyOptions opts;
  if (has(s, "trials")) opts.trials = get_size(s, "trials");
  opts.seed = resolve_seed(s);
  opts.threads = resolve_threads(s);
  const auto rows = sma::verify::run_suite(suite, opts);
  const std::string text = render_rows(rows);
  io.out << text;
  if (out_requested(s)) {
    auto file = write_output(get_string(s, "out"), "verify-" + suite + ".txt", text);
    finish_run("verify", s, opts.seed, opts.threads, started, {file}, {});
  }
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
  return ok ? 0 : 1;
}

int cmd_datadep(Settings s, CommandIo io) {
  const auto started = utc_timestamp();
  const auto n = get_size(s, "n");
  const auto rn = get_size(s, "rn");
  const auto b = get_size(s, "b");
  const auto count = get_size(s, "items");
  const auto attempts = get_size(s, "attempts");
  const double density = get_double(s, "density");
  const auto seed = resolve_seed(s);
  const sma::SeedPath root(seed);

  std::vector<sma::BitVector> items;
  for (std::size_t i = 0; i < count; ++i) {
    items.push_back(sma::random_bitvector(n, density, root.child("item", i)));
  }
  const sma::InputSet set(n, std::move(items));
  const auto result = sma::search_orthogonal_map(set, rn, b, attempts, root.child("search"));

  std::ostringstream out;
  out << "n: " << n << "\n";
  out << "r_n: " << rn << "\n";
  out << "b_n: " << b << "\n";
  out << "items: " << set.size() << "\n";
  out << "min_input_distance: " << set.min_pairwise_distance() << "\n";
  out << "success: " << (result.success ? "yes" : "no") << "\n";
  out << "placed: " << result.placed << "\n";
  out << "attempts_used: " << result.map.attempts_used << "\n";
  if (result.success) {
    const auto check = sma::verify_map(result.map, set, rn, b);
    out << "verified: " << (check.ok ? "yes" : "no") << "\n";
    out << "violations: " << check.violations.size() << "\n";
  }
  out << "log_items: " << format_double(std::log(static_cast<double>(set.size()))) << "\n";
  try {
    out << "datadep_threshold: " << format_double(sma::bounds::datadep_capacity_lower(n, rn, b)) << "\n";
  } catch (const sma::UsageError& e) {
    out << "datadep_threshold: undefined (" << e.what() << ")\n";
  }
  if (set.size() > 1) {
    out << "lipschitz_constant: "
        << format_double(sma::extension_lipschitz_constant(rn, set.min_pairwise_distance())) << "\n";
  }
  out << "note: Lipschitz constant 8 r_n / A_n with A_n the minimum input distance; the extension to the whole cube is not constructed\n";
  const std::string text = out.str();
  io.out << text;
  if (out_requested(s)) {
    auto file = write_output(get_string(s, "out"), "datadep.txt", text);
    finish_run("datadep", s, seed, 1, started, {file}, {});
  }
  return result.success ? 0 : 1;
}

}  // namespace smactl
