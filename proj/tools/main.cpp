#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "rllink/csv.hpp"
#include "rllink/errors.hpp"
#include "rllink/iid_analysis.hpp"
#include "rllink/optimize.hpp"
#include "rllink/renewal_analysis.hpp"
#include "rllink/rll.hpp"
#include "rllink/simulate.hpp"
#include "rllink/version.hpp"

namespace {

using namespace rllink;

struct GlobalOpts {
  uint64_t seed = 1;
  std::string out_dir;
  bool verbose = false;
};

CodeType parse_code_type(const std::string& s) {
  if (s == "type0") return CodeType::type0;
  if (s == "type1") return CodeType::type1;
  throw ValidationError("code type must be 'type0' or 'type1', got '" + s + "'");
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ValidationError("empty entry in list '" + s + "'");
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw ValidationError("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

// Tie groups: ';' separates groups, entries are indices or a-b ranges,
// e.g. "0;1;2;3-8;9".
std::vector<std::vector<int>> parse_ties(const std::string& s) {
  std::vector<std::vector<int>> ties;
  std::stringstream groups(s);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<int> idx;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      if (item.empty()) throw ValidationError("empty tie entry in '" + s + "'");
      auto dash = item.find('-');
      if (dash == std::string::npos) {
        idx.push_back(std::stoi(item));
      } else {
        int a = std::stoi(item.substr(0, dash));
        int b = std::stoi(item.substr(dash + 1));
        if (b < a) throw ValidationError("descending tie range '" + item + "'");
        for (int i = a; i <= b; ++i) idx.push_back(i);
      }
    }
    if (idx.empty()) throw ValidationError("empty tie group in '" + s + "'");
    ties.push_back(std::move(idx));
  }
  return ties;
}

// Family token for custom sweeps: "iid" or "type0:d:k[:ties]".
SweepFamily parse_family_token(const std::string& token) {
  SweepFamily fam;
  fam.label = token;
  if (token == "iid") {
    fam.family = IidFamily{};
    return fam;
  }
  std::vector<std::string> parts;
  std::stringstream ss(token);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() < 3 || parts.size() > 4)
    throw ValidationError("family token '" + token + "' is not 'iid' or 'type:d:k[:ties]'");
  RllFamily rll;
  rll.spec.type = parse_code_type(parts[0]);
  rll.spec.d = std::stoi(parts[1]);
  rll.spec.k = std::stoi(parts[2]);
  if (parts.size() == 4) rll.ties = parse_ties(parts[3]);
  rll.check();
  fam.family = rll;
  return fam;
}

std::vector<uint8_t> parse_bits(const std::string& s) {
  std::vector<uint8_t> bits;
  for (char c : s) {
    if (c == '0') bits.push_back(0);
    else if (c == '1') bits.push_back(1);
    else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    else throw ValidationError(std::string("sequence contains non-binary character '") + c + "'");
  }
  return bits;
}

// Rejects malformed config lines up front so errors carry file:line context.
void preflight_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw NumericError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = line;
    while (!t.empty() && (t.back() == '\r' || t.back() == ' ' || t.back() == '\t')) t.pop_back();
    size_t start = t.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    t = t.substr(start);
    if (t[0] == '#' || t[0] == ';') continue;
    if (t[0] == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw NumericError(path + ":" + std::to_string(lineno) + ": malformed section header '" +
                           t + "'");
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw NumericError(path + ":" + std::to_string(lineno) +
                         ": expected key=value, got '" + t + "'");
  }
}

struct OutputTarget {
  std::string path;  // empty: stdout

  bool to_file() const { return !path.empty(); }
};

OutputTarget resolve_out(const std::string& out, const GlobalOpts& g) {
  if (out.empty()) return {};
  std::filesystem::path p(out);
  if (p.is_relative() && !g.out_dir.empty()) p = std::filesystem::path(g.out_dir) / p;
  return {p.string()};
}

std::string header_comment(uint64_t config_hash, uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "rllink %s config=%016llx seed=%llu", RLLINK_VERSION,
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  return buf;
}

void write_meta(const OutputTarget& target, const std::string& header,
                const std::string& config_text) {
  if (!target.to_file()) return;
  std::ofstream os(target.path + ".meta", std::ios::binary);
  if (!os) throw NumericError("cannot open '" + target.path + ".meta' for writing");
  os << "# " << header << "\n" << config_text;
}

void emit_table(const Table& table, const OutputTarget& target, const std::string& header,
                const std::string& config_text) {
  if (target.to_file()) {
    write_table_file(target.path, table, {header});
    write_meta(target, header, config_text);
  } else {
    write_table(std::cout, table, {header});
  }
}

// Usage flags shared by several subcommands: either --q (i.i.d. demand
// probability) or the full --q0/--q1 pair.
struct UsageFlags {
  double q = 0.5;
  double q0 = -1.0, q1 = -1.0;

  UsageModel build() const {
    if ((q0 < 0.0) != (q1 < 0.0)) throw ValidationError("give both --q0 and --q1, or neither");
    if (q0 >= 0.0) return UsageModel{q0, q1};
    return UsageModel{1.0 - q, q};
  }
};

void add_usage_flags(CLI::App* cmd, UsageFlags& u) {
  auto* q = cmd->add_option("--q", u.q, "i.i.d. demand probability P(z=1)")
                ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--q0", u.q0, "stay probability of demand state 0")
      ->check(CLI::Range(0.0, 1.0))
      ->excludes(q);
  cmd->add_option("--q1", u.q1, "stay probability of demand state 1")
      ->check(CLI::Range(0.0, 1.0))
      ->excludes(q);
}

struct CapacityArgs {
  std::string type = "type0";
  int d = 0, k = 1;
};

int run_capacity(const CapacityArgs& a, const std::string& header) {
  RllSpec spec{parse_code_type(a.type), a.d, a.k};
  CapacityResult cap = capacity_analysis(spec);
  std::cout << "# " << header << "\n";
  std::cout << "capacity=" << fmt_g12(cap.capacity) << "\n";
  std::cout << "lambda=" << fmt_g12(cap.spectral_radius) << "\n";
  std::cout << "degenerate=" << (cap.degenerate ? 1 : 0) << "\n";
  std::cout << "maxentropic=";
  for (int i = 0; i < cap.maxentropic.size(); ++i)
    std::cout << (i ? "," : "") << fmt_g12(cap.maxentropic.probs[i]);
  std::cout << "\n";
  return 0;
}

struct RateArgs {
  std::string type = "type0";
  int d = 0, k = 1;
  double p10 = 0.0;
  double py = -1.0;
  std::string probs;
};

int run_rate(const RateArgs& a, const std::string& header) {
  double rate;
  if (a.py >= 0.0) {
    rate = rate_iid(a.py, a.p10);
  } else {
    if (a.probs.empty() && a.k != a.d)
      throw ValidationError("constrained rate needs --probs (or use --py for the i.i.d. rate)");
    RllSpec spec{parse_code_type(a.type), a.d, a.k};
    EdgeProbs probs;
    if (!a.probs.empty()) probs.probs = parse_double_list(a.probs);
    rate = rate_constrained(spec, probs, a.p10);
  }
  std::cout << "# " << header << "\n";
  std::cout << "rate=" << fmt_g12(rate) << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string family = "iid";
  std::string type = "type0";
  int d = 0, k = 1;
  std::string probs;
  double px = -1.0, py = -1.0;
  double p10 = 0.0;
  int b_max = 2;
  UsageFlags usage;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a, const GlobalOpts& g, const std::string& header,
                const std::string& config_text) {
  UsageModel usage = a.usage.build();
  Table table;
  if (a.family == "iid") {
    double p_y;
    if (a.py >= 0.0 && a.px >= 0.0) throw ValidationError("give --px or --py, not both");
    if (a.py >= 0.0) p_y = a.py;
    else if (a.px >= 0.0) p_y = a.px * (1.0 - a.p10);
    else throw ValidationError("analyze --family iid needs --px or --py");
    double rate = rate_iid(p_y, a.p10);
    OfUf ou = of_uf_markov_usage(p_y, usage, a.b_max);
    table.header = {"p_y", "q0", "q1", "B_max", "rate", "p_of", "p_uf"};
    table.rows.push_back({fmt_g12(p_y), fmt_g12(usage.q0), fmt_g12(usage.q1),
                          std::to_string(a.b_max), fmt_g12(rate), fmt_g12(ou.p_of),
                          fmt_g12(ou.p_uf)});
  } else if (a.family == "rll") {
    if (!usage.is_iid())
      throw ValidationError(
          "constrained analytics cover i.i.d. demands only (q0 = 1-q1); use the simulate "
          "subcommand for the two-state demand chain");
    RllSpec spec{parse_code_type(a.type), a.d, a.k};
    EdgeProbs probs;
    if (!a.probs.empty()) probs.probs = parse_double_list(a.probs);
    EnergyTriple t = triple_constrained(spec, probs, Channel{a.p10}, usage.q1, a.b_max);
    table.header = {"type", "d", "k"};
    for (int j = spec.d; j < spec.k; ++j) table.header.push_back("p" + std::to_string(j));
    for (const char* c : {"p10", "q0", "q1", "B_max", "rate", "p_of", "p_uf", "source"})
      table.header.push_back(c);
    std::vector<std::string> row = {a.type, std::to_string(a.d), std::to_string(a.k)};
    for (double p : probs.probs) row.push_back(fmt_g12(p));
    row.insert(row.end(), {fmt_g12(a.p10), fmt_g12(usage.q0), fmt_g12(usage.q1),
                           std::to_string(a.b_max), fmt_g12(t.rate), fmt_g12(t.p_of),
                           fmt_g12(t.p_uf), "analytic"});
    table.rows.push_back(std::move(row));
  } else {
    throw ValidationError("family must be 'iid' or 'rll'");
  }
  emit_table(table, resolve_out(a.out, g), header, config_text);
  return 0;
}

struct OptKnobs {
  int starts = 8;
  double eps = 1e-3;
  double coord_tol = 1e-3;
  int passes = 8;
  std::int64_t sim_steps = 1'000'000;
  std::int64_t sim_burn_in = 10'000;
  int sim_reps = 2;

  OptOptions build(uint64_t seed) const {
    OptOptions o;
    o.starts = starts;
    o.eps = eps;
    o.coord_tol = coord_tol;
    o.max_passes = passes;
    o.sim_steps = sim_steps;
    o.sim_burn_in = sim_burn_in;
    o.sim_reps = sim_reps;
    o.seed = seed;
    return o;
  }
};

void add_opt_knobs(CLI::App* cmd, OptKnobs& k) {
  cmd->add_option("--starts", k.starts, "optimizer starts (multi-start coordinate descent)");
  cmd->add_option("--eps", k.eps, "parameter box margin");
  cmd->add_option("--coord-tol", k.coord_tol, "per-coordinate search tolerance");
  cmd->add_option("--passes", k.passes, "max coordinate passes");
  cmd->add_option("--sim-steps", k.sim_steps, "steps per simulated objective evaluation");
  cmd->add_option("--sim-burn-in", k.sim_burn_in, "burn-in for simulated evaluations");
  cmd->add_option("--sim-reps", k.sim_reps, "replications per simulated evaluation");
}

struct OptimizeArgs {
  std::string family = "iid";
  std::string type = "type0";
  int d = 0, k = 1;
  std::string ties;
  double rate_min = 0.1;
  double p10 = 0.0;
  int b_max = 2;
  UsageFlags usage;
  OptKnobs knobs;
};

int run_optimize(const OptimizeArgs& a, const GlobalOpts& g, const std::string& header) {
  LinkEnv env;
  env.ch = Channel{a.p10};
  env.usage = a.usage.build();
  env.b_max = a.b_max;
  env.rate_min = a.rate_min;

  OptResult res;
  if (a.family == "iid") {
    res = optimize_iid(env, a.knobs.build(g.seed));
  } else if (a.family == "rll") {
    RllFamily fam;
    fam.spec = RllSpec{parse_code_type(a.type), a.d, a.k};
    if (!a.ties.empty()) fam.ties = parse_ties(a.ties);
    res = optimize_constrained(env, fam, a.knobs.build(g.seed));
  } else {
    throw ValidationError("family must be 'iid' or 'rll'");
  }

  std::cout << "# " << header << "\n";
  std::cout << "feasible=" << (res.feasible ? 1 : 0) << "\n";
  if (!res.feasible) {
    std::cout << "message=" << res.message << "\n";
    return 1;
  }
  std::cout << "objective=" << fmt_g12(res.objective) << "\n";
  std::cout << "rate=" << fmt_g12(res.triple.rate) << "\n";
  std::cout << "p_of=" << fmt_g12(res.triple.p_of) << "\n";
  std::cout << "p_uf=" << fmt_g12(res.triple.p_uf) << "\n";
  std::cout << "params=";
  for (size_t i = 0; i < res.params.size(); ++i)
    std::cout << (i ? "," : "") << fmt_g12(res.params[i]);
  std::cout << "\n";
  std::cout << "source=" << res.source << "\n";
  std::cout << "evaluations=" << res.evaluations << "\n";
  return 0;
}

struct SimulateArgs {
  std::string family = "iid";
  std::string type = "type0";
  int d = 0, k = 1;
  std::string probs;
  double px = 0.5;
  double p10 = 0.0;
  int b_max = 2;
  UsageFlags usage;
  std::int64_t steps = 1'000'000;
  std::int64_t burn_in = 10'000;
  int reps = 10;
  int battery_start = -1;
  int usage_start = 0;
  int code_start = -1;
  std::int64_t trace = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& a, const GlobalOpts& g, const std::string& header,
                 const std::string& config_text) {
  CodeSource source;
  if (a.family == "iid") {
    source = IidSource{a.px};
  } else if (a.family == "rll") {
    RllSource rll;
    rll.spec = RllSpec{parse_code_type(a.type), a.d, a.k};
    if (!a.probs.empty()) rll.probs.probs = parse_double_list(a.probs);
    source = rll;
  } else {
    throw ValidationError("family must be 'iid' or 'rll'");
  }

  SimConfig cfg;
  cfg.seed = g.seed;
  cfg.steps = a.steps;
  cfg.burn_in = a.burn_in;
  cfg.reps = a.reps;
  cfg.b_max = a.b_max;
  cfg.battery_start = a.battery_start;
  cfg.usage_start = a.usage_start;
  cfg.code_start = a.code_start;

  Channel ch{a.p10};
  UsageModel usage = a.usage.build();
  OutputTarget target = resolve_out(a.out, g);

  if (a.trace > 0) {
    auto records = simulate_trace(source, ch, usage, cfg, a.trace);
    Table table;
    table.header = {"i", "x", "y", "z", "b", "overflow", "underflow"};
    for (const auto& r : records)
      table.rows.push_back({std::to_string(r.i), std::to_string(r.x), std::to_string(r.y),
                            std::to_string(r.z), std::to_string(r.battery),
                            std::to_string(r.overflow ? 1 : 0),
                            std::to_string(r.underflow ? 1 : 0)});
    int b0 = cfg.battery_start >= 0 ? cfg.battery_start : cfg.b_max / 2;
    std::string note = "trace start: battery=" + std::to_string(b0) +
                       " usage=U" + std::to_string(cfg.usage_start);
    if (target.to_file()) {
      write_table_file(target.path, table, {header, note});
      write_meta(target, header, config_text);
    } else {
      write_table(std::cout, table, {header, note});
    }
    return 0;
  }

  SimEstimate est = simulate(source, ch, usage, cfg);
  Table table;
  table.header = {"p_of", "p_uf", "se_of", "se_uf", "n", "reps", "seed"};
  table.rows.push_back({fmt_g12(est.p_of), fmt_g12(est.p_uf), fmt_g12(est.se_of),
                        fmt_g12(est.se_uf), std::to_string(est.steps_per_rep),
                        std::to_string(est.reps), std::to_string(est.seed)});
  emit_table(table, target, header, config_text);
  return 0;
}

struct SweepArgs {
  std::string preset;
  std::string axis;
  std::string values;
  std::vector<std::string> families;
  double rate_min = 0.1;
  double p10 = 0.0;
  int b_max = 2;
  UsageFlags usage;
  int threads = std::max(1u, std::thread::hardware_concurrency());
  OptKnobs knobs;
  std::string out;
};

int run_sweep_cmd(const SweepArgs& a, const GlobalOpts& g, const std::string& header,
                  const std::string& config_text) {
  SweepSpec spec;
  if (!a.preset.empty()) {
    spec = sweep_preset(a.preset);
  } else {
    if (a.axis.empty() || a.values.empty() || a.families.empty())
      throw ValidationError("custom sweep needs --axis, --values, and at least one --family");
    if (a.axis == "q0") spec.axis = SweepAxis::q0;
    else if (a.axis == "R") spec.axis = SweepAxis::rate;
    else if (a.axis == "p10") spec.axis = SweepAxis::p10;
    else throw ValidationError("axis must be one of q0, R, p10");
    spec.name = "custom";
    spec.values = parse_double_list(a.values);
    std::sort(spec.values.begin(), spec.values.end());
    spec.base.ch = Channel{a.p10};
    spec.base.usage = a.usage.build();
    spec.base.b_max = a.b_max;
    spec.base.rate_min = a.rate_min;
    for (const auto& token : a.families) spec.families.push_back(parse_family_token(token));
  }

  auto rows = run_sweep(spec, a.knobs.build(g.seed), a.threads);

  Table table;
  table.header = {"family", "axis", "value", "rate", "p_of", "p_uf", "objective", "source"};
  for (const auto& row : rows) {
    const OptResult& r = row.result;
    table.rows.push_back({row.family, row.axis, fmt_g12(row.value), fmt_g12(r.triple.rate),
                          fmt_g12(r.triple.p_of), fmt_g12(r.triple.p_uf), fmt_g12(r.objective),
                          r.feasible ? r.source : "infeasible"});
    if (!r.feasible) {
      auto& cells = table.rows.back();
      cells[3] = cells[4] = cells[5] = cells[6] = "nan";
    }
  }
  emit_table(table, resolve_out(a.out, g), header, config_text);
  return 0;
}

struct ValidateArgs {
  std::string type = "type0";
  int d = 0, k = 1;
  std::string bits;
  std::string file;
};

int run_validate(const ValidateArgs& a, const std::string& header) {
  std::string text = a.bits;
  if (!a.file.empty()) {
    std::ifstream is(a.file);
    if (!is) throw NumericError("cannot open '" + a.file + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  RllSpec spec{parse_code_type(a.type), a.d, a.k};
  TraceResult res = validate_and_trace(spec, parse_bits(text));
  std::cout << "# " << header << "\n";
  if (res.valid) {
    std::cout << "valid" << "\n" << "states=";
    for (size_t i = 0; i < res.states.size(); ++i)
      std::cout << (i ? "," : "") << res.states[i];
    std::cout << "\n";
    return 0;
  }
  std::cout << "invalid: " << res.reason << " at index " << res.failure_index << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytics, optimization, and simulation for energy-carrying binary links"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", RLLINK_VERSION);

  GlobalOpts global;
  const char* env_dir = std::getenv("RLLINK_OUT_DIR");
  if (env_dir) global.out_dir = env_dir;
  app.add_option("--seed", global.seed, "master seed");
  app.add_option("--out-dir", global.out_dir,
                 "directory for relative --out paths (env RLLINK_OUT_DIR)");
  app.add_flag("--verbose", global.verbose, "chatty progress notes on stderr");
  app.set_config("--config", "", "key=value config file with [subcommand] sections");

  CapacityArgs cap_args;
  auto* cap_cmd = app.add_subcommand("capacity", "constraint capacity and maxentropic probabilities");
  cap_cmd->add_option("--type", cap_args.type, "type0 | type1");
  cap_cmd->add_option("--d", cap_args.d, "minimum interior run")->required();
  cap_cmd->add_option("--k", cap_args.k, "maximum run")->required();

  RateArgs rate_args;
  auto* rate_cmd = app.add_subcommand("rate", "information rate of an i.i.d. or constrained code");
  rate_cmd->add_option("--type", rate_args.type, "type0 | type1");
  rate_cmd->add_option("--d", rate_args.d, "minimum interior run");
  rate_cmd->add_option("--k", rate_args.k, "maximum run");
  rate_cmd->add_option("--probs", rate_args.probs, "edge probabilities p_d..p_{k-1}");
  rate_cmd->add_option("--py", rate_args.py, "received-energy rate for the i.i.d. code")
      ->check(CLI::Range(0.0, 1.0));
  rate_cmd->add_option("--p10", rate_args.p10, "energy loss probability")
      ->check(CLI::Range(0.0, 1.0));

  AnalyzeArgs an_args;
  auto* an_cmd = app.add_subcommand("analyze", "closed-form rate and event probabilities");
  an_cmd->add_option("--family", an_args.family, "iid | rll");
  an_cmd->add_option("--type", an_args.type, "type0 | type1");
  an_cmd->add_option("--d", an_args.d, "minimum interior run");
  an_cmd->add_option("--k", an_args.k, "maximum run");
  an_cmd->add_option("--probs", an_args.probs, "edge probabilities p_d..p_{k-1}");
  an_cmd->add_option("--px", an_args.px, "transmit on-probability")->check(CLI::Range(0.0, 1.0));
  an_cmd->add_option("--py", an_args.py, "received-energy rate")->check(CLI::Range(0.0, 1.0));
  an_cmd->add_option("--p10", an_args.p10, "energy loss probability")
      ->check(CLI::Range(0.0, 1.0));
  an_cmd->add_option("--b-max", an_args.b_max, "battery capacity");
  add_usage_flags(an_cmd, an_args.usage);
  an_cmd->add_option("--out", an_args.out, "write CSV here instead of stdout");

  OptimizeArgs opt_args;
  auto* opt_cmd = app.add_subcommand("optimize", "minimize max(p_of, p_uf) under a rate target");
  opt_cmd->add_option("--family", opt_args.family, "iid | rll");
  opt_cmd->add_option("--type", opt_args.type, "type0 | type1");
  opt_cmd->add_option("--d", opt_args.d, "minimum interior run");
  opt_cmd->add_option("--k", opt_args.k, "maximum run");
  opt_cmd->add_option("--ties", opt_args.ties, "tie groups over edge indices, e.g. 0;1;2;3-8;9");
  opt_cmd->add_option("--rate-min", opt_args.rate_min, "rate target")->required();
  opt_cmd->add_option("--p10", opt_args.p10, "energy loss probability")
      ->check(CLI::Range(0.0, 1.0));
  opt_cmd->add_option("--b-max", opt_args.b_max, "battery capacity");
  add_usage_flags(opt_cmd, opt_args.usage);
  add_opt_knobs(opt_cmd, opt_args.knobs);

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo event probabilities");
  sim_cmd->add_option("--family", sim_args.family, "iid | rll");
  sim_cmd->add_option("--type", sim_args.type, "type0 | type1");
  sim_cmd->add_option("--d", sim_args.d, "minimum interior run");
  sim_cmd->add_option("--k", sim_args.k, "maximum run");
  sim_cmd->add_option("--probs", sim_args.probs, "edge probabilities p_d..p_{k-1}");
  sim_cmd->add_option("--px", sim_args.px, "transmit on-probability")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--p10", sim_args.p10, "energy loss probability")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--b-max", sim_args.b_max, "battery capacity");
  add_usage_flags(sim_cmd, sim_args.usage);
  sim_cmd->add_option("--steps", sim_args.steps, "counted steps per replication");
  sim_cmd->add_option("--burn-in", sim_args.burn_in, "discarded warmup steps");
  sim_cmd->add_option("--reps", sim_args.reps, "replications");
  sim_cmd->add_option("--battery-start", sim_args.battery_start, "initial level (-1: B_max/2)");
  sim_cmd->add_option("--usage-start", sim_args.usage_start, "initial demand state (0 or 1)");
  sim_cmd->add_option("--code-start", sim_args.code_start, "initial code state (-1: stationary)");
  sim_cmd->add_option("--trace", sim_args.trace, "dump the first N slots instead of estimating");
  sim_cmd->add_option("--out", sim_args.out, "write CSV here instead of stdout");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "optimize families across an axis; emits CSV");
  sweep_cmd->add_option("--preset", sweep_args.preset, "fig12 | fig13 | fig14");
  sweep_cmd->add_option("--axis", sweep_args.axis, "q0 | R | p10 (custom sweeps)");
  sweep_cmd->add_option("--values", sweep_args.values, "comma-separated axis values");
  sweep_cmd->add_option("--family", sweep_args.families,
                        "repeatable; 'iid' or 'type0:d:k[:ties]'");
  sweep_cmd->add_option("--rate-min", sweep_args.rate_min, "rate target (custom sweeps)");
  sweep_cmd->add_option("--p10", sweep_args.p10, "energy loss probability (custom sweeps)")
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--b-max", sweep_args.b_max, "battery capacity (custom sweeps)");
  add_usage_flags(sweep_cmd, sweep_args.usage);
  sweep_cmd->add_option("--threads", sweep_args.threads, "parallel sweep workers");
  add_opt_knobs(sweep_cmd, sweep_args.knobs);
  sweep_cmd->add_option("--out", sweep_args.out, "write CSV here instead of stdout");

  ValidateArgs val_args;
  auto* val_cmd = app.add_subcommand("validate", "check one sequence against a constraint");
  val_cmd->add_option("--type", val_args.type, "type0 | type1");
  val_cmd->add_option("--d", val_args.d, "minimum interior run")->required();
  val_cmd->add_option("--k", val_args.k, "maximum run")->required();
  val_cmd->add_option("--bits", val_args.bits, "ASCII 0/1 sequence");
  val_cmd->add_option("--file", val_args.file, "file holding the sequence");

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  try {
    // Surface config syntax problems with file:line context before parsing.
    for (int i = 1; i < argc; ++i) {
      std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) preflight_config(argv[i + 1]);
      else if (arg.rfind("--config=", 0) == 0) preflight_config(arg.substr(9));
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ConfigError& e) {
      app.exit(e);
      return 2;
    } catch (const CLI::FileError& e) {
      app.exit(e);
      return 2;
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 1;
    }

    std::string config_text = app.config_to_str(true, false);
    std::string sub_name = app.get_subcommands().front()->get_name();
    uint64_t hash = fnv1a64(sub_name + "\n" + config_text);
    std::string header = header_comment(hash, global.seed);

    if (cap_cmd->parsed()) return run_capacity(cap_args, header);
    if (rate_cmd->parsed()) return run_rate(rate_args, header);
    if (an_cmd->parsed()) return run_analyze(an_args, global, header, config_text);
    if (opt_cmd->parsed()) return run_optimize(opt_args, global, header);
    if (sim_cmd->parsed()) return run_simulate(sim_args, global, header, config_text);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_args, global, header, config_text);
    if (val_cmd->parsed()) return run_validate(val_args, header);
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
