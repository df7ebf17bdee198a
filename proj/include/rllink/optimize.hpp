#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "rllink/iid_analysis.hpp"
#include "rllink/link.hpp"
#include "rllink/renewal_analysis.hpp"
#include "rllink/rll.hpp"

namespace rllink {

// Operating environment a code family is optimized against.
struct LinkEnv {
  Channel ch;
  UsageModel usage;
  int b_max = 2;
  double rate_min = 0.1;

  void check() const;
};

// Unconstrained family: one parameter, the symbol on-probability p_x.
struct IidFamily {};

// Constrained family: parameters are the edge probabilities, optionally tied
// into groups sharing one value (ties index edges as j - d). Empty ties means
// every edge probability is free.
struct RllFamily {
  RllSpec spec;
  std::vector<std::vector<int>> ties;

  int param_count() const;
  EdgeProbs expand(const std::vector<double>& params) const;
  std::vector<double> project(const EdgeProbs& probs) const;  // group means
  // ties, when present, must partition the edge index range.
  void check() const;
};

using CodeFamily = std::variant<IidFamily, RllFamily>;

struct OptOptions {
  int starts = 8;           // maxentropic, flat 0.5, then seeded random
  double eps = 1e-3;        // parameter box [eps, 1-eps]
  double coord_tol = 1e-3;  // golden-section interval width per coordinate
  double pass_tol = 1e-6;   // stop when a sweep over coordinates gains less
  int max_passes = 8;
  int64_t sim_steps = 1'000'000;  // per objective evaluation, when simulated
  int64_t sim_burn_in = 10'000;
  int sim_reps = 2;
  uint64_t seed = 1;
};

struct OptResult {
  bool feasible = false;
  std::string message;  // why, when infeasible
  double objective = std::numeric_limits<double>::quiet_NaN();
  EnergyTriple triple;
  std::vector<double> params;  // p_x for iid; tie-group values for rll
  std::string source;          // "analytic" | "empirical"
  int evaluations = 0;
};

// Single evaluation of a family at fixed parameters, exactly as the
// optimizer scores candidates: the rate is always analytic; event
// probabilities are analytic where the renewal machinery applies (i.i.d.
// demands; type-1 also needs p10 = 0) and otherwise come from a fixed-seed
// simulation so repeated calls agree bit for bit.
EnergyTriple evaluate_family(const LinkEnv& env, const CodeFamily& family,
                             const std::vector<double>& params, const OptOptions& opts,
                             std::string* source = nullptr);

// Minimizes max(p_of, p_uf) over p_x subject to rate_iid >= rate_min:
// golden-section over the feasible received-rate interval, then refined on a
// 1e-4 grid. Infeasible when rate_min exceeds the peak rate.
OptResult optimize_iid(const LinkEnv& env, const OptOptions& opts = {});

// Same objective over the family's edge probabilities: multi-start
// coordinate descent, one golden-section line search per coordinate within
// [eps, 1-eps], feasibility (rate >= rate_min - 1e-9) as a hard filter.
// Infeasible when rate_min exceeds the constraint capacity, or when no
// feasible point was found.
OptResult optimize_constrained(const LinkEnv& env, const RllFamily& family,
                               const OptOptions& opts = {});

OptResult optimize_family(const LinkEnv& env, const CodeFamily& family,
                          const OptOptions& opts = {});

enum class SweepAxis { q0, rate, p10 };

struct SweepFamily {
  std::string label;
  CodeFamily family;
};

struct SweepSpec {
  std::string name;
  SweepAxis axis;
  std::vector<double> values;
  LinkEnv base;  // the axis field is overwritten per point
  std::vector<SweepFamily> families;
};

struct SweepRow {
  std::string family;
  std::string axis;
  double value;
  OptResult result;
};

// One optimize per (family, axis value). Rows come back grouped by family in
// declaration order with values ascending, independent of thread count; each
// point derives its own seed from (opts.seed, row index), so results are a
// pure function of spec + options.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const OptOptions& opts, int threads = 1);

// Named presets: fig12 (demand-burst sweep over q0), fig13 (rate sweep),
// fig14 (channel-loss sweep). Throws ValidationError for unknown names.
SweepSpec sweep_preset(const std::string& name);
std::vector<std::string> sweep_preset_names();

}  // namespace rllink
