#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rllink/link.hpp"
#include "rllink/rll.hpp"

namespace rllink {

// What feeds the transmitter: unconstrained i.i.d. symbols or a constrained
// state-chain walk.
struct IidSource {
  double p_x = 0.5;
};
struct RllSource {
  RllSpec spec;
  EdgeProbs probs;
};
using CodeSource = std::variant<IidSource, RllSource>;

struct SimConfig {
  uint64_t seed = 1;
  int64_t steps = 1'000'000;  // counted steps per replication
  int64_t burn_in = 10'000;
  int reps = 10;
  int b_max = 2;
  int battery_start = -1;  // -1: b_max / 2
  int usage_start = 0;     // 0 or 1
  int code_start = -1;     // -1: stationary draw (constrained source only)

  // steps must dominate burn_in so transients cannot color the estimates.
  void check() const;
};

struct SimEstimate {
  double p_of = 0.0;
  double p_uf = 0.0;
  double se_of = 0.0;
  double se_uf = 0.0;
  std::vector<double> rep_of;  // per-replication estimates, replication order
  std::vector<double> rep_uf;
  int64_t of_events = 0;  // totals across replications
  int64_t uf_events = 0;
  int64_t steps_per_rep = 0;
  int reps = 0;
  uint64_t seed = 0;
};

// Runs reps independent replications, each burn_in + steps slots from its own
// derived seed stream, and aggregates in replication order. Every slot draws
// exactly three uniforms (code, channel, usage) whether or not each is
// needed, so streams stay aligned across parameter changes and code types.
// With a single replication the standard error falls back to the binomial
// formula, which ignores slot-to-slot correlation; prefer reps >= 2.
SimEstimate simulate(const CodeSource& source, const Channel& ch, const UsageModel& usage,
                     const SimConfig& cfg);

// One slot of a recorded trajectory. battery is the level the slot started
// from (events are decided against it); code_state is the run counter after
// the slot, or -1 for an i.i.d. source.
struct StepRecord {
  int64_t i = 0;
  uint8_t x = 0, y = 0, z = 0;
  int battery = 0;
  bool overflow = false, underflow = false;
  int code_state = -1;
};

// Records the first `count` slots of replication 0 (no burn-in discard),
// byte-for-byte the same trajectory simulate() sees.
std::vector<StepRecord> simulate_trace(const CodeSource& source, const Channel& ch,
                                       const UsageModel& usage, const SimConfig& cfg,
                                       int64_t count);

// Renewal bookkeeping over a recorded constrained-source trace. A renewal
// closes at each slot whose code state returns to 0 (the run-breaking
// symbol); only spans between the first and last such slot count. Events and
// battery levels are grouped per interval, giving the empirical versions of
// the renewal analytics: interval pmf, the battery law just after renewal
// slots, and per-interval event counts keyed by the starting level.
struct RenewalAudit {
  std::vector<double> interval_pmf;  // index 0 = interval length 1
  double mean_interval = 0.0;
  Eigen::VectorXd pi;            // battery just after a renewal slot
  Eigen::VectorXd e_underflow;   // mean per-interval underflows by start level
  Eigen::VectorXd e_overflow;    // same for overflows
  Eigen::VectorXd level_counts;  // intervals observed per start level
  int64_t renewals = 0;          // completed intervals
  double uf_rate_direct = 0.0;   // events / slots over the audited span
  double of_rate_direct = 0.0;
  double uf_rate_grouped = 0.0;  // sum_b pi(b) e_underflow(b) / mean_interval
  double of_rate_grouped = 0.0;
};

RenewalAudit renewal_audit(const std::vector<StepRecord>& trace, int b_max);

}  // namespace rllink
