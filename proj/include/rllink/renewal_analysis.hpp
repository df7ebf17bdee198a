#pragma once

#include <Eigen/Dense>

#include "rllink/iid_analysis.hpp"
#include "rllink/link.hpp"
#include "rllink/rll.hpp"

namespace rllink {

// Information rate of a run-length-limited input through the on-off channel.
// Only the free states (run length in [d, k-1]) carry information; each
// contributes the rate of a one-shot asymmetric erasure of the energy symbol.
double rate_constrained(const RllSpec& spec, const EdgeProbs& probs, double p10);

// Battery law sampled at renewal instants. For a type-0 code the renewals are
// the slots carrying the energy symbol; the chain state is the battery level
// just after such a slot settles. Between renewals the battery only drains,
// so one interval is summarized by the binomial count of demands in it.
// Demands must be i.i.d. with P(z=1) = q.
Eigen::MatrixXd renewal_battery_chain(const RllSpec& spec, const EdgeProbs& probs,
                                      const Channel& ch, double q, int b_max);

// Per-renewal event expectations and the stationary renewal-instant battery
// law. Long-run per-slot probabilities follow by renewal-reward:
//   p_of = pi(b_max) * e_overflow / mean_interval
//   p_uf = sum_b pi(b) * e_underflow(b) / mean_interval
struct RenewalRewards {
  Eigen::VectorXd pi;           // battery law at renewal instants
  double e_overflow = 0.0;      // expected overflows per interval from b_max
  Eigen::VectorXd e_underflow;  // expected underflows per interval, by start level
  double mean_interval = 0.0;
};

RenewalRewards renewal_rewards(const RllSpec& spec, const EdgeProbs& probs, const Channel& ch,
                               double q, int b_max);

// Full analytic operating point for a type-0 code with i.i.d. demands.
EnergyTriple triple_type0(const RllSpec& spec, const EdgeProbs& probs, const Channel& ch,
                          double q, int b_max);

// Type-1 counterpart on a noiseless channel, obtained by complementing every
// symbol: the mirrored type-0 code with demands 1-q and the battery read
// upside down, which swaps the two event types. A lossy channel breaks the
// complement symmetry, so p10 > 0 is rejected; use the simulator there.
EnergyTriple triple_type1_noiseless(const RllSpec& spec, const EdgeProbs& probs, double q,
                                    int b_max);

// Dispatches on code type; type1 requires p10 == 0.
EnergyTriple triple_constrained(const RllSpec& spec, const EdgeProbs& probs, const Channel& ch,
                                double q, int b_max);

}  // namespace rllink
