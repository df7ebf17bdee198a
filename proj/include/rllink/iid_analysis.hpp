#pragma once

#include <Eigen/Dense>

#include "rllink/link.hpp"

namespace rllink {

// Rate and long-run event probabilities of one operating point.
struct EnergyTriple {
  double rate = 0.0;
  double p_of = 0.0;
  double p_uf = 0.0;
};

// Long-run overflow/underflow probabilities plus the battery-law detail
// behind them.
struct OfUf {
  double p_of = 0.0;
  double p_uf = 0.0;
  Eigen::VectorXd stationary;  // battery levels 0..b_max, or joint states
};

// Information rate of an unconstrained i.i.d. input through the on-off
// channel, parameterized by the received-energy rate p_y = P(y = 1). Needs
// p_y <= 1 - p10 so the input probability p_y / (1 - p10) is a probability.
double rate_iid(double p_y, double p10);

// Largest achievable rate_iid over p_y, and the p_y attaining it.
struct RatePeak {
  double p_y;
  double rate;
};
RatePeak rate_iid_peak(double p10);

// Feasible received-rate interval { p_y : rate_iid(p_y, p10) >= rate_min }.
// Empty (lo > hi) when rate_min exceeds the peak.
struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};
Interval rate_iid_feasible(double rate_min, double p10);

// Battery event probabilities for i.i.d. energy arrivals P(y=1) = p_y and
// i.i.d. demands P(z=1) = q. The battery is a birth-death chain; the
// stationary law is geometric with ratio p_y(1-q) / ((1-p_y)q), accumulated
// from whichever end keeps the recursion contracting. The frozen corner
// (no possible motion in either direction) has no unique stationary law; it
// reports the uniform distribution and zero events.
OfUf of_uf_iid(double p_y, double q, int b_max);

// Same events under the two-state demand chain: solved exactly on the joint
// (battery, usage-state) chain. Collapses to of_uf_iid when the chain is
// i.i.d. (q0 = 1 - q1).
OfUf of_uf_markov_usage(double p_y, const UsageModel& usage, int b_max);

// Minimizer of max(p_of, p_uf) over p_y subject to rate_iid >= rate_min, on
// a noiseless channel with i.i.d. demands. When the rate constraint leaves
// p_y = q available the balanced point is optimal with value
// q(1-q)/(b_max+1); otherwise the constraint binds at the entropy inverse and
// one event type dominates.
struct MinimaxPoint {
  double p_y = 0.0;
  double value = 0.0;
  EnergyTriple triple;
};
MinimaxPoint minimax_closed_form(double rate_min, double q, int b_max);

}  // namespace rllink
