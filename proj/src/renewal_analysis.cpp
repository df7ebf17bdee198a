#include "rllink/renewal_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "rllink/entropy.hpp"
#include "rllink/errors.hpp"
#include "rllink/markov.hpp"

namespace rllink {

double rate_constrained(const RllSpec& spec, const EdgeProbs& probs, double p10) {
  probs.check(spec);
  Channel ch{p10};
  ch.check();
  if (spec.d == spec.k) return 0.0;
  Eigen::VectorXd pi = code_stationary(spec, probs).stationary;
  double h10 = binary_entropy(p10);
  double rate = 0.0;
  for (int j = spec.d; j < spec.k; ++j) {
    // Probability that state j emits the energy symbol.
    double pe = spec.type == CodeType::type0 ? 1.0 - probs.probs[j - spec.d]
                                             : probs.probs[j - spec.d];
    rate += pi(j) * (binary_entropy(pe * (1.0 - p10)) - pe * h10);
  }
  return rate;
}

Eigen::MatrixXd renewal_battery_chain(const RllSpec& spec, const EdgeProbs& probs,
                                      const Channel& ch, double q, int b_max) {
  if (spec.type != CodeType::type0)
    throw ValidationError("renewal_battery_chain: renewal analysis covers type-0 codes only");
  ch.check();
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("renewal_battery_chain: q outside [0,1]");
  if (b_max < 1) throw ValidationError("renewal_battery_chain: b_max must be >= 1");

  RenewalDist dist = renewal_dist(spec, probs);
  const int n = b_max + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    for (int i = dist.min_interval(); i <= dist.max_interval(); ++i) {
      double pi_i = dist.prob(i);
      if (pi_i == 0.0) continue;
      // Interval of length i: i-1 slots with no energy, then the energy slot.
      // The battery only drains in between, so the clamp at zero commutes with
      // the total demand count l.
      double received = pi_i * (1.0 - ch.p10);
      for (int l = 0; l <= i - 1; ++l) {
        double w = received * binomial_pmf(l, i - 1, q);
        int level = std::max(0, m - l);
        // Final slot delivers energy: a simultaneous demand consumes it
        // directly, otherwise the battery steps up.
        T(m, level) += w * q;
        T(m, std::min(b_max, level + 1)) += w * (1.0 - q);
      }
      double lost = pi_i * ch.p10;
      for (int l = 0; l <= i; ++l)
        T(m, std::max(0, m - l)) += lost * binomial_pmf(l, i, q);
    }
  }
  return T;
}

namespace {

// E[(Bin(n, q) - b)^+], the expected number of demands beyond the first b.
double expected_excess(int n, int b, double q) {
  double acc = 0.0;
  for (int l = 1; l <= n - b; ++l) acc += l * binomial_pmf(l + b, n, q);
  return acc;
}

}  // namespace

RenewalRewards renewal_rewards(const RllSpec& spec, const EdgeProbs& probs, const Channel& ch,
                               double q, int b_max) {
  Eigen::MatrixXd T = renewal_battery_chain(spec, probs, ch, q, b_max);
  RenewalDist dist = renewal_dist(spec, probs);

  RenewalRewards out;
  out.pi = stationary_distribution(T);
  out.mean_interval = dist.mean;

  // An overflow needs the battery full at the energy slot with no demand
  // there; since the battery cannot rise mid-interval this forces a full
  // start and zero demands all interval, collapsing to P(Bin(i, q) = 0).
  out.e_overflow = 0.0;
  for (int i = dist.min_interval(); i <= dist.max_interval(); ++i)
    out.e_overflow += dist.prob(i) * (1.0 - ch.p10) * binomial_pmf(0, i, q);

  // Underflows in one interval from start level b: every demand past the
  // first b is unmet. A received energy slot contributes no demand exposure;
  // a lost one behaves like a plain drain slot.
  out.e_underflow = Eigen::VectorXd::Zero(b_max + 1);
  for (int b = 0; b <= b_max; ++b) {
    double acc = 0.0;
    for (int i = dist.min_interval(); i <= dist.max_interval(); ++i) {
      double pi_i = dist.prob(i);
      if (pi_i == 0.0) continue;
      acc += pi_i * ((1.0 - ch.p10) * expected_excess(i - 1, b, q) +
                     ch.p10 * expected_excess(i, b, q));
    }
    out.e_underflow(b) = acc;
  }
  return out;
}

EnergyTriple triple_type0(const RllSpec& spec, const EdgeProbs& probs, const Channel& ch,
                          double q, int b_max) {
  RenewalRewards rw = renewal_rewards(spec, probs, ch, q, b_max);
  EnergyTriple t;
  t.rate = rate_constrained(spec, probs, ch.p10);
  t.p_of = rw.pi(b_max) * rw.e_overflow / rw.mean_interval;
  t.p_uf = rw.pi.dot(rw.e_underflow) / rw.mean_interval;
  return t;
}

EnergyTriple triple_type1_noiseless(const RllSpec& spec, const EdgeProbs& probs, double q,
                                    int b_max) {
  if (spec.type != CodeType::type1)
    throw ValidationError("triple_type1_noiseless: expected a type-1 spec");
  RllSpec mirrored = spec;
  mirrored.type = CodeType::type0;
  EnergyTriple t = triple_type0(mirrored, probs, Channel{0.0}, 1.0 - q, b_max);
  std::swap(t.p_of, t.p_uf);
  return t;
}

EnergyTriple triple_constrained(const RllSpec& spec, const EdgeProbs& probs, const Channel& ch,
                                double q, int b_max) {
  if (spec.type == CodeType::type0) return triple_type0(spec, probs, ch, q, b_max);
  if (ch.p10 > 0.0)
    throw ValidationError(
        "triple_constrained: no analytic type-1 model on a lossy channel; use the simulator");
  return triple_type1_noiseless(spec, probs, q, b_max);
}

}  // namespace rllink
