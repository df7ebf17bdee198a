#include "rllink/iid_analysis.hpp"

#include <cmath>

#include "rllink/entropy.hpp"
#include "rllink/errors.hpp"
#include "rllink/markov.hpp"

namespace rllink {

double rate_iid(double p_y, double p10) {
  Channel{p10}.check();
  if (p10 >= 1.0) {
    if (p_y > 0.0) throw ValidationError("rate_iid: p_y > 0 impossible when every 1 is lost");
    return 0.0;
  }
  if (p_y < 0.0 || p_y > 1.0 - p10 + 1e-15)
    throw ValidationError("rate_iid: need 0 <= p_y <= 1 - p10");
  return binary_entropy(p_y) - p_y / (1.0 - p10) * binary_entropy(p10);
}

RatePeak rate_iid_peak(double p10) {
  Channel{p10}.check();
  if (p10 >= 1.0) return {0.0, 0.0};
  // d/dp_y [H(p_y) - c p_y] = log2((1-p_y)/p_y) - c = 0 at p_y = 1/(1+2^c).
  double c = binary_entropy(p10) / (1.0 - p10);
  double p = 1.0 / (1.0 + std::exp2(c));
  return {p, rate_iid(p, p10)};
}

Interval rate_iid_feasible(double rate_min, double p10) {
  RatePeak peak = rate_iid_peak(p10);
  if (rate_min > peak.rate) return {};
  if (rate_min <= 0.0) return {0.0, 1.0 - p10};
  auto bisect = [&](double a, double b) {
    // rate(a) and rate(b) bracket rate_min; returns the crossing.
    bool rising = rate_iid(a, p10) < rate_min;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      bool below = rate_iid(mid, p10) < rate_min;
      (below == rising ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };
  Interval iv;
  iv.lo = bisect(0.0, peak.p_y);
  iv.hi = bisect(peak.p_y, 1.0 - p10);
  return iv;
}

OfUf of_uf_iid(double p_y, double q, int b_max) {
  if (!(p_y >= 0.0 && p_y <= 1.0)) throw ValidationError("of_uf_iid: p_y outside [0,1]");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("of_uf_iid: q outside [0,1]");
  if (b_max < 1) throw ValidationError("of_uf_iid: b_max must be >= 1");

  const int n = b_max + 1;
  const double up = p_y * (1.0 - q);    // y=1, z=0
  const double down = (1.0 - p_y) * q;  // y=0, z=1

  OfUf out;
  out.stationary = Eigen::VectorXd::Zero(n);
  if (up == 0.0 && down == 0.0) {
    // Battery can never move; report the uniform law for definiteness.
    out.stationary.setConstant(1.0 / n);
    return out;
  }
  if (up == 0.0) {
    out.stationary(0) = 1.0;
  } else if (down == 0.0) {
    out.stationary(b_max) = 1.0;
  } else if (up <= down) {
    double r = up / down;
    double w = 1.0, total = 0.0;
    for (int i = 0; i < n; ++i, w *= r) {
      out.stationary(i) = w;
      total += w;
    }
    out.stationary /= total;
  } else {
    double r = down / up;
    double w = 1.0, total = 0.0;
    for (int i = n - 1; i >= 0; --i, w *= r) {
      out.stationary(i) = w;
      total += w;
    }
    out.stationary /= out.stationary.sum();
  }
  out.p_of = out.stationary(b_max) * up;
  out.p_uf = out.stationary(0) * down;
  return out;
}

OfUf of_uf_markov_usage(double p_y, const UsageModel& usage, int b_max) {
  usage.check();
  if (!(p_y >= 0.0 && p_y <= 1.0)) throw ValidationError("of_uf_markov_usage: p_y outside [0,1]");
  if (b_max < 1) throw ValidationError("of_uf_markov_usage: b_max must be >= 1");

  // Joint chain over (battery, usage state), index s = 2b + u. The demand and
  // the arrival act in the same slot; the next usage state is the demand.
  const int n = 2 * (b_max + 1);
  auto idx = [](int b, int u) { return 2 * b + u; };
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b <= b_max; ++b) {
    for (int u = 0; u <= 1; ++u) {
      double stay = u == 0 ? usage.q0 : usage.q1;
      for (int z = 0; z <= 1; ++z) {
        double pz = z == u ? stay : 1.0 - stay;
        for (int y = 0; y <= 1; ++y) {
          double py = y == 1 ? p_y : 1.0 - p_y;
          T(idx(b, u), idx(battery_step(b, b_max, y, z).next, z)) += pz * py;
        }
      }
    }
  }
  Eigen::VectorXd pi = stationary_distribution(T);

  OfUf out;
  out.stationary = pi;
  // Overflow needs b = b_max, y = 1, z = 0; underflow needs b = 0, y = 0, z = 1.
  out.p_of = p_y * (pi(idx(b_max, 0)) * usage.q0 + pi(idx(b_max, 1)) * (1.0 - usage.q1));
  out.p_uf = (1.0 - p_y) * (pi(idx(0, 0)) * (1.0 - usage.q0) + pi(idx(0, 1)) * usage.q1);
  return out;
}

MinimaxPoint minimax_closed_form(double rate_min, double q, int b_max) {
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("minimax_closed_form: q outside [0,1]");
  if (b_max < 1) throw ValidationError("minimax_closed_form: b_max must be >= 1");
  if (rate_min < 0.0) throw ValidationError("minimax_closed_form: rate_min negative");
  if (rate_min > 1.0)
    throw InfeasibleError("minimax_closed_form: rate_min exceeds 1 bit/use, the noiseless peak");

  // Balancing arrivals against demands (p_y = q) equalizes the two event
  // probabilities; it is optimal whenever the rate constraint admits it.
  // Otherwise p_y must move toward 1/2 until H(p_y) = rate_min, and the event
  // on the heavy side of the battery dominates.
  MinimaxPoint out;
  if (rate_min <= binary_entropy(q)) {
    out.p_y = q;
  } else if (q <= 0.5) {
    out.p_y = entropy_inverse(rate_min);
  } else {
    out.p_y = 1.0 - entropy_inverse(rate_min);
  }
  OfUf ou = of_uf_iid(out.p_y, q, b_max);
  out.value = std::max(ou.p_of, ou.p_uf);
  out.triple = {rate_iid(out.p_y, 0.0), ou.p_of, ou.p_uf};
  return out;
}

}  // namespace rllink
