#pragma once

#include "rllink/errors.hpp"

namespace rllink {

// Binary on-off channel: a transmitted 1 is lost with probability p10, a
// transmitted 0 always arrives as 0.
struct Channel {
  double p10 = 0.0;

  void check() const {
    if (!(p10 >= 0.0 && p10 <= 1.0)) throw ValidationError("channel: p10 outside [0,1]");
  }
};

// Receiver demand chain with two states. In state u the demand z equals u
// with probability q[u] (the chain stays put); otherwise z = 1-u and the
// chain moves. Either way the next state is the emitted demand, so runs of
// equal demands have mean length 1/(1-q[u]). q0 = 1-q1 collapses the chain to
// i.i.d. demands with P(z=1) = q1.
struct UsageModel {
  double q0 = 0.5;  // stay probability in state 0 (emit another 0)
  double q1 = 0.5;  // stay probability in state 1 (emit another 1)

  void check() const {
    if (!(q0 >= 0.0 && q0 <= 1.0) || !(q1 >= 0.0 && q1 <= 1.0))
      throw ValidationError("usage: stay probabilities outside [0,1]");
  }
  bool is_iid() const { return q0 == 1.0 - q1; }
};

// One usage step: emits the demand and advances the state. u must be 0 or 1.
inline int usage_step(const UsageModel& m, int u, double unit_draw) {
  double stay = u == 0 ? m.q0 : m.q1;
  return unit_draw < stay ? u : 1 - u;
}

// Battery update for received energy y and demand z, clamped to [0, B_max].
// A slot with y = 1 and z = 1 feeds the demand directly and leaves the
// battery alone, so it can produce neither event.
struct BatteryStep {
  int next;
  bool overflow;
  bool underflow;
};

inline BatteryStep battery_step(int b, int b_max, int y, int z) {
  BatteryStep s;
  int raw = b + y - z;
  s.next = raw < 0 ? 0 : (raw > b_max ? b_max : raw);
  s.overflow = b == b_max && y == 1 && z == 0;
  s.underflow = b == 0 && y == 0 && z == 1;
  return s;
}

// Channel output for transmitted symbol x.
inline int channel_step(const Channel& ch, int x, double unit_draw) {
  if (x == 0) return 0;
  return unit_draw < ch.p10 ? 0 : 1;
}

}  // namespace rllink
