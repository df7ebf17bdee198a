#include "rllink/simulate.hpp"

#include <cmath>

#include "rllink/errors.hpp"
#include "rllink/rng.hpp"

namespace rllink {

void SimConfig::check() const {
  if (steps < 1) throw ValidationError("simulate: steps must be >= 1");
  if (burn_in < 0) throw ValidationError("simulate: negative burn_in");
  if (burn_in > 0 && steps < 10 * burn_in)
    throw ValidationError("simulate: steps must be at least 10x burn_in");
  if (reps < 1) throw ValidationError("simulate: replications must be >= 1");
  if (b_max < 1) throw ValidationError("simulate: b_max must be >= 1");
  if (battery_start > b_max) throw ValidationError("simulate: battery_start above b_max");
  if (usage_start != 0 && usage_start != 1) throw ValidationError("simulate: usage_start not 0/1");
}

namespace {

// Walks either source one slot using the pre-drawn uniform.
struct SourceState {
  const IidSource* iid = nullptr;
  const RllSource* rll = nullptr;
  int state = 0;

  void init(const CodeSource& src, int code_start, Rng& rng) {
    if (const auto* s = std::get_if<IidSource>(&src)) {
      iid = s;
      if (!(s->p_x >= 0.0 && s->p_x <= 1.0)) throw ValidationError("simulate: p_x outside [0,1]");
      return;
    }
    rll = &std::get<RllSource>(src);
    rll->probs.check(rll->spec);
    if (code_start >= 0) {
      if (code_start > rll->spec.k) throw ValidationError("simulate: code_start above k");
      state = code_start;
    } else {
      Eigen::VectorXd pi =
          stationary_distribution(code_transition_matrix(rll->spec, rll->probs));
      double u = rng.uniform();
      state = rll->spec.k;
      double acc = 0.0;
      for (int j = 0; j <= rll->spec.k; ++j) {
        acc += pi(j);
        if (u < acc) {
          state = j;
          break;
        }
      }
    }
  }

  uint8_t step(double u) {
    if (iid) return u < iid->p_x ? 1 : 0;
    const RllSpec& spec = rll->spec;
    bool extend;
    if (state < spec.d) extend = true;
    else if (state == spec.k) extend = false;
    else extend = u < rll->probs.probs[state - spec.d];
    if (extend) {
      ++state;
      return spec.run_symbol();
    }
    state = 0;
    return 1 - spec.run_symbol();
  }
};

// Pairwise sum keeps the reduction order fixed regardless of how the values
// were produced.
double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
  if (hi - lo == 1) return v[lo];
  size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double mean_of(const std::vector<double>& v) {
  return pairwise_sum(v, 0, v.size()) / static_cast<double>(v.size());
}

}  // namespace

SimEstimate simulate(const CodeSource& source, const Channel& ch, const UsageModel& usage,
                     const SimConfig& cfg) {
  cfg.check();
  ch.check();
  usage.check();

  SimEstimate est;
  est.steps_per_rep = cfg.steps;
  est.reps = cfg.reps;
  est.seed = cfg.seed;
  est.rep_of.resize(cfg.reps);
  est.rep_uf.resize(cfg.reps);

  for (int rep = 0; rep < cfg.reps; ++rep) {
    Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(rep)));
    SourceState src;
    src.init(source, cfg.code_start, rng);
    int b = cfg.battery_start >= 0 ? cfg.battery_start : cfg.b_max / 2;
    int u = cfg.usage_start;
    int64_t of = 0, uf = 0;
    const int64_t total = cfg.burn_in + cfg.steps;
    for (int64_t t = 0; t < total; ++t) {
      double u_code = rng.uniform();
      double u_chan = rng.uniform();
      double u_use = rng.uniform();
      int x = src.step(u_code);
      int y = channel_step(ch, x, u_chan);
      int z = usage_step(usage, u, u_use);
      u = z;
      BatteryStep bs = battery_step(b, cfg.b_max, y, z);
      if (t >= cfg.burn_in) {
        of += bs.overflow;
        uf += bs.underflow;
      }
      b = bs.next;
    }
    est.of_events += of;
    est.uf_events += uf;
    est.rep_of[rep] = static_cast<double>(of) / cfg.steps;
    est.rep_uf[rep] = static_cast<double>(uf) / cfg.steps;
  }

  est.p_of = mean_of(est.rep_of);
  est.p_uf = mean_of(est.rep_uf);
  if (cfg.reps >= 2) {
    double var_of = 0.0, var_uf = 0.0;
    for (int r = 0; r < cfg.reps; ++r) {
      var_of += (est.rep_of[r] - est.p_of) * (est.rep_of[r] - est.p_of);
      var_uf += (est.rep_uf[r] - est.p_uf) * (est.rep_uf[r] - est.p_uf);
    }
    double denom = static_cast<double>(cfg.reps) * (cfg.reps - 1);
    est.se_of = std::sqrt(var_of / denom);
    est.se_uf = std::sqrt(var_uf / denom);
  } else {
    est.se_of = std::sqrt(est.p_of * (1.0 - est.p_of) / cfg.steps);
    est.se_uf = std::sqrt(est.p_uf * (1.0 - est.p_uf) / cfg.steps);
  }
  return est;
}

std::vector<StepRecord> simulate_trace(const CodeSource& source, const Channel& ch,
                                       const UsageModel& usage, const SimConfig& cfg,
                                       int64_t count) {
  cfg.check();
  ch.check();
  usage.check();
  if (count < 1) throw ValidationError("simulate_trace: count must be >= 1");

  Rng rng(derive_seed(cfg.seed, 0));
  SourceState src;
  src.init(source, cfg.code_start, rng);
  int b = cfg.battery_start >= 0 ? cfg.battery_start : cfg.b_max / 2;
  int u = cfg.usage_start;

  std::vector<StepRecord> trace;
  trace.reserve(count);
  for (int64_t t = 0; t < count; ++t) {
    double u_code = rng.uniform();
    double u_chan = rng.uniform();
    double u_use = rng.uniform();
    StepRecord rec;
    rec.i = t;
    rec.x = src.step(u_code);
    rec.y = static_cast<uint8_t>(channel_step(ch, rec.x, u_chan));
    rec.z = static_cast<uint8_t>(usage_step(usage, u, u_use));
    u = rec.z;
    rec.battery = b;
    BatteryStep bs = battery_step(b, cfg.b_max, rec.y, rec.z);
    rec.overflow = bs.overflow;
    rec.underflow = bs.underflow;
    rec.code_state = src.rll ? src.state : -1;
    b = bs.next;
    trace.push_back(rec);
  }
  return trace;
}

RenewalAudit renewal_audit(const std::vector<StepRecord>& trace, int b_max) {
  if (b_max < 1) throw ValidationError("renewal_audit: b_max must be >= 1");
  if (trace.empty()) throw ValidationError("renewal_audit: empty trace");
  if (trace.front().code_state < 0)
    throw ValidationError("renewal_audit: trace has no code states (i.i.d. source)");

  // Renewal slots end with the run counter back at 0. The chain the analytics
  // study lives at those instants, reading the battery after the slot
  // commits: the level the slot started from, adjusted by its y and z.
  auto settled = [&](const StepRecord& r) {
    return battery_step(r.battery, b_max, r.y, r.z).next;
  };

  std::vector<size_t> marks;
  for (size_t i = 0; i < trace.size(); ++i)
    if (trace[i].code_state == 0) marks.push_back(i);

  RenewalAudit audit;
  if (marks.size() < 2) throw ValidationError("renewal_audit: fewer than two renewal slots");
  audit.renewals = static_cast<int64_t>(marks.size()) - 1;

  int max_len = 0;
  for (size_t j = 0; j + 1 < marks.size(); ++j)
    max_len = std::max(max_len, static_cast<int>(marks[j + 1] - marks[j]));
  std::vector<int64_t> len_counts(max_len + 1, 0);

  audit.pi = Eigen::VectorXd::Zero(b_max + 1);
  audit.e_underflow = Eigen::VectorXd::Zero(b_max + 1);
  audit.e_overflow = Eigen::VectorXd::Zero(b_max + 1);
  audit.level_counts = Eigen::VectorXd::Zero(b_max + 1);

  int64_t uf_total = 0, of_total = 0, slot_total = 0;
  for (size_t j = 0; j + 1 < marks.size(); ++j) {
    int start_level = settled(trace[marks[j]]);
    int len = static_cast<int>(marks[j + 1] - marks[j]);
    int64_t uf = 0, of = 0;
    for (size_t i = marks[j] + 1; i <= marks[j + 1]; ++i) {
      uf += trace[i].underflow;
      of += trace[i].overflow;
    }
    len_counts[len] += 1;
    audit.level_counts(start_level) += 1.0;
    audit.e_underflow(start_level) += static_cast<double>(uf);
    audit.e_overflow(start_level) += static_cast<double>(of);
    uf_total += uf;
    of_total += of;
    slot_total += len;
  }

  audit.interval_pmf.assign(max_len, 0.0);
  for (int len = 1; len <= max_len; ++len)
    audit.interval_pmf[len - 1] = static_cast<double>(len_counts[len]) / audit.renewals;
  audit.mean_interval = static_cast<double>(slot_total) / audit.renewals;

  for (int b = 0; b <= b_max; ++b) {
    double c = audit.level_counts(b);
    if (c > 0) {
      audit.e_underflow(b) /= c;
      audit.e_overflow(b) /= c;
    }
    audit.pi(b) = c / static_cast<double>(audit.renewals);
  }

  audit.uf_rate_direct = static_cast<double>(uf_total) / slot_total;
  audit.of_rate_direct = static_cast<double>(of_total) / slot_total;
  audit.uf_rate_grouped = audit.pi.dot(audit.e_underflow) / audit.mean_interval;
  audit.of_rate_grouped = audit.pi.dot(audit.e_overflow) / audit.mean_interval;
  return audit;
}

}  // namespace rllink
