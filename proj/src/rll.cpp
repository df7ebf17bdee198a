#include "rllink/rll.hpp"

#include <cmath>

#include "rllink/errors.hpp"
#include "rllink/rng.hpp"

namespace rllink {

void RllSpec::check() const {
  if (k < 1) throw ValidationError("rll: k must be >= 1");
  if (d < 0 || d > k) throw ValidationError("rll: need 0 <= d <= k");
}

void EdgeProbs::check(const RllSpec& spec) const {
  spec.check();
  if (size() != spec.k - spec.d)
    throw ValidationError("rll: expected " + std::to_string(spec.k - spec.d) +
                          " edge probabilities, got " + std::to_string(size()));
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("rll: edge probability outside [0,1]");
}

void EdgeProbs::check_open(const RllSpec& spec) const {
  check(spec);
  for (double p : probs)
    if (p == 0.0 || p == 1.0)
      throw ValidationError("rll: edge probability at 0 or 1 can disconnect the state chain");
}

Eigen::MatrixXd adjacency_matrix(const RllSpec& spec) {
  spec.check();
  const int n = spec.k + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < spec.k; ++j) A(j, j + 1) = 1.0;
  for (int j = spec.d; j <= spec.k; ++j) A(j, 0) = 1.0;
  return A;
}

CapacityResult capacity_analysis(const RllSpec& spec) {
  Eigen::MatrixXd A = adjacency_matrix(spec);
  const int n = static_cast<int>(A.rows());

  CapacityResult res;
  if (spec.d == spec.k) {
    // Single deterministic codeword: a period-(k+1) cycle, spectral radius 1.
    res.degenerate = true;
    res.eigenvector = Eigen::VectorXd::Constant(n, 1.0 / n);
    return res;
  }

  // The graph has cycles of consecutive lengths d+1 and d+2, so it is
  // aperiodic and plain power iteration converges geometrically.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd y = A * x;
    double next = x.dot(y) / x.dot(x);
    x = y / y.sum();
    if (it > 0 && std::abs(next - lambda) < 1e-12) {
      lambda = next;
      res.iterations = it + 1;
      converged = true;
      break;
    }
    lambda = next;
  }
  if (!converged) throw NumericError("capacity_analysis: power iteration did not converge");

  res.spectral_radius = lambda;
  res.capacity = std::log2(lambda);
  res.eigenvector = x;
  for (int j = spec.d; j < spec.k; ++j)
    res.maxentropic.probs.push_back(x(j + 1) / (lambda * x(j)));
  return res;
}

EdgeProbs maxentropic_probs(const RllSpec& spec) { return capacity_analysis(spec).maxentropic; }

Eigen::MatrixXd code_transition_matrix(const RllSpec& spec, const EdgeProbs& probs) {
  probs.check(spec);
  const int n = spec.k + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < spec.d; ++j) T(j, j + 1) = 1.0;  // run too short to break
  for (int j = spec.d; j < spec.k; ++j) {
    double p = probs.probs[j - spec.d];
    T(j, j + 1) = p;
    T(j, 0) = 1.0 - p;
  }
  T(spec.k, 0) = 1.0;  // run at its cap must break
  return T;
}

ChainSolution code_stationary(const RllSpec& spec, const EdgeProbs& probs) {
  probs.check_open(spec);
  ChainSolution sol;
  sol.transition = code_transition_matrix(spec, probs);
  sol.stationary = stationary_distribution(sol.transition);
  return sol;
}

RenewalDist renewal_dist(const RllSpec& spec, const EdgeProbs& probs) {
  probs.check(spec);
  RenewalDist out;
  out.d = spec.d;
  const int count = spec.k - spec.d + 1;  // intervals d+1 .. k+1
  out.pmf.assign(count, 0.0);
  // P(interval = i): extend through states d..i-2, then break at state i-1.
  // Runs below state d are forced to extend; state k is forced to break.
  double survive = 1.0;
  for (int i = spec.d + 1; i <= spec.k; ++i) {
    double p_ext = probs.probs[i - 1 - spec.d];
    out.pmf[i - (spec.d + 1)] = survive * (1.0 - p_ext);
    survive *= p_ext;
  }
  out.pmf[count - 1] = survive;
  for (int i = 0; i < count; ++i) out.mean += (spec.d + 1 + i) * out.pmf[i];
  return out;
}

TraceResult validate_and_trace(const RllSpec& spec, const std::vector<uint8_t>& word) {
  spec.check();
  if (word.empty()) throw ValidationError("validate_and_trace: empty sequence");
  TraceResult res;
  res.states.reserve(word.size());
  const uint8_t run_sym = spec.run_symbol();
  int state = 0;  // run length before the current symbol
  bool interior = false;  // a breaking symbol has been seen
  for (size_t idx = 0; idx < word.size(); ++idx) {
    uint8_t b = word[idx];
    res.states.push_back(state);
    if (b == run_sym) {
      ++state;
      if (state > spec.k) {
        res.valid = false;
        res.reason = "run of " + std::to_string(state) + " exceeds k=" + std::to_string(spec.k);
        res.failure_index = static_cast<int>(idx);
        break;
      }
    } else if (b == 1 - run_sym) {
      // Interior runs (between two breaking symbols, even empty ones) must
      // reach length d; the leading run is exempt.
      if (interior && state < spec.d) {
        res.valid = false;
        res.reason =
            "interior run of " + std::to_string(state) + " is below d=" + std::to_string(spec.d);
        res.failure_index = static_cast<int>(idx);
        break;
      }
      interior = true;
      state = 0;
    } else {
      res.valid = false;
      res.reason = "symbol is not binary";
      res.failure_index = static_cast<int>(idx);
      break;
    }
  }
  if (!res.valid) res.states.clear();
  return res;
}

std::vector<uint8_t> sample_codeword(const RllSpec& spec, const EdgeProbs& probs, int length,
                                     uint64_t seed, int start_state) {
  probs.check(spec);
  if (length < 1) throw ValidationError("sample_codeword: length must be >= 1");
  Rng rng(seed);
  int state;
  if (start_state >= 0) {
    if (start_state > spec.k) throw ValidationError("sample_codeword: start state above k");
    state = start_state;
  } else {
    Eigen::VectorXd pi = stationary_distribution(code_transition_matrix(spec, probs));
    double u = rng.uniform();
    state = spec.k;
    double acc = 0.0;
    for (int j = 0; j <= spec.k; ++j) {
      acc += pi(j);
      if (u < acc) {
        state = j;
        break;
      }
    }
  }
  const uint8_t run_sym = spec.run_symbol();
  std::vector<uint8_t> word;
  word.reserve(length);
  for (int t = 0; t < length; ++t) {
    double u = rng.uniform();  // always consumed, keeping streams alignable
    bool extend;
    if (state < spec.d) extend = true;
    else if (state == spec.k) extend = false;
    else extend = u < probs.probs[state - spec.d];
    if (extend) {
      word.push_back(run_sym);
      ++state;
    } else {
      word.push_back(1 - run_sym);
      state = 0;
    }
  }
  return word;
}

}  // namespace rllink
