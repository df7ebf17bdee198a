#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rllink/markov.hpp"

namespace rllink {

// Which symbol carries the run-length constraint. For type0 the runs of 0s
// between 1s are constrained; for type1 the roles are swapped.
enum class CodeType { type0, type1 };

struct RllSpec {
  CodeType type = CodeType::type0;
  int d = 0;  // minimum interior run of the constrained symbol
  int k = 1;  // maximum run anywhere in the codeword

  uint8_t run_symbol() const { return type == CodeType::type0 ? 0 : 1; }
  // Throws ValidationError unless 0 <= d <= k and k >= 1.
  void check() const;
};

// Transition probabilities of the code state chain. probs[j-d] is the chance
// of extending the current run from state j, defined for d <= j <= k-1.
// States below d extend with probability 1 and state k ends the run, so those
// rows carry no free parameter; d == k leaves no free parameter at all.
struct EdgeProbs {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  // Entry count must be k - d and every entry must lie in [0,1]. The closed
  // interval is accepted here because sampling tolerates degenerate edges;
  // analytic operations additionally require the open interval.
  void check(const RllSpec& spec) const;
  void check_open(const RllSpec& spec) const;
};

// Constraint graph adjacency over states 0..k: state j counts the length of
// the current run. Extending moves j -> j+1 (allowed for j < k); breaking the
// run moves j -> 0 (allowed once j >= d).
Eigen::MatrixXd adjacency_matrix(const RllSpec& spec);

struct CapacityResult {
  double capacity = 0.0;  // log2 of the spectral radius, bits/symbol
  double spectral_radius = 1.0;
  EdgeProbs maxentropic;        // empty when degenerate
  Eigen::VectorXd eigenvector;  // right Perron vector, normalized to sum 1
  int iterations = 0;
  bool degenerate = false;  // d == k: a single periodic codeword, capacity 0
};

// Capacity of the constraint via power iteration on the adjacency matrix,
// plus the capacity-achieving edge probabilities p_j = x_{j+1} / (lambda x_j)
// read off the right Perron vector x. Power iteration stops when the
// Rayleigh-quotient estimate moves by less than 1e-12 between sweeps and
// throws NumericError after 1e5 sweeps.
CapacityResult capacity_analysis(const RllSpec& spec);

// Shorthand for capacity_analysis(spec).maxentropic.
EdgeProbs maxentropic_probs(const RllSpec& spec);

// Code state transition matrix over states 0..k. Accepts degenerate entries.
Eigen::MatrixXd code_transition_matrix(const RllSpec& spec, const EdgeProbs& probs);

// Code state chain with its stationary law. Analytic callers only: entries
// at exactly 0 or 1 are rejected since they can disconnect the chain.
ChainSolution code_stationary(const RllSpec& spec, const EdgeProbs& probs);

// Distribution of the renewal interval: the gap between consecutive
// occurrences of the run-breaking symbol. Support is d+1 .. k+1.
struct RenewalDist {
  int d = 0;
  std::vector<double> pmf;  // pmf[i] = P(interval == d+1+i)
  double mean = 0.0;

  double prob(int interval) const {
    int idx = interval - (d + 1);
    if (idx < 0 || idx >= static_cast<int>(pmf.size())) return 0.0;
    return pmf[idx];
  }
  int min_interval() const { return d + 1; }
  int max_interval() const { return d + static_cast<int>(pmf.size()); }
};

RenewalDist renewal_dist(const RllSpec& spec, const EdgeProbs& probs);

// Result of checking a binary word against the constraint. states[i] is the
// run length accumulated before symbol i, so states[0] == 0 and a valid
// word yields exactly one state per symbol. Interior runs of the constrained
// symbol (those between two breaking symbols, empty ones included) must have
// length in [d, k]; the leading and trailing runs are exempt from the
// minimum but not the maximum. The trace is cleared when invalid.
struct TraceResult {
  bool valid = true;
  std::vector<int> states;
  std::string reason;      // empty when valid
  int failure_index = -1;  // position of the offending symbol
};

TraceResult validate_and_trace(const RllSpec& spec, const std::vector<uint8_t>& word);

// Samples a codeword of the given length by walking the state chain from a
// stationary start (or from start_state in 0..k when nonnegative).
// Truncation may leave a short trailing run; the result is otherwise valid.
std::vector<uint8_t> sample_codeword(const RllSpec& spec, const EdgeProbs& probs, int length,
                                     uint64_t seed, int start_state = -1);

}  // namespace rllink
