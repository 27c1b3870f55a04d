#pragma once

#include <cstdint>
#include <vector>

#include "brwlab/walk.hpp"

namespace brwlab {

// Exact m-step distribution of the reflected walk, as a dense row over
// sites 0..start+m. probs[k] is zero off the parity class of start+m.
struct TransitionRow {
  WalkParams params;
  std::uint64_t start;
  std::uint64_t m;
  std::vector<double> probs;

  double prob_at(std::uint64_t k) const {
    return k < probs.size() ? probs[k] : 0.0;
  }
  // Sum over sites >= threshold, accumulated smallest-first.
  double tail_from(std::uint64_t threshold) const;
};

TransitionRow rw_dp_transition_prob(const WalkParams& params, std::uint64_t start,
                                    std::uint64_t m);

// Spectral decomposition of one transition probability: a geometric main
// term carried by the two unit-modulus eigenvalues, plus an oscillatory
// integral over the continuous spectrum. Valid for target sites k >= 1;
// the k = 0 column is served by the DP instead.
struct KacDecomposition {
  double main_term;
  double remainder;
  double envelope;  // provable bound on |remainder|
  double value() const { return main_term + remainder; }
};

// Evaluates the decomposition with adaptive Simpson quadrature on [0, pi].
// quadrature_tol is an absolute tolerance on the final probability.
KacDecomposition kac_transition_prob(const WalkParams& params, std::uint64_t start,
                                     std::uint64_t m, std::uint64_t k,
                                     double quadrature_tol = 1e-12);

// Same decomposition for a whole row at once (k = 1..start+m), evaluated
// through exact cosine-series expansions of the integrand instead of
// quadrature. Index 0 of each vector is unused (k = 0 comes from the DP).
struct KacRow {
  std::uint64_t start;
  std::uint64_t m;
  std::vector<double> main_term;
  std::vector<double> remainder;
  double value_at(std::uint64_t k) const { return main_term[k] + remainder[k]; }
};

KacRow kac_transition_row(const WalkParams& params, std::uint64_t start, std::uint64_t m);

// Closed-form bound on the oscillatory part's magnitude.
double kac_remainder_envelope(const WalkParams& params, std::uint64_t start,
                              std::uint64_t m, std::uint64_t k);

struct TailProbability {
  double value;
  double error_bound;  // half-width of the reported interval (0 when exact)
  bool fast_path;
};

// P(S_m >= threshold | S_0 = start): exact DP sum by default; for m >= n the
// geometric main-term tail plus a summed envelope bound on the neglected
// oscillatory mass.
TailProbability tail_probability(const WalkParams& params, std::uint64_t start,
                                 std::uint64_t m, std::uint64_t threshold);

// Sum of the geometric main term over sites >= threshold on one parity
// class (parity = 0 for even sites, 1 for odd). Zero when beta = 0, since
// the main term itself vanishes.
double geometric_main_term_tail(const WalkParams& params, int parity,
                                std::uint64_t threshold);

// P(max_{i<=m} |W_i| >= k) for the unreflected simple walk from 0, computed
// exactly by an absorbing-boundary DP on the integer interval (-k, k).
double max_abs_simple_walk_tail_exact(std::uint64_t m, std::uint64_t k);

}  // namespace brwlab
