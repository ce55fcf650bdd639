#pragma once

#include <cstdint>
#include <vector>

#include "graphmatch/models.hpp"

namespace graphmatch {

// Posterior over all n! relabelings of one instance under a uniform prior.
struct PosteriorResult {
    std::vector<Permutation> perms;    // lexicographic order of one-line notation
    std::vector<double> log_weights;   // per-candidate log-likelihoods (may be -inf)
    std::vector<double> probs;         // normalized posterior
    std::vector<std::size_t> mode_set; // indices whose probability is within 1e-9 of the max
    double log_normalizer = 0.0;       // log sum_i exp(log_weights[i])
};

// Full-enumeration posterior under the instance's own model; n is capped by
// `capacity` (n! growth).
PosteriorResult exact_posterior(const MatchInstance& inst, int capacity = 7);

// Same, but scores the observed pair under `model` instead of the model that
// generated the instance (e.g. a mismatched or interpolated coupling).
PosteriorResult exact_posterior_under(const MatchInstance& inst, const CorrelationModel& model,
                                      int capacity = 7);

// One-parameter couplings that slide between the independent pair and the
// planted pair while holding both edge marginals fixed.

struct InterpolatedER {
    double p;     // parent density of the endpoint pair
    double s;     // subsampling rate of the endpoint pair
    double theta; // in [q, s], q = p*s: theta = q independent, theta = s planted
};

struct InterpolatedGaussian {
    double theta; // in [0, 1], the squared correlation: 0 independent, 1 identical
};

CorrelationModel interpolated_model(const InterpolatedER& path);
CorrelationModel interpolated_model(const InterpolatedGaussian& path);

// Conditional law P(B-edge = 1 | A-edge) of the interpolated binary pair.
struct BinaryChannel {
    double p1_given_1 = 0.0; // = theta
    double p1_given_0 = 0.0; // = q(1-theta)/(1-q)
};
BinaryChannel interpolated_channel(const InterpolatedER& path);

// Monte Carlo estimate of E || X - E[X | A,B] ||^2 where X is the relabeled
// first graph (X_e = A at slot sigma_pi(e)) and the posterior mean is exact.
// Binary models only; n is capped by `capacity`.
struct MmseEstimate {
    double mmse = 0.0;
    double std_error = 0.0;
    int trials = 0;
};
MmseEstimate mmse_of_relabeled_graph(const CorrelationModel& model, int n, int trials,
                                     std::uint64_t seed, int capacity = 5);

// Exact mutual information I(pi; A,B) in nats between the hidden relabeling
// and the observed pair, by full enumeration of all 2^(2m) joint outcomes,
// m = n(n-1)/2. Binary models only; n is capped by `capacity`.
struct MutualInformationResult {
    double mi = 0.0;
    double h_joint = 0.0;    // H(A,B)
    double h_per_slot = 0.0; // entropy of the four-cell pmf
    std::int64_t slots = 0;  // m
};
MutualInformationResult exact_mutual_information(const CorrelationModel& model, int n,
                                                 int capacity = 4);

} // namespace graphmatch
