#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphmatch/models.hpp"

namespace graphmatch {

// Alignment score <A^{pi'}, B> = sum over slots {i,j} of
// A[slot of {pi'(i), pi'(j)}] * B[slot of {i,j}].
// The maximum-likelihood relabeling maximizes this for positively correlated
// models and minimizes it for negatively correlated ones.
double objective(const MatchInstance& inst, const Permutation& pi_cand);

struct MatchResult {
    Permutation pi_hat;          // lexicographically smallest optimizer found
    double objective_value = 0.0;
    std::int64_t optimizer_count = 0; // permutations attaining the optimum (exhaustive only)
    std::int64_t evaluations = 0;     // candidate assessments performed
    std::string method;
    // True when the model's correlation sign is zero: every correspondence is
    // equally likely a priori and the reported optimizer carries no evidence.
    bool degenerate_sign = false;
};

struct ExactOptions {
    // Objective direction; defaults to the model's correlation sign
    // (maximize for positive, minimize for negative, maximize by convention
    // at zero sign — flagged via MatchResult::degenerate_sign).
    std::optional<bool> maximize;
    // Refuse instances whose n! enumeration would exceed this n.
    int capacity = 10;
};

// Exhaustive search over all n! relabelings. Work is split across the n
// choices of the first image and each branch walks its (n-1)! completions
// with O(n) incremental objective updates; results are merged in branch
// order, so the outcome is identical for any worker count. Ties within
// 1e-9*(1+|best|) are counted together and resolved to the lexicographically
// smallest optimizer.
MatchResult solve_exact(const MatchInstance& inst, const ExactOptions& opts = {});

// Serial reference: lexicographic enumeration with a full objective
// recomputation per candidate. Same contract; kept as the independent slow
// path for tests and benchmarks.
MatchResult solve_exact_reference(const MatchInstance& inst, const ExactOptions& opts = {});

struct LocalOptions {
    std::optional<bool> maximize;
    int restarts = 32;
    std::uint64_t seed = 0;
    // Use pi_true as the first start (the remaining starts stay random).
    bool include_truth_start = false;
};

// Steepest-ascent hill climbing over transposition neighborhoods. Each
// restart r draws its start from substream_seed(seed, r); per step the best
// strictly-improving swap is applied (ties to the lexicographically smallest
// pair), deltas are maintained incrementally in O(n^2) per step, and the
// final objective is recomputed from scratch. Restarts run in parallel and
// merge in restart order (earlier restart wins ties), so results do not
// depend on the worker count.
MatchResult solve_local(const MatchInstance& inst, const LocalOptions& opts = {});

struct TranspositionStat {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

// For every vertex pair {i,j}, the objective loss incurred by swapping i and
// j in the candidate map (default: the planted pi_true):
//   sum over k not in {i,j} of (Ap[i][k]-Ap[j][k]) * (B[i][k]-B[j][k]),
// where Ap is A relabeled by the candidate. A negative value means the swap
// strictly improves the alignment score, i.e. the candidate is not the MLE.
std::vector<TranspositionStat> transposition_scan(const MatchInstance& inst,
                                                  const Permutation* at = nullptr);

} // namespace graphmatch
