#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphmatch/models.hpp"

namespace graphmatch {

// Parameter grid for a recovery experiment. Exactly one parameter axis per
// family. Gaussian takes `rho` directly or the normalized strength
// x = n rho^2 / log n, resolved as rho = sqrt(x log n / n). The subsampled
// pair takes `p` crossed with either `s` directly or the normalized strength
// x = n p s^2 (log(1/p) - 1 + p) / log n, resolved for s.
struct SweepConfig {
    std::string family;       // "gaussian" | "subsampled_er"
    std::vector<int> n_values;
    std::vector<double> rho;  // gaussian, direct
    std::vector<double> x;    // normalized strength (either family)
    std::vector<double> p;    // subsampled, parent density
    std::vector<double> s;    // subsampled, direct
    int trials = 100;
    std::string estimator = "exact"; // "exact" | "local"
    int restarts = 32;               // local search only
    int exact_capacity = 10;         // exhaustive search only
    std::uint64_t base_seed = 0;
    std::vector<double> deltas;      // overlap levels for P(overlap >= delta)
    // When false (default) runtime_ms is reported as 0 so output files are
    // byte-identical across machines and worker counts; when true each trial
    // records wall time.
    bool collect_timing = false;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json sweep_config_to_json(const SweepConfig& cfg);

// One resolved (model, n) grid point. A subsampled pair denser than 1/2 is
// replaced by its complement pair (same recovery problem, faster and with the
// objective direction positive); `params` then records both parameter sets.
struct SweepCell {
    CorrelationModel model; // model actually sampled and solved
    int n = 0;
    std::uint64_t cell_hash = 0; // FNV-1a of the canonical cell JSON
    std::string params;          // parameter string recorded in every row
    bool flipped = false;
};

std::vector<SweepCell> resolve_cells(const SweepConfig& cfg);

struct TrialRecord {
    std::string model;  // family of the solved model
    std::string variant_params;
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0; // trial_seed(base_seed, cell_hash, trial)
    std::string estimator;
    double objective = 0.0;
    double overlap = 0.0;
    int exact = 0; // 1 iff pi_hat == pi_true
    int d = 0;     // vertices where pi_hat differs from pi_true
    double runtime_ms = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<TrialRecord> records; // cell-major, trial-minor
};

// Runs every (cell, trial) job. Jobs are independent — each trial's seed is a
// pure function of (base_seed, cell_hash, trial) — and results land in
// preassigned slots, so output is identical for any worker count. The local
// estimator's restart stream is substream_seed(record seed, 1).
SweepResult run_sweep(const SweepConfig& cfg);

// Header + one row per record; floats printed with %.17g.
std::string records_to_csv(const std::vector<TrialRecord>& records);

struct CellSummary {
    std::string model;
    std::string variant_params;
    int n = 0;
    int trials = 0;
    double mean_overlap = 0.0;
    double mean_overlap_halfwidth = 0.0; // 1.96 * standard error
    double p_exact = 0.0;
    double p_exact_lo = 0.0; // 95% Wilson interval
    double p_exact_hi = 0.0;
    std::vector<double> deltas;
    std::vector<double> p_overlap_ge;
    std::vector<double> p_overlap_ge_lo;
    std::vector<double> p_overlap_ge_hi;
};

std::vector<CellSummary> aggregate(const SweepResult& result, const std::vector<double>& deltas);
nlohmann::json summaries_to_json(const std::vector<CellSummary>& summaries);

} // namespace graphmatch
