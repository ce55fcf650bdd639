#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "graphmatch/permutation.hpp"
#include "graphmatch/rng.hpp"

namespace graphmatch {

// Correlated pair of edge-weight vectors (A, B) over the same vertex set,
// with a hidden relabeling pi: the pair (A[slot of {pi(i),pi(j)}], B[slot of {i,j}])
// is drawn i.i.d. across slots from the per-pair coupling below.

// Jointly standard-normal pair with correlation rho.
struct Gaussian {
    double rho;
};

// Both graphs are independent s-subsamples of one parent G(n,p) graph.
struct SubsampledER {
    double p;
    double s;
};

// Arbitrary joint law of a 0/1 pair: cells[a][b] = P(A=a, B=b).
struct GeneralER {
    double p11, p10, p01, p00;
};

using CorrelationModel = std::variant<Gaussian, SubsampledER, GeneralER>;

// Throws ConfigError naming the offending field.
void validate_model(const CorrelationModel& model);

bool is_gaussian(const CorrelationModel& model);

// Four-cell pmf of an ER-type model; Gaussian input is unsupported.
GeneralER to_cells(const CorrelationModel& model);

// Marginal edge density q = P(A=1) for ER-type models (equal-marginal check
// is enforced for GeneralER where needed by callers).
double edge_density(const GeneralER& cells);

enum class CorrelationSign { negative, zero, positive };

// Sign of the coupling: Gaussian -> sign(rho); ER -> sign(p11*p00 - p01*p10).
CorrelationSign correlation_sign(const CorrelationModel& model);

// Complement both graphs of a subsampled pair: (p,s) -> (p',s') with
// p' = (1-ps)^2/(1-2ps+ps^2), s' = (1-2ps+ps^2)/(1-ps). Involution; p's' = 1-ps.
SubsampledER flip_model(const SubsampledER& model);

// Short stable names used in CSV output and JSON.
std::string model_name(const CorrelationModel& model);
std::string variant_params_string(const CorrelationModel& model);

nlohmann::json model_to_json(const CorrelationModel& model);
CorrelationModel model_from_json(const nlohmann::json& j);

// --- Instances ---------------------------------------------------------------

enum class PiMode { uniform, identity, given };

struct MatchInstance {
    int n = 0;
    CorrelationModel model{Gaussian{0.0}};
    std::uint64_t seed = 0;
    Permutation pi_true;
    std::vector<double> A; // edge-slot weights of the first graph
    std::vector<double> B; // edge-slot weights of the second graph
};

// Draw an instance. All randomness comes from a counter stream keyed by
// `seed`; the draw order (pi, then slots of B in linear order for ER; pi,
// then A, then the noise vector for Gaussian) is part of the contract, so a
// (model, n, pi_mode, seed) tuple reproduces bit-identical instances.
MatchInstance sample_instance(const CorrelationModel& model, int n, std::uint64_t seed,
                              PiMode pi_mode = PiMode::uniform,
                              const Permutation* given_pi = nullptr);

nlohmann::json instance_to_json(const MatchInstance& inst);
MatchInstance instance_from_json(const nlohmann::json& j);

} // namespace graphmatch
