#include "graphmatch/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "graphmatch/errors.hpp"
#include "graphmatch/rng.hpp"

namespace graphmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kModeTol = 1e-9;

void check_instance_shape(const MatchInstance& inst) {
    if (inst.n < 0) throw ConfigError("instance has negative n");
    const std::size_t m = static_cast<std::size_t>(num_edge_slots(inst.n));
    if (inst.A.size() != m || inst.B.size() != m)
        throw ConfigError("instance edge arrays do not match n");
    if (inst.pi_true.size() != inst.n) throw ConfigError("instance pi_true does not match n");
}

int as_bit(double x) { return x > 0.5 ? 1 : 0; }

// Log-likelihood of the observed pair under the candidate relabeling, given
// as its induced edge permutation: sum over slots of the log joint pmf
// (binary) or log joint density (gaussian) of (A at relabeled slot, B at slot).
double candidate_log_weight(const MatchInstance& inst, const CorrelationModel& model,
                            const Permutation& edge_perm) {
    const std::int64_t m = num_edge_slots(inst.n);
    if (is_gaussian(model)) {
        const double rho = std::get<Gaussian>(model).rho;
        if (std::fabs(rho) == 1.0) {
            // Degenerate coupling: B must equal rho * (relabeled A) exactly;
            // candidates are scored 0 / -inf (the shared density of A drops).
            for (std::int64_t e = 0; e < m; ++e)
                if (std::fabs(inst.B[e] - rho * inst.A[edge_perm(static_cast<int>(e))]) > 1e-9)
                    return -kInf;
            return 0.0;
        }
        const double var = 1.0 - rho * rho;
        double sum = 0.0;
        for (std::int64_t e = 0; e < m; ++e) {
            const double a = inst.A[edge_perm(static_cast<int>(e))];
            const double r = inst.B[e] - rho * a;
            sum += -0.5 * a * a - 0.5 * r * r / var;
        }
        const double pi2 = 2.0 * std::numbers::pi;
        return sum - static_cast<double>(m) * (std::log(pi2) + 0.5 * std::log(var));
    }
    const GeneralER cells = to_cells(model);
    const double logc[2][2] = {
        {cells.p00 > 0.0 ? std::log(cells.p00) : -kInf,
         cells.p01 > 0.0 ? std::log(cells.p01) : -kInf},
        {cells.p10 > 0.0 ? std::log(cells.p10) : -kInf,
         cells.p11 > 0.0 ? std::log(cells.p11) : -kInf},
    };
    double sum = 0.0;
    for (std::int64_t e = 0; e < m; ++e) {
        const double term =
            logc[as_bit(inst.A[edge_perm(static_cast<int>(e))])][as_bit(inst.B[e])];
        if (term == -kInf) return -kInf;
        sum += term;
    }
    return sum;
}

double factorial_as_double(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

PosteriorResult exact_posterior(const MatchInstance& inst, int capacity) {
    return exact_posterior_under(inst, inst.model, capacity);
}

PosteriorResult exact_posterior_under(const MatchInstance& inst, const CorrelationModel& model,
                                      int capacity) {
    check_instance_shape(inst);
    validate_model(model);
    const int n = inst.n;
    if (n > capacity)
        throw CapacityError("exact posterior enumerates n! relabelings; refused for n = " +
                            std::to_string(n) + " (capacity " + std::to_string(capacity) + ")");

    PosteriorResult out;
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[i] = i;
    do {
        Permutation pi{img};
        out.log_weights.push_back(candidate_log_weight(inst, model, induced_edge_permutation(pi)));
        out.perms.push_back(std::move(pi));
    } while (std::next_permutation(img.begin(), img.end()));

    double max_lw = -kInf;
    for (const double lw : out.log_weights) max_lw = std::max(max_lw, lw);
    if (max_lw == -kInf)
        throw DomainError("observed pair has zero likelihood under every relabeling");

    double z = 0.0;
    for (const double lw : out.log_weights)
        if (lw != -kInf) z += std::exp(lw - max_lw);
    out.log_normalizer = max_lw + std::log(z);

    out.probs.resize(out.log_weights.size());
    double pmax = 0.0;
    for (std::size_t i = 0; i < out.log_weights.size(); ++i) {
        out.probs[i] =
            out.log_weights[i] == -kInf ? 0.0 : std::exp(out.log_weights[i] - out.log_normalizer);
        pmax = std::max(pmax, out.probs[i]);
    }
    for (std::size_t i = 0; i < out.probs.size(); ++i)
        if (out.probs[i] >= pmax - kModeTol) out.mode_set.push_back(i);
    return out;
}

CorrelationModel interpolated_model(const InterpolatedER& path) {
    const double p = path.p;
    const double s = path.s;
    const double theta = path.theta;
    if (!(p > 0.0) || !(p <= 1.0)) throw ConfigError("interpolated pair needs p in (0,1]");
    if (!(s > 0.0) || !(s <= 1.0)) throw ConfigError("interpolated pair needs s in (0,1]");
    const double q = p * s;
    if (!(q < 1.0)) throw ConfigError("interpolated pair needs edge density p*s < 1");
    if (!(theta >= q) || !(theta <= s))
        throw ConfigError("interpolation parameter theta must lie in [p*s, s]");
    GeneralER cells;
    cells.p11 = q * theta;
    cells.p10 = q * (1.0 - theta);
    cells.p01 = q * (1.0 - theta);
    cells.p00 = 1.0 - (2.0 - theta) * q;
    CorrelationModel model = cells;
    validate_model(model);
    return model;
}

CorrelationModel interpolated_model(const InterpolatedGaussian& path) {
    if (!(path.theta >= 0.0) || !(path.theta <= 1.0))
        throw ConfigError("interpolation parameter theta must lie in [0, 1]");
    CorrelationModel model = Gaussian{std::sqrt(path.theta)};
    validate_model(model);
    return model;
}

BinaryChannel interpolated_channel(const InterpolatedER& path) {
    // Validates and fixes q via the same path as interpolated_model.
    (void)interpolated_model(path);
    const double q = path.p * path.s;
    BinaryChannel ch;
    ch.p1_given_1 = path.theta;
    ch.p1_given_0 = q * (1.0 - path.theta) / (1.0 - q);
    return ch;
}

MmseEstimate mmse_of_relabeled_graph(const CorrelationModel& model, int n, int trials,
                                     std::uint64_t seed, int capacity) {
    validate_model(model);
    if (is_gaussian(model))
        throw UnsupportedModelError(
            "mmse of the relabeled graph is implemented for binary models only");
    if (n > capacity)
        throw CapacityError("mmse estimation runs an exact posterior per trial; refused for n = " +
                            std::to_string(n) + " (capacity " + std::to_string(capacity) + ")");
    if (trials < 1) throw ConfigError("mmse estimation needs trials >= 1");

    const std::int64_t m = num_edge_slots(n);
    std::vector<double> sq_errors(static_cast<std::size_t>(trials), 0.0);

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
        const MatchInstance inst =
            sample_instance(model, n, substream_seed(seed, static_cast<std::uint64_t>(t)));
        const PosteriorResult post = exact_posterior(inst, capacity);

        std::vector<double> xhat(static_cast<std::size_t>(m), 0.0);
        for (std::size_t k = 0; k < post.perms.size(); ++k) {
            if (post.probs[k] == 0.0) continue;
            const Permutation edge_perm = induced_edge_permutation(post.perms[k]);
            for (std::int64_t e = 0; e < m; ++e)
                xhat[static_cast<std::size_t>(e)] +=
                    post.probs[k] * inst.A[edge_perm(static_cast<int>(e))];
        }

        const Permutation true_edge_perm = induced_edge_permutation(inst.pi_true);
        double sq = 0.0;
        for (std::int64_t e = 0; e < m; ++e) {
            const double diff =
                inst.A[true_edge_perm(static_cast<int>(e))] - xhat[static_cast<std::size_t>(e)];
            sq += diff * diff;
        }
        sq_errors[static_cast<std::size_t>(t)] = sq;
    }

    double mean = 0.0;
    for (const double v : sq_errors) mean += v;
    mean /= trials;
    double var = 0.0;
    for (const double v : sq_errors) var += (v - mean) * (v - mean);

    MmseEstimate out;
    out.mmse = mean;
    out.std_error =
        trials > 1 ? std::sqrt(var / (static_cast<double>(trials) * (trials - 1))) : 0.0;
    out.trials = trials;
    return out;
}

MutualInformationResult exact_mutual_information(const CorrelationModel& model, int n,
                                                 int capacity) {
    validate_model(model);
    if (is_gaussian(model))
        throw UnsupportedModelError(
            "exact mutual information is implemented for binary models only");
    if (n > capacity)
        throw CapacityError("exact mutual information enumerates 4^(n(n-1)/2) outcomes; "
                            "refused for n = " +
                            std::to_string(n) + " (capacity " + std::to_string(capacity) + ")");

    const GeneralER cells = to_cells(model);
    const double pcell[2][2] = {{cells.p00, cells.p01}, {cells.p10, cells.p11}};

    MutualInformationResult out;
    out.slots = num_edge_slots(n);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (pcell[a][b] > 0.0) out.h_per_slot -= pcell[a][b] * std::log(pcell[a][b]);

    // Edge-slot permutation of every candidate relabeling, flattened.
    const int m = static_cast<int>(out.slots);
    std::vector<std::vector<int>> edge_perms;
    {
        std::vector<int> img(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) img[i] = i;
        do {
            edge_perms.push_back(induced_edge_permutation(Permutation{img}).img);
        } while (std::next_permutation(img.begin(), img.end()));
    }
    const double inv_nfact = 1.0 / factorial_as_double(n);

    const std::uint64_t lim = 1ull << m;
    // Entropy contributions partitioned by the A-side outcome so the final
    // reduction is a fixed-order serial sum.
    std::vector<double> h_partial(static_cast<std::size_t>(lim), 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t amask = 0; amask < static_cast<std::int64_t>(lim); ++amask) {
        double acc = 0.0;
        for (std::uint64_t bmask = 0; bmask < lim; ++bmask) {
            double pjoint = 0.0;
            for (const std::vector<int>& ep : edge_perms) {
                double prod = 1.0;
                for (int e = 0; e < m; ++e) {
                    const int abit = static_cast<int>((static_cast<std::uint64_t>(amask) >>
                                                       static_cast<unsigned>(ep[e])) &
                                                      1u);
                    const int bbit =
                        static_cast<int>((bmask >> static_cast<unsigned>(e)) & 1u);
                    prod *= pcell[abit][bbit];
                    if (prod == 0.0) break;
                }
                pjoint += prod;
            }
            pjoint *= inv_nfact;
            if (pjoint > 0.0) acc -= pjoint * std::log(pjoint);
        }
        h_partial[static_cast<std::size_t>(amask)] = acc;
    }
    for (const double v : h_partial) out.h_joint += v;

    out.mi = out.h_joint - static_cast<double>(out.slots) * out.h_per_slot;
    return out;
}

} // namespace graphmatch
