// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and pins its own tolerances.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "graphmatch/bayes.hpp"
#include "graphmatch/errors.hpp"
#include "graphmatch/estimators.hpp"
#include "graphmatch/models.hpp"
#include "graphmatch/oracles.hpp"
#include "graphmatch/parallel.hpp"
#include "graphmatch/permutation.hpp"
#include "graphmatch/rng.hpp"
#include "graphmatch/sweep.hpp"
#include "graphmatch/theory.hpp"

using namespace graphmatch;

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

class Criterion {
  public:
    Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

    void expect(bool cond, const std::string& detail) {
        ++checks_;
        if (!cond) {
            ++failures_;
            if (first_failure_.empty()) first_failure_ = detail;
        }
    }

    void note(std::string text) { notes_.push_back(std::move(text)); }

    void fail(const std::string& detail) { expect(false, detail); }

    // Prints the verdict line; returns true iff the criterion passed.
    bool report(double seconds, double budget_seconds) {
        if (budget_seconds > 0.0 && !(seconds < budget_seconds)) {
            ++failures_;
            if (first_failure_.empty())
                first_failure_ = "runtime " + g17(seconds) + " s exceeds budget " +
                                 g17(budget_seconds) + " s";
        }
        if (failures_ == 0) {
            std::printf("PASS criterion %d: %s [%d checks, %.2f s]\n", id_, title_.c_str(),
                        checks_, seconds);
        } else {
            std::printf("FAIL criterion %d: %s [%d of %d checks failed; first: %s]\n", id_,
                        title_.c_str(), failures_, checks_, first_failure_.c_str());
        }
        for (const std::string& n : notes_) std::printf("  note: %s\n", n.c_str());
        return failures_ == 0;
    }

  private:
    int id_;
    std::string title_;
    int checks_ = 0;
    int failures_ = 0;
    std::string first_failure_;
    std::vector<std::string> notes_;
};

struct ThreadGuard {
    int saved = max_threads();
    ~ThreadGuard() { set_threads(saved); }
};

// Lexicographic enumeration of all candidates with their objective values;
// returns the indices attaining the maximum (0/1 graphs: values are exact
// small integers, so == comparison is exact).
std::vector<std::size_t> exhaustive_argmax_set(const MatchInstance& inst) {
    std::vector<int> img(static_cast<std::size_t>(inst.n));
    for (int i = 0; i < inst.n; ++i) img[static_cast<std::size_t>(i)] = i;
    std::vector<double> values;
    do {
        values.push_back(objective(inst, Permutation{img}));
    } while (std::next_permutation(img.begin(), img.end()));
    const double best = *std::max_element(values.begin(), values.end());
    std::vector<std::size_t> arg;
    for (std::size_t k = 0; k < values.size(); ++k)
        if (values[k] == best) arg.push_back(k);
    return arg;
}

// --- criterion 1 -------------------------------------------------------------

void criterion1(Criterion& c) {
    for (const double p : {0.05, 0.3}) {
        for (const double s : {0.2, 0.8}) {
            const CorrelationModel m = SubsampledER{p, s};
            const GeneralER cells = to_cells(m);
            for (const double t : {0.1, 0.5}) {
                for (int k = 1; k <= 5; ++k) {
                    c.expect(rel_close(orbit_mgf_m(m, t, k),
                                       oracles::orbit_mgf_m_enumerated(cells, t, k), 1e-12),
                             "M mismatch at p=" + g17(p) + " s=" + g17(s) + " t=" + g17(t) +
                                 " k=" + std::to_string(k));
                    c.expect(rel_close(orbit_mgf_l(m, t, k),
                                       oracles::orbit_mgf_l_enumerated(cells, t, k), 1e-12),
                             "L mismatch at p=" + g17(p) + " s=" + g17(s) + " t=" + g17(t) +
                                 " k=" + std::to_string(k));
                }
            }
        }
    }
}

// --- criterion 2 -------------------------------------------------------------

void criterion2(Criterion& c) {
    constexpr std::int64_t kSamples = 10'000'000;
    constexpr std::uint64_t kSeed = 20240817;
    for (const double rho : {0.3, 0.7}) {
        for (const double f : {0.3, 0.6}) {
            const double t = f / (1.0 + rho);
            for (const int k : {1, 2, 3}) {
                const double closed = orbit_mgf_m(Gaussian{rho}, t, k);
                const auto mc = oracles::orbit_mgf_m_gaussian_mc(rho, t, k, kSamples, kSeed);
                c.expect(std::fabs(mc.mean - closed) <= 0.01 * closed,
                         "M Monte Carlo off by " +
                             g17(std::fabs(mc.mean - closed) / closed) + " rel at rho=" +
                             g17(rho) + " t=" + g17(t) + " k=" + std::to_string(k));
            }
        }
        const double tl = 0.3 / (1.0 + rho);
        for (const int k : {1, 2, 3}) {
            const double closed = orbit_mgf_l(Gaussian{rho}, tl, k);
            const auto mc = oracles::orbit_mgf_l_gaussian_mc(rho, tl, k, kSamples, kSeed);
            c.expect(std::fabs(mc.mean - closed) <= 0.01 * closed,
                     "L Monte Carlo off at rho=" + g17(rho) + " k=" + std::to_string(k));
        }
    }
}

// --- criterion 3 -------------------------------------------------------------

void criterion3(Criterion& c) {
    for (const CorrelationModel m :
         {CorrelationModel{SubsampledER{0.3, 0.6}}, CorrelationModel{SubsampledER{0.05, 0.9}},
          CorrelationModel{Gaussian{0.2}}, CorrelationModel{Gaussian{0.8}}}) {
        double tmax;
        if (is_gaussian(m)) {
            const double rho = std::get<Gaussian>(m).rho;
            tmax = std::min(1.0 / (1.0 + rho),
                            (rho + 1.0) / (2.0 * (1.0 - rho * rho)));
        } else {
            tmax = 1.5;
        }
        for (const double f : {0.15, 0.5, 0.85}) {
            const MgfPowerBounds b = mgf_power_bounds(m, f * tmax, 12);
            c.expect(b.max_violation_m <= 1e-12,
                     "M_k power bound violated by " + g17(b.max_violation_m) + " for " +
                         variant_params_string(m) + " at t=" + g17(f * tmax));
            c.expect(b.max_violation_l <= 1e-12,
                     "L_k power bound violated by " + g17(b.max_violation_l) + " for " +
                         variant_params_string(m) + " at t=" + g17(f * tmax));
        }
    }
}

// --- criterion 4 -------------------------------------------------------------

void criterion4(Criterion& c) {
    for (const double p : {0.01, 0.1, 0.4}) {
        for (const double s : {0.2, 0.9}) {
            if (p * s > 0.5) continue;
            const double lp = std::log(1.0 / p);
            for (const double t : {0x1.0p-10, 0.25 * lp, lp}) {
                const M2Bounds b = m2_upper_bounds(p, s, t);
                if (t <= lp) {
                    c.expect(b.bound_moderate_tilt.has_value(),
                             "moderate-tilt bound missing at p=" + g17(p) + " t=" + g17(t));
                    if (b.bound_moderate_tilt)
                        c.expect(*b.bound_moderate_tilt >= b.m2_exact - 1e-12,
                                 "moderate-tilt bound below exact M2 at p=" + g17(p) +
                                     " s=" + g17(s) + " t=" + g17(t));
                }
                if (t <= 0x1.0p-10) {
                    c.expect(b.bound_small_tilt.has_value(),
                             "small-tilt bound missing at p=" + g17(p));
                    if (b.bound_small_tilt)
                        c.expect(*b.bound_small_tilt >= b.m2_exact - 1e-12,
                                 "small-tilt bound below exact M2 at p=" + g17(p) +
                                     " s=" + g17(s));
                }
                c.expect(b.m1sq_over_m2 <= std::exp(2.0) + 1e-12,
                         "M1^2/M2 above e^2 at p=" + g17(p) + " s=" + g17(s) +
                             " t=" + g17(t));
            }
        }
    }
}

// --- criterion 5 -------------------------------------------------------------

void criterion5(Criterion& c) {
    for (const double p : {0.05, 0.3, 0.6}) {
        for (const double s : {0.2, 0.5, 0.9}) {
            const GeneralER cells = to_cells(SubsampledER{p, s});
            const double tstar = 0.5 * std::log((cells.p00 * cells.p11) /
                                                (cells.p01 * cells.p10));
            const double hel =
                std::sqrt(cells.p00 * cells.p11) - std::sqrt(cells.p01 * cells.p10);
            c.expect(rel_close(orbit_mgf_l(SubsampledER{p, s}, tstar, 2),
                               1.0 - 2.0 * hel * hel, 1e-12),
                     "binary optimal-tilt identity off at p=" + g17(p) + " s=" + g17(s));
        }
    }
    const GeneralER asym{0.3, 0.15, 0.15, 0.4};
    const double tstar = 0.5 * std::log((0.4 * 0.3) / (0.15 * 0.15));
    c.expect(rel_close(orbit_mgf_l(asym, tstar, 2), 0.92284609690826525, 1e-12),
             "asymmetric-cell optimal-tilt value drifted");
    for (const double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double tstar_g = rho / (2.0 * (1.0 - rho * rho));
        c.expect(rel_close(orbit_mgf_l(Gaussian{rho}, tstar_g, 2),
                           std::sqrt(1.0 - rho * rho), 1e-12),
                 "gaussian optimal-tilt identity off at rho=" + g17(rho));
    }
}

// --- criterion 6 -------------------------------------------------------------

void criterion6(Criterion& c) {
    CounterRng rng(20260819);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_below(29)); // n in [2, 30]
        const Permutation sigma = random_permutation(n, rng);
        const OrbitDecomposition od = orbit_decomposition(sigma);

        std::int64_t node_sum = 0;
        for (std::size_t k = 1; k < od.node_count_by_length.size(); ++k)
            node_sum += static_cast<std::int64_t>(k) * od.node_count_by_length[k];
        c.expect(node_sum == n, "node orbit lengths do not sum to n at rep " +
                                    std::to_string(rep));

        std::int64_t edge_sum = 0;
        for (std::size_t k = 1; k < od.edge_count_by_length.size(); ++k)
            edge_sum += static_cast<std::int64_t>(k) * od.edge_count_by_length[k];
        c.expect(edge_sum == num_edge_slots(n),
                 "edge orbit lengths do not sum to the slot count at rep " +
                     std::to_string(rep));

        const std::int64_t n1 =
            od.node_count_by_length.size() > 1 ? od.node_count_by_length[1] : 0;
        const std::int64_t n2 =
            od.node_count_by_length.size() > 2 ? od.node_count_by_length[2] : 0;
        const std::int64_t fixed_edges =
            od.edge_count_by_length.size() > 1 ? od.edge_count_by_length[1] : 0;
        c.expect(fixed_edges == n1 * (n1 - 1) / 2 + n2,
                 "fixed-edge identity broken at rep " + std::to_string(rep));

        // Every displaced vertex forces at least (n-2)/2 displaced edge slots.
        const std::int64_t displaced_nodes = n - n1;
        c.expect(2 * (num_edge_slots(n) - fixed_edges) >=
                     static_cast<std::int64_t>(n - 2) * displaced_nodes,
                 "displaced-edge lower bound broken at rep " + std::to_string(rep));
    }
}

// --- criterion 7 -------------------------------------------------------------

void criterion7(Criterion& c) {
    for (const double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (const double s : {0.2, 0.5, 0.8, 1.0}) {
            const SubsampledER m{p, s};
            const SubsampledER f = flip_model(m);
            const SubsampledER ff = flip_model(f);
            c.expect(std::fabs(ff.p - m.p) <= 1e-12 && std::fabs(ff.s - m.s) <= 1e-12,
                     "flip is not an involution at p=" + g17(p) + " s=" + g17(s));
            c.expect(std::fabs(f.p * f.s - (1.0 - p * s)) <= 1e-12,
                     "flipped density is not the complement at p=" + g17(p) + " s=" + g17(s));
        }
    }

    for (std::uint64_t seed = 601; seed <= 650; ++seed) {
        const SubsampledER model{0.35, 0.8};
        const MatchInstance inst = sample_instance(model, 6, seed);
        MatchInstance comp = inst;
        comp.model = flip_model(model);
        for (double& v : comp.A) v = 1.0 - v;
        for (double& v : comp.B) v = 1.0 - v;
        // Optimizer sets by full enumeration on both sides.
        c.expect(exhaustive_argmax_set(inst) == exhaustive_argmax_set(comp),
                 "optimizer set changed under complement at seed " + std::to_string(seed));
        const MatchResult r = solve_exact(inst);
        const MatchResult rc = solve_exact(comp);
        c.expect(r.pi_hat == rc.pi_hat && r.optimizer_count == rc.optimizer_count,
                 "reported optimizer changed under complement at seed " +
                     std::to_string(seed));
    }
}

// --- criterion 8 -------------------------------------------------------------

void criterion8(Criterion& c) {
    for (int i = 0; i < 100; ++i) {
        const CorrelationModel model =
            (i % 2 == 0) ? CorrelationModel(SubsampledER{0.5, 0.8})
                         : CorrelationModel(GeneralER{0.4, 0.1, 0.1, 0.4});
        const MatchInstance inst =
            sample_instance(model, 5, 1200 + static_cast<std::uint64_t>(i));
        const PosteriorResult post = exact_posterior(inst);
        const std::vector<std::size_t> arg = exhaustive_argmax_set(inst);
        std::vector<std::size_t> modes;
        for (const auto k : post.mode_set) modes.push_back(static_cast<std::size_t>(k));
        c.expect(modes == arg,
                 "posterior modes differ from the optimizer set at seed " +
                     std::to_string(1200 + i));
        const MatchResult r = solve_exact(inst);
        c.expect(post.perms[static_cast<std::size_t>(post.mode_set.front())] == r.pi_hat,
                 "first posterior mode is not the reported optimizer at seed " +
                     std::to_string(1200 + i));
    }
}

// --- criterion 9 -------------------------------------------------------------

void criterion9(Criterion& c) {
    const std::vector<CorrelationModel> grid{
        SubsampledER{0.3, 0.9},  SubsampledER{0.7, 0.5},
        SubsampledER{0.5, 1.0},  GeneralER{0.4, 0.1, 0.1, 0.4},
        GeneralER{0.25, 0.25, 0.25, 0.25}, GeneralER{0.1, 0.2, 0.3, 0.4}};
    for (const CorrelationModel& m : grid) {
        const double per_slot = oracles::discrete_mi(to_cells(m));
        for (const int n : {3, 4}) {
            const MutualInformationResult r = exact_mutual_information(m, n);
            c.expect(r.mi >= -1e-12, "relabeling information negative for " +
                                         variant_params_string(m) + " n=" +
                                         std::to_string(n));
            c.expect(r.mi <= static_cast<double>(r.slots) * per_slot + 1e-9,
                     "per-slot information bound broken for " + variant_params_string(m) +
                         " n=" + std::to_string(n));
        }
    }
}

// --- criterion 10 ------------------------------------------------------------

void criterion10(Criterion& c) {
    const double p = 0.6, s = 0.9;
    const double thetas[5] = {0.54, 0.63, 0.72, 0.81, 0.90};
    MmseEstimate est[5];
    for (int i = 0; i < 5; ++i) {
        const CorrelationModel m = interpolated_model(InterpolatedER{p, s, thetas[i]});
        est[i] = mmse_of_relabeled_graph(m, 4, 4000, 909 + static_cast<std::uint64_t>(i));
    }
    // Independent endpoint agrees with its closed form.
    const double q = p * s;
    c.expect(std::fabs(est[0].mmse - 5.0 * q * (1.0 - q)) <= 4.0 * est[0].std_error,
             "independent endpoint off its closed form: " + g17(est[0].mmse));
    for (int i = 0; i + 1 < 5; ++i)
        c.expect(est[i].mmse - est[i + 1].mmse >
                     3.0 * (est[i].std_error + est[i + 1].std_error),
                 "reconstruction error not separated at theta=" + g17(thetas[i]) + " -> " +
                     g17(thetas[i + 1]) + " (" + g17(est[i].mmse) + " vs " +
                     g17(est[i + 1].mmse) + ")");
}

// --- criterion 11 ------------------------------------------------------------

void criterion11(Criterion& c) {
    const std::vector<std::tuple<double, double, int>> grid = {
        {0.8, 0.10, 5000}, {0.8, 0.10, 10000}, {0.8, 0.15, 2000},
        {0.9, 0.10, 5000}, {0.9, 0.15, 2000},  {0.9, 0.15, 5000},
        {0.9, 0.15, 10000}, {0.9, 0.20, 2000}, {0.9, 0.20, 5000}};
    for (const auto& [p, s, n] : grid) {
        const GeneralER cells = to_cells(SubsampledER{p, s});
        const double a = 2.0 * cells.p00 * cells.p11;
        const double b = 2.0 * cells.p01 * cells.p10;
        // Finite-size surrogate hypotheses for the lower bound.
        c.expect(a * n >= 50.0, "surrogate hypothesis a*n >= 50 violated");
        c.expect(a / b >= 1.0 && a / b <= 25.0, "surrogate hypothesis on a/b violated");
        const double gap = std::sqrt(a) - std::sqrt(b);
        for (const double tau : {0.0, std::floor(0.1 * std::sqrt(a * n * std::log(n)))}) {
            const double exact = trinomial_tail(a, b, n, tau);
            const double bound =
                std::exp(-n * gap * gap - 0.25 * std::log(static_cast<double>(n)));
            c.expect(exact >= bound, "exact tail below the lower bound at p=" + g17(p) +
                                         " s=" + g17(s) + " n=" + std::to_string(n) +
                                         " tau=" + g17(tau));
        }
    }
}

// --- criterion 12 ------------------------------------------------------------

void criterion12(Criterion& c) {
    const int n = 12;
    const int instances = 100000;
    int point = 0;
    for (const auto& [p, s] : std::vector<std::pair<double, double>>{{0.3, 0.9}, {0.8, 0.2}}) {
        const GeneralER cells = to_cells(SubsampledER{p, s});
        const double a = 2.0 * cells.p00 * cells.p11;
        const double b = 2.0 * cells.p01 * cells.p10;
        std::int64_t plus = 0, minus = 0, zero = 0;
        for (int r = 0; r < instances; ++r) {
            const std::uint64_t seed =
                52000 + 200000ull * static_cast<std::uint64_t>(point) +
                static_cast<std::uint64_t>(r);
            const MatchInstance inst = sample_instance(SubsampledER{p, s}, n, seed);
            const Permutation ep = induced_edge_permutation(inst.pi_true);
            // One centered term per third vertex k: the change at slot pair
            // ((0,k),(1,k)) when vertices 0 and 1 swap roles.
            for (int k = 2; k < n; ++k) {
                const auto slot_i = edge_index(n, 0, k);
                const auto slot_j = edge_index(n, 1, k);
                const double ai = inst.A[static_cast<std::size_t>(ep(static_cast<int>(slot_i)))];
                const double aj = inst.A[static_cast<std::size_t>(ep(static_cast<int>(slot_j)))];
                const double bi = inst.B[static_cast<std::size_t>(slot_i)];
                const double bj = inst.B[static_cast<std::size_t>(slot_j)];
                const double term = (ai - aj) * (bi - bj);
                if (term > 0.5)
                    ++plus;
                else if (term < -0.5)
                    ++minus;
                else
                    ++zero;
            }
        }
        const double total = static_cast<double>(instances) * (n - 2);
        const double fplus = static_cast<double>(plus) / total;
        const double fminus = static_cast<double>(minus) / total;
        const double fzero = static_cast<double>(zero) / total;
        c.expect(std::fabs(fplus - a) <= 0.003, "P(+1) off by " + g17(std::fabs(fplus - a)) +
                                                    " at p=" + g17(p) + " s=" + g17(s));
        c.expect(std::fabs(fminus - b) <= 0.003,
                 "P(-1) off by " + g17(std::fabs(fminus - b)) + " at p=" + g17(p) +
                     " s=" + g17(s));
        c.expect(std::fabs(fzero - (1.0 - a - b)) <= 0.003,
                 "P(0) off by " + g17(std::fabs(fzero - (1.0 - a - b))) + " at p=" + g17(p) +
                     " s=" + g17(s));
        ++point;
    }
}

// --- criterion 13 ------------------------------------------------------------

void criterion13(Criterion& c) {
    const double xs[5] = {0.5, 1.0, 2.0, 4.0, 8.0};
    // Strengths 4 and 8 would need correlation above 1 at n = 8, so those two
    // cells run at the rho = 1 saturation point.
    SweepConfig cfg;
    cfg.family = "gaussian";
    cfg.n_values = {8};
    cfg.rho = {0.36050672165022074, 0.50983349508440445, 0.72101344330044148, 1.0, 1.0};
    cfg.trials = 500;
    cfg.estimator = "exact";
    cfg.exact_capacity = 8;
    cfg.base_seed = 20260819;
    cfg.deltas = {1.0};

    // The first three grid points are exactly sqrt(x log n / n).
    for (int i = 0; i < 3; ++i)
        c.expect(cfg.rho[static_cast<std::size_t>(i)] ==
                     std::sqrt(xs[i] * std::log(8.0) / 8.0),
                 "grid point " + std::to_string(i) + " does not match its strength label");

    const SweepResult result = run_sweep(cfg);
    const std::vector<CellSummary> summaries = aggregate(result, cfg.deltas);
    if (summaries.size() != 5) {
        c.fail("expected 5 summary rows");
        return;
    }

    std::string csv =
        "x,rho,n,trials,mean_overlap,mean_overlap_halfwidth,p_exact,p_exact_lo,p_exact_hi\n";
    for (std::size_t i = 0; i < 5; ++i) {
        const CellSummary& s = summaries[i];
        csv += g17(xs[i]) + ',' + g17(std::get<Gaussian>(result.cells[i].model).rho) + ',' +
               std::to_string(s.n) + ',' + std::to_string(s.trials) + ',' +
               g17(s.mean_overlap) + ',' + g17(s.mean_overlap_halfwidth) + ',' +
               g17(s.p_exact) + ',' + g17(s.p_exact_lo) + ',' + g17(s.p_exact_hi) + '\n';
    }

    const std::string golden_path =
        std::string(GRAPHMATCH_GOLDEN_DIR) + "/phase_gaussian_n8_summary.csv";
    std::ifstream in(golden_path, std::ios::binary);
    if (!in) {
        c.fail("cannot open golden summary " + golden_path);
        return;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    c.expect(csv == buf.str(), "summary CSV is not byte-identical to the golden file");

    // Trend: strictly increasing mean overlap with non-overlapping 95%
    // intervals across the four distinct grid points.
    for (std::size_t i = 0; i + 1 < 4; ++i)
        c.expect(summaries[i].mean_overlap + summaries[i].mean_overlap_halfwidth <
                     summaries[i + 1].mean_overlap - summaries[i + 1].mean_overlap_halfwidth,
                 "mean overlap intervals overlap between cells " + std::to_string(i) +
                     " and " + std::to_string(i + 1));

    // Frozen endpoint rates.
    c.expect(summaries[0].mean_overlap <= 0.45,
             "weakest cell recovers too much: " + g17(summaries[0].mean_overlap));
    c.expect(summaries[3].p_exact >= 0.85,
             "strongest cell recovers too little: " + g17(summaries[3].p_exact));

    // The two saturated cells are the same experiment and must agree
    // bit-for-bit, records included.
    const std::vector<TrialRecord> block3(result.records.begin() + 3 * 500,
                                          result.records.begin() + 4 * 500);
    const std::vector<TrialRecord> block4(result.records.begin() + 4 * 500,
                                          result.records.end());
    c.expect(records_to_csv(block3) == records_to_csv(block4),
             "saturated cells produced different records");
    c.note("strengths 4 and 8 exceed unit correlation at n = 8; both cells run at the "
           "rho = 1 saturation point, and the trend is asserted across the four distinct "
           "grid points");
}

// --- criterion 14 ------------------------------------------------------------

void criterion14(Criterion& c) {
    ThreadGuard guard;

    SweepConfig exact_cfg;
    exact_cfg.family = "gaussian";
    exact_cfg.n_values = {8};
    exact_cfg.rho = {0.5, 0.9};
    exact_cfg.trials = 100;
    exact_cfg.estimator = "exact";
    exact_cfg.base_seed = 7;

    SweepConfig local_cfg;
    local_cfg.family = "subsampled_er";
    local_cfg.n_values = {40};
    local_cfg.p = {0.4};
    local_cfg.s = {0.9};
    local_cfg.trials = 20;
    local_cfg.estimator = "local";
    local_cfg.restarts = 8;
    local_cfg.base_seed = 8;

    set_threads(1);
    const std::string exact1 = records_to_csv(run_sweep(exact_cfg).records);
    const std::string local1 = records_to_csv(run_sweep(local_cfg).records);
    set_threads(8);
    const std::string exact8 = records_to_csv(run_sweep(exact_cfg).records);
    const std::string local8 = records_to_csv(run_sweep(local_cfg).records);

    c.expect(exact1 == exact8, "exhaustive sweep differs between 1 and 8 workers");
    c.expect(local1 == local8, "local-search sweep differs between 1 and 8 workers");
}

struct Entry {
    int id;
    const char* title;
    void (*fn)(Criterion&);
    double budget_seconds; // 0 = no explicit budget
};

} // namespace

int main() {
    const Entry entries[] = {
        {1, "binary orbit-MGF closed forms match exhaustive slot enumeration", criterion1,
         1.0},
        {2, "gaussian orbit-MGF closed forms match 10M-sample Monte Carlo", criterion2, 30.0},
        {3, "orbit-MGF power bounds hold up to k = 12", criterion3, 0.0},
        {4, "closed-form 2-orbit MGF upper bounds dominate the exact value", criterion4, 0.0},
        {5, "optimal-tilt closed forms for the 2-orbit objective MGF", criterion5, 0.0},
        {6, "orbit-count identities hold on 1000 random permutations", criterion6, 1.0},
        {7, "complement flip coherence and optimizer-set invariance", criterion7, 0.0},
        {8, "posterior mode set equals the exhaustive optimizer set", criterion8, 0.0},
        {9, "exact relabeling information obeys the per-slot bound", criterion9, 120.0},
        {10, "posterior reconstruction error decreases along the interpolation path",
         criterion10, 0.0},
        {11, "exact trinomial tail dominates its inverse-Chernoff lower bound", criterion11,
         10.0},
        {12, "one-coordinate transposition statistic matches its three-point law",
         criterion12, 0.0},
        {13, "recovery rises across the strength grid and matches the golden summary",
         criterion13, 300.0},
        {14, "sweep records are byte-identical across worker counts", criterion14, 0.0},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        Criterion c(e.id, e.title);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(c);
        } catch (const std::exception& ex) {
            c.fail(std::string("unexpected exception: ") + ex.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!c.report(seconds, e.budget_seconds)) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all 14 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
