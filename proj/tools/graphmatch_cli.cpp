// Command-line surface: generate instances, solve them, run seeded parameter
// sweeps, evaluate threshold reports, and run the self-verification suites
// (closed forms against brute-force oracles and Monte Carlo).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

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

namespace {

using nlohmann::json;
using namespace graphmatch;

// --- I/O helpers ---------------------------------------------------------------

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << text;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "infinity" : "-infinity";
}

// --- Shared model flags ----------------------------------------------------------

struct ModelFlags {
    std::string family;
    double rho = 0.0;
    double p = 0.0, s = 0.0;
    double p11 = 0.0, p10 = 0.0, p01 = 0.0, p00 = 0.0;
    bool has_rho = false, has_p = false, has_s = false;
    bool has_p11 = false, has_p10 = false, has_p01 = false, has_p00 = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family, "model family: gaussian | subsampled_er | general_er")
            ->required();
        cmd->add_option("--rho", rho, "gaussian correlation in (-1,1)")->each([this](const std::string&) {
            has_rho = true;
        });
        cmd->add_option("--p", p, "parent edge density in (0,1)")->each([this](const std::string&) {
            has_p = true;
        });
        cmd->add_option("--s", s, "subsampling rate in (0,1]")->each([this](const std::string&) {
            has_s = true;
        });
        cmd->add_option("--p11", p11, "cell P(A=1,B=1)")->each([this](const std::string&) { has_p11 = true; });
        cmd->add_option("--p10", p10, "cell P(A=1,B=0)")->each([this](const std::string&) { has_p10 = true; });
        cmd->add_option("--p01", p01, "cell P(A=0,B=1)")->each([this](const std::string&) { has_p01 = true; });
        cmd->add_option("--p00", p00, "cell P(A=0,B=0)")->each([this](const std::string&) { has_p00 = true; });
    }

    CorrelationModel build() const {
        CorrelationModel model;
        if (family == "gaussian") {
            if (!has_rho) throw ConfigError("gaussian needs --rho");
            model = Gaussian{rho};
        } else if (family == "subsampled_er") {
            if (!has_p || !has_s) throw ConfigError("subsampled_er needs --p and --s");
            model = SubsampledER{p, s};
        } else if (family == "general_er") {
            if (!has_p11 || !has_p10 || !has_p01 || !has_p00) {
                throw ConfigError("general_er needs --p11 --p10 --p01 --p00");
            }
            model = GeneralER{p11, p10, p01, p00};
        } else {
            throw ConfigError("unknown --family: " + family +
                              " (expected gaussian | subsampled_er | general_er)");
        }
        validate_model(model);
        return model;
    }
};

// --- gen ------------------------------------------------------------------------

int run_gen(const ModelFlags& mf, int n, std::uint64_t seed, const std::string& pi_mode,
            const std::string& pi_map, const std::string& out_path) {
    const CorrelationModel model = mf.build();
    PiMode mode = PiMode::uniform;
    Permutation given;
    const Permutation* given_ptr = nullptr;
    if (pi_mode == "uniform") {
        mode = PiMode::uniform;
    } else if (pi_mode == "identity") {
        mode = PiMode::identity;
    } else if (pi_mode == "given") {
        if (pi_map.empty()) throw ConfigError("--pi given needs --pi-map \"i0 i1 ...\"");
        given = parse_permutation(pi_map);
        mode = PiMode::given;
        given_ptr = &given;
    } else {
        throw ConfigError("unknown --pi mode: " + pi_mode + " (expected uniform | identity | given)");
    }
    const MatchInstance inst = sample_instance(model, n, seed, mode, given_ptr);
    emit(out_path, instance_to_json(inst).dump(2) + "\n");
    return 0;
}

// --- solve ----------------------------------------------------------------------

int run_solve(const std::string& in_path, const std::string& estimator, int capacity,
              int restarts, std::uint64_t seed, bool truth_start, const std::string& direction,
              const std::string& out_path) {
    const MatchInstance inst = instance_from_json(parse_json(slurp(in_path), "instance"));
    std::optional<bool> maximize;
    if (direction == "max") {
        maximize = true;
    } else if (direction == "min") {
        maximize = false;
    } else if (direction != "auto") {
        throw ConfigError("unknown --direction: " + direction + " (expected auto | max | min)");
    }

    MatchResult res;
    if (estimator == "exact") {
        ExactOptions opts;
        opts.maximize = maximize;
        opts.capacity = capacity;
        res = solve_exact(inst, opts);
    } else if (estimator == "local" || estimator == "local-search") {
        LocalOptions opts;
        opts.maximize = maximize;
        opts.restarts = restarts;
        opts.seed = seed;
        opts.include_truth_start = truth_start;
        res = solve_local(inst, opts);
    } else {
        throw ConfigError("unknown --estimator: " + estimator + " (expected exact | local)");
    }

    json out;
    out["method"] = res.method;
    out["objective"] = res.objective_value;
    out["pi_hat"] = res.pi_hat.img;
    out["evaluations"] = res.evaluations;
    if (res.method != "local-search") out["optimizer_count"] = res.optimizer_count;
    out["degenerate_sign"] = res.degenerate_sign;
    const double ov = overlap(inst.pi_true, res.pi_hat);
    out["overlap"] = ov;
    out["exact"] = (res.pi_hat == inst.pi_true);
    out["d"] = nonfixed_distance(inst.pi_true, res.pi_hat);
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

// --- theory ---------------------------------------------------------------------

int run_theory(const ModelFlags& mf, std::int64_t n, double epsilon, const std::string& out_path) {
    const CorrelationModel model = mf.build();
    const ThresholdReport report = threshold_report(model, n, epsilon);
    json out = report.to_json();
    out["model"] = model_to_json(model);
    out["edge_pair_mi"] = finite_or_string(edge_pair_mi(model));
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

// --- sweep ----------------------------------------------------------------------

int run_sweep_cmd(const std::string& config_path, const std::string& out_path,
                  const std::string& summary_path, bool timing) {
    SweepConfig cfg = sweep_config_from_json(parse_json(slurp(config_path), "sweep config"));
    if (timing) cfg.collect_timing = true;
    const SweepResult result = run_sweep(cfg);
    emit(out_path, records_to_csv(result.records));
    if (!summary_path.empty()) {
        const auto summaries = aggregate(result, cfg.deltas);
        emit(summary_path, summaries_to_json(summaries).dump(2) + "\n");
    }
    return 0;
}

// --- verify ---------------------------------------------------------------------

struct SuiteReport {
    std::string name;
    int checks = 0;
    int failures = 0;
    json rows = json::array();
};

void add_check(SuiteReport& suite, const std::string& name, bool pass, const std::string& detail) {
    ++suite.checks;
    if (!pass) ++suite.failures;
    suite.rows.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    std::fprintf(stderr, "[%s] %s/%s: %s\n", pass ? " ok " : "FAIL", suite.name.c_str(),
                 name.c_str(), detail.c_str());
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

SuiteReport verify_mgf() {
    SuiteReport suite{"mgf"};

    // ER closed forms against 4^k enumeration.
    {
        double worst_m = 0.0, worst_l = 0.0;
        int cells_checked = 0;
        for (double p : {0.05, 0.3}) {
            for (double s : {0.2, 0.8}) {
                for (double t : {0.1, 0.5}) {
                    const CorrelationModel m = SubsampledER{p, s};
                    const GeneralER cells = to_cells(m);
                    for (int k = 1; k <= 5; ++k) {
                        worst_m = std::max(worst_m, std::abs(orbit_mgf_m(m, t, k) -
                                                             oracles::orbit_mgf_m_enumerated(cells, t, k)));
                        worst_l = std::max(worst_l, std::abs(orbit_mgf_l(m, t, k) -
                                                             oracles::orbit_mgf_l_enumerated(cells, t, k)));
                        ++cells_checked;
                    }
                }
            }
        }
        add_check(suite, "er_m_enumeration", worst_m <= 1e-12,
                  "max |closed - enumerated| = " + fmt(worst_m) + " over " +
                      std::to_string(cells_checked) + " grid points");
        add_check(suite, "er_l_enumeration", worst_l <= 1e-12,
                  "max |closed - enumerated| = " + fmt(worst_l));
    }

    // Asymmetric four-cell pmf: the L statistic's closed form is cell-general.
    {
        const GeneralER g{0.10, 0.05, 0.15, 0.70};
        double worst = 0.0;
        for (double t : {0.2, 0.8}) {
            for (int k = 1; k <= 5; ++k) {
                worst = std::max(worst, std::abs(orbit_mgf_l(CorrelationModel{g}, t, k) -
                                                 oracles::orbit_mgf_l_enumerated(g, t, k)));
            }
        }
        add_check(suite, "er_l_asymmetric_cells", worst <= 1e-12,
                  "max |closed - enumerated| = " + fmt(worst));
    }

    // Gaussian closed forms against the exact determinant identity.
    {
        double worst = 0.0;
        for (double rho : {-0.7, -0.3, 0.3, 0.7}) {
            const CorrelationModel m = Gaussian{rho};
            for (double f : {0.2, 0.6, 0.9}) {
                const double t = f / (1.0 + std::abs(rho));
                for (int k = 1; k <= 6; ++k) {
                    const double ref = oracles::orbit_mgf_m_gaussian_det(rho, t, k);
                    worst = std::max(worst, std::abs(orbit_mgf_m(m, t, k) - ref) / ref);
                }
            }
        }
        add_check(suite, "gaussian_m_determinant", worst <= 1e-12,
                  "max relative error = " + fmt(worst) + " (k to 6, both signs)");
    }
    {
        double worst = 0.0;
        for (double rho : {0.3, 0.7}) {
            const CorrelationModel m = Gaussian{rho};
            for (double f : {0.3, 0.8}) {
                const double t = f / (2.0 * (1.0 - rho));
                if (1.0 + 4.0 * t * rho - 4.0 * t * t * (1.0 - rho * rho) <= 0.0) continue;
                for (int k = 1; k <= 6; ++k) {
                    const double ref = oracles::orbit_mgf_l_gaussian_det(rho, t, k);
                    worst = std::max(worst, std::abs(orbit_mgf_l(m, t, k) - ref) / ref);
                }
            }
        }
        add_check(suite, "gaussian_l_determinant", worst <= 1e-12,
                  "max relative error = " + fmt(worst) + " (k to 6, odd lengths included)");
    }

    // Gaussian closed form against Monte Carlo.
    {
        double worst_rel = 0.0, worst_z = 0.0;
        for (double rho : {0.3, 0.7}) {
            const CorrelationModel m = Gaussian{rho};
            const double t = 0.4 / (1.0 + rho);
            for (int k : {1, 2, 3}) {
                const auto mc = oracles::orbit_mgf_m_gaussian_mc(rho, t, k, 1000000, 20240817);
                const double cf = orbit_mgf_m(m, t, k);
                worst_rel = std::max(worst_rel, std::abs(mc.mean - cf) / cf);
                worst_z = std::max(worst_z, std::abs(mc.mean - cf) / mc.std_error);
            }
        }
        add_check(suite, "gaussian_m_montecarlo", worst_rel <= 0.01,
                  "max relative gap = " + fmt(worst_rel) + ", max |z| = " + fmt(worst_z) +
                      " at 1e6 samples");
    }

    // Zero tilt pins both MGFs at exactly 1.
    {
        double worst = 0.0;
        for (int k : {1, 2, 5}) {
            worst = std::max(worst, std::abs(orbit_mgf_m(SubsampledER{0.3, 0.5}, 0.0, k) - 1.0));
            worst = std::max(worst, std::abs(orbit_mgf_l(SubsampledER{0.3, 0.5}, 0.0, k) - 1.0));
            worst = std::max(worst, std::abs(orbit_mgf_m(Gaussian{0.6}, 0.0, k) - 1.0));
            worst = std::max(worst, std::abs(orbit_mgf_l(Gaussian{0.6}, 0.0, k) - 1.0));
        }
        add_check(suite, "zero_tilt_is_one", worst <= 1e-12, "max |value - 1| = " + fmt(worst));
    }
    return suite;
}

SuiteReport verify_bounds() {
    SuiteReport suite{"bounds"};

    {
        double worst = 0.0;
        for (double p : {0.05, 0.3}) {
            for (double s : {0.2, 0.8}) {
                for (double t : {0.1, std::log(1.0 / p)}) {
                    const auto rep = mgf_power_bounds(SubsampledER{p, s}, t, 12);
                    worst = std::max({worst, rep.max_violation_m, rep.max_violation_l});
                }
            }
        }
        add_check(suite, "power_bounds_er", worst <= 1e-12, "max violation = " + fmt(worst));
    }
    {
        double worst = 0.0;
        for (double rho : {0.2, 0.8}) {
            for (double f : {0.12, 0.5, 0.9}) {
                const double t = f * std::min(1.0 / (1.0 + rho), 1.0 / (2.0 * (1.0 - rho)));
                const auto rep = mgf_power_bounds(Gaussian{rho}, t, 12);
                worst = std::max({worst, rep.max_violation_m, rep.max_violation_l});
            }
        }
        add_check(suite, "power_bounds_gaussian", worst <= 1e-12, "max violation = " + fmt(worst));
    }

    // Two-orbit MGF upper bounds, both tilt branches, and the second-moment ratio.
    {
        double worst_gap = 0.0, worst_ratio = 0.0;
        bool branches = true;
        for (double p : {0.01, 0.1, 0.4}) {
            for (double s : {0.2, 0.9}) {
                if (p * s > 0.5) continue;
                for (double t : {std::pow(2.0, -10), 0.25 * std::log(1.0 / p), std::log(1.0 / p)}) {
                    const auto b = m2_upper_bounds(p, s, t);
                    if (t <= std::log(1.0 / p)) {
                        if (!b.bound_moderate_tilt) branches = false;
                        else worst_gap = std::max(worst_gap, b.m2_exact - *b.bound_moderate_tilt);
                        worst_ratio = std::max(worst_ratio, b.m1sq_over_m2);
                    }
                    if (t <= std::pow(2.0, -10)) {
                        if (!b.bound_small_tilt) branches = false;
                        else worst_gap = std::max(worst_gap, b.m2_exact - *b.bound_small_tilt);
                    }
                }
            }
        }
        const double e2 = std::exp(2.0);
        add_check(suite, "m2_upper_bounds", branches && worst_gap <= 1e-12 && worst_ratio <= e2,
                  "max (exact - bound) = " + fmt(worst_gap) +
                      ", max first/second moment ratio = " + fmt(worst_ratio) + " (cap " +
                      fmt(e2) + ")");
    }

    // Optimal-tilt identities for the two-orbit difference MGF.
    {
        double worst = 0.0;
        for (double p : {0.05, 0.3, 0.6}) {
            for (double s : {0.2, 0.5, 0.9}) {
                const GeneralER c = to_cells(SubsampledER{p, s});
                const double t = 0.5 * std::log((c.p00 * c.p11) / (c.p01 * c.p10));
                const double closed = 1.0 - 2.0 * std::pow(std::sqrt(c.p00 * c.p11) -
                                                               std::sqrt(c.p01 * c.p10),
                                                           2.0);
                worst = std::max(worst,
                                 std::abs(orbit_mgf_l(SubsampledER{p, s}, t, 2) - closed));
            }
        }
        add_check(suite, "optimal_tilt_er", worst <= 1e-12, "max |L2 - identity| = " + fmt(worst));
    }
    {
        double worst = 0.0;
        for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double t = rho / (2.0 * (1.0 - rho * rho));
            worst = std::max(worst, std::abs(orbit_mgf_l(Gaussian{rho}, t, 2) -
                                             std::sqrt(1.0 - rho * rho)));
        }
        add_check(suite, "optimal_tilt_gaussian", worst <= 1e-12,
                  "max |L2 - sqrt(1-rho^2)| = " + fmt(worst));
    }

    // Pair information: two computation paths, one value; nonnegative.
    {
        double worst = 0.0, most_negative = 0.0;
        for (double p : {0.05, 0.3, 0.7}) {
            for (double s : {0.2, 0.5, 0.9}) {
                const double a = edge_pair_mi(SubsampledER{p, s});
                const double b = edge_pair_mi(CorrelationModel{to_cells(SubsampledER{p, s})});
                worst = std::max(worst, std::abs(a - b));
                most_negative = std::min(most_negative, std::min(a, b));
            }
        }
        add_check(suite, "pair_mi_two_paths", worst <= 1e-12 && most_negative >= 0.0,
                  "max path gap = " + fmt(worst) + ", min value = " + fmt(most_negative));
    }

    // phi ratio decreases across (0,1).
    {
        bool mono = true;
        double prev = phi_ratio(1e-3);
        for (int i = 2; i <= 999; ++i) {
            const double x = static_cast<double>(i) / 1000.0;
            const double cur = phi_ratio(x);
            if (!(cur < prev + 1e-12)) mono = false;
            prev = cur;
        }
        add_check(suite, "phi_monotone", mono, "decreasing across a 999-point grid");
    }
    return suite;
}

SuiteReport verify_bayes() {
    SuiteReport suite{"bayes"};

    // Posterior sanity + mode set == exhaustive optimizer set.
    {
        double worst_norm = 0.0;
        bool modes_match = true;
        int idx = 0;
        for (const CorrelationModel model :
             {CorrelationModel{SubsampledER{0.3, 0.7}}, CorrelationModel{Gaussian{0.6}}}) {
            for (int rep = 0; rep < 10; ++rep) {
                const MatchInstance inst = sample_instance(model, 5, 4200u + static_cast<unsigned>(idx++));
                const PosteriorResult post = exact_posterior(inst);
                double total = 0.0;
                for (const double pr : post.probs) total += pr;
                worst_norm = std::max(worst_norm, std::abs(total - 1.0));
                const MatchResult mle = solve_exact(inst);
                if (static_cast<std::int64_t>(post.mode_set.size()) != mle.optimizer_count ||
                    !(post.perms[post.mode_set.front()] == mle.pi_hat)) {
                    modes_match = false;
                }
            }
        }
        add_check(suite, "posterior_mode_equals_mle", modes_match,
                  "mode set matches the exhaustive optimizer set on 20 instances, n = 5");
        add_check(suite, "posterior_normalization", worst_norm <= 1e-12,
                  "max |sum - 1| = " + fmt(worst_norm));
    }

    // Relabeling carries no information at n = 2.
    {
        const auto r = exact_mutual_information(SubsampledER{0.4, 0.6}, 2);
        add_check(suite, "mi_n2_zero", std::abs(r.mi) <= 1e-12, "I = " + fmt(r.mi));
    }

    // Information bounds on a model grid.
    {
        const std::vector<CorrelationModel> models = {
            SubsampledER{0.3, 0.5}, SubsampledER{0.1, 0.8}, SubsampledER{0.6, 0.4},
            SubsampledER{0.5, 1.0}, GeneralER{0.10, 0.05, 0.15, 0.70},
            GeneralER{0.25, 0.25, 0.25, 0.25}};
        bool ok = true;
        double worst_excess = -1e300;
        for (const auto& model : models) {
            for (int n : {3, 4}) {
                const auto r = exact_mutual_information(model, n);
                const double m = static_cast<double>(r.slots);
                double logfact = 0.0;
                for (int i = 2; i <= n; ++i) logfact += std::log(static_cast<double>(i));
                const double cap = std::min(m * edge_pair_mi(model), logfact);
                if (r.mi < -1e-9 || r.mi > cap + 1e-9) ok = false;
                worst_excess = std::max(worst_excess, r.mi - cap);
            }
        }
        add_check(suite, "mi_bounds", ok,
                  "0 <= I <= min(slots * pair-MI, log n!) on 12 cases; worst slack to the cap = " +
                      fmt(-worst_excess));
    }

    // Interpolated-coupling endpoints and monotone error.
    {
        const double p = 0.6, s = 0.9, q = p * s;
        const int n = 4, trials = 1200;
        const double m = static_cast<double>(num_edge_slots(n));
        const auto at_q =
            mmse_of_relabeled_graph(interpolated_model(InterpolatedER{p, s, q}), n, trials, 71);
        const double sharp = (m - 1.0) * q * (1.0 - q);
        add_check(suite, "mmse_independent_endpoint",
                  std::abs(at_q.mmse - sharp) <= 4.0 * at_q.std_error,
                  "estimate " + fmt(at_q.mmse) + " vs closed form " + fmt(sharp) + " (se " +
                      fmt(at_q.std_error) + ")");

        bool mono = true;
        double prev = at_q.mmse, prev_se = at_q.std_error;
        for (int i = 1; i <= 4; ++i) {
            const double theta = q + (s - q) * static_cast<double>(i) / 4.0;
            const auto e =
                mmse_of_relabeled_graph(interpolated_model(InterpolatedER{p, s, theta}), n, trials,
                                        71 + static_cast<std::uint64_t>(i));
            if (e.mmse > prev + 3.0 * (e.std_error + prev_se)) mono = false;
            prev = e.mmse;
            prev_se = e.std_error;
        }
        add_check(suite, "mmse_monotone_in_theta", mono,
                  "nonincreasing across a 5-point path within 3 standard errors");
    }

    // The planted coupling at s = 1 makes the relabeled graph nearly recoverable.
    {
        const auto e = mmse_of_relabeled_graph(SubsampledER{0.5, 1.0}, 5, 400, 99);
        const double budget = 0.05 * static_cast<double>(num_edge_slots(5)) * 0.5;
        add_check(suite, "mmse_identical_pair_small", e.mmse >= 0.0 && e.mmse <= budget,
                  "estimate " + fmt(e.mmse) + " <= " + fmt(budget));
    }

    // Gaussian interpolation at theta = rho^2 reproduces the planted covariance.
    {
        const double rho = 0.6;
        const CorrelationModel m = interpolated_model(InterpolatedGaussian{rho * rho});
        const int n = 24; // 276 slots per draw
        double sum = 0.0, sum2 = 0.0;
        std::int64_t count = 0;
        for (int rep = 0; rep < 800; ++rep) {
            const MatchInstance inst = sample_instance(m, n, 5000u + static_cast<unsigned>(rep));
            const Permutation edge_perm = induced_edge_permutation(inst.pi_true);
            for (std::int64_t e = 0; e < num_edge_slots(n); ++e) {
                const double prod = inst.A[static_cast<std::size_t>(edge_perm(static_cast<int>(e)))] *
                                    inst.B[static_cast<std::size_t>(e)];
                sum += prod;
                sum2 += prod * prod;
                ++count;
            }
        }
        const double nd = static_cast<double>(count);
        const double mean = sum / nd;
        const double se = std::sqrt(std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0)) / nd);
        add_check(suite, "gaussian_interpolation_covariance",
                  std::abs(mean - rho) <= 4.0 * se,
                  "sample covariance " + fmt(mean) + " vs " + fmt(rho) + " (se " + fmt(se) + ")");
    }
    return suite;
}

SuiteReport verify_orbits() {
    SuiteReport suite{"orbits"};
    CounterRng rng(31415u);

    bool counts_ok = true, fixed_ok = true, ineq_ok = true, functor_ok = true;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_below(29)); // 2..30
        const Permutation sigma = random_permutation(n, rng);
        const OrbitDecomposition od = orbit_decomposition(sigma);
        std::int64_t node_total = 0, edge_total = 0;
        for (std::size_t k = 1; k < od.node_count_by_length.size(); ++k) {
            node_total += static_cast<std::int64_t>(k) * od.node_count_by_length[k];
        }
        for (std::size_t k = 1; k < od.edge_count_by_length.size(); ++k) {
            edge_total += static_cast<std::int64_t>(k) * od.edge_count_by_length[k];
        }
        if (node_total != n || edge_total != num_edge_slots(n)) counts_ok = false;

        const std::int64_t n1 = od.node_count_by_length.size() > 1 ? od.node_count_by_length[1] : 0;
        const std::int64_t n2 = od.node_count_by_length.size() > 2 ? od.node_count_by_length[2] : 0;
        const std::int64_t fixed_edges =
            od.edge_count_by_length.size() > 1 ? od.edge_count_by_length[1] : 0;
        if (fixed_edges != n1 * (n1 - 1) / 2 + n2) fixed_ok = false;

        // Pairs of vertex maps: shared fixed points force shared fixed slots.
        const Permutation pi = random_permutation(n, rng);
        const double ov = overlap(pi, sigma);
        const double alpha = edge_fixed_fraction(pi, sigma);
        const double fixed_nodes = ov * n;
        const double lhs = fixed_nodes * (fixed_nodes - 1.0) / 2.0;
        const double rhs = alpha * static_cast<double>(num_edge_slots(n)) + 1e-9;
        if (lhs > rhs) ineq_ok = false;

        if (rep < 200) {
            const Permutation tau = random_permutation(n, rng);
            const Permutation lhs_perm = induced_edge_permutation(sigma.compose(tau));
            const Permutation rhs_perm =
                induced_edge_permutation(sigma).compose(induced_edge_permutation(tau));
            if (!(lhs_perm == rhs_perm)) functor_ok = false;
        }
    }
    add_check(suite, "orbit_count_identities", counts_ok,
              "node and edge orbit lengths tile n and n(n-1)/2 on 1000 random maps, n <= 30");
    add_check(suite, "fixed_edge_count", fixed_ok,
              "fixed slots = C(fixed nodes, 2) + 2-cycles on the same set");
    add_check(suite, "fixed_nodes_vs_fixed_edges", ineq_ok,
              "C(shared fixed nodes, 2) <= shared fixed slots for map pairs");
    add_check(suite, "edge_map_functorial", functor_ok,
              "slot map of a composition = composition of slot maps (200 pairs)");

    // A hand-checked 3-vertex transposition: swapping vertices 0,1 swaps slots
    // {0,2} and {1,2} and fixes slot {0,1}.
    {
        const Permutation swap01({1, 0, 2});
        const Permutation ep = induced_edge_permutation(swap01);
        const bool ok = ep(0) == 0 && ep(1) == 2 && ep(2) == 1;
        add_check(suite, "three_vertex_transposition", ok, "slot images " + format_permutation(ep));
    }
    return suite;
}

SuiteReport verify_tails() {
    SuiteReport suite{"tails"};

    {
        double worst = 0.0;
        for (double a : {0.25, 0.3, 0.05}) {
            for (double b : {0.25, 0.1, 0.6}) {
                if (a + b > 1.0) continue;
                for (int n = 1; n <= 8; ++n) {
                    for (double tau : {-2.0, 0.0, 1.0, 2.5, 7.0}) {
                        worst = std::max(worst, std::abs(trinomial_tail(a, b, n, tau) -
                                                         oracles::trinomial_tail_enumerated(a, b, n, tau)));
                    }
                }
            }
        }
        add_check(suite, "dp_vs_enumeration", worst <= 1e-12,
                  "max |dp - enumerated| = " + fmt(worst) + " for n <= 8");
    }
    {
        bool mono = true;
        double prev = 2.0;
        for (int i = -60; i <= 60; ++i) {
            const double cur = trinomial_tail(0.3, 0.2, 50, static_cast<double>(i));
            if (cur > prev + 1e-15) mono = false;
            prev = cur;
        }
        const bool support = trinomial_tail(0.3, 0.2, 50, 50.5) == 0.0 &&
                             std::abs(trinomial_tail(0.3, 0.2, 50, -50.0) - 1.0) <= 1e-12;
        add_check(suite, "tau_monotone_and_support", mono && support,
                  "nonincreasing in tau; mass 1 below the support, 0 above");
    }

    // Inverse-Chernoff lower bound on a grid satisfying its hypotheses.
    {
        struct Point { double p, s; std::int64_t n; };
        const Point grid[] = {{0.8, 0.10, 5000}, {0.8, 0.10, 10000}, {0.8, 0.15, 2000},
                              {0.9, 0.10, 5000}, {0.9, 0.15, 2000},  {0.9, 0.15, 5000},
                              {0.9, 0.15, 10000}, {0.9, 0.20, 2000}, {0.9, 0.20, 5000}};
        bool holds = true, hypotheses = true;
        double worst_margin = 1e300;
        for (const auto& pt : grid) {
            const GeneralER c = to_cells(SubsampledER{pt.p, pt.s});
            const double a = 2.0 * c.p00 * c.p11;
            const double b = 2.0 * c.p01 * c.p10;
            const double nd = static_cast<double>(pt.n);
            if (a * nd < 50.0 || a / b < 1.0 || a / b > 25.0) hypotheses = false;
            const double tau_hi = std::floor(0.1 * std::sqrt(a * nd * std::log(nd)));
            for (const double tau : {0.0, tau_hi}) {
                const double exact = trinomial_tail(a, b, pt.n, tau);
                const double bound = std::exp(-nd * std::pow(std::sqrt(a) - std::sqrt(b), 2.0) -
                                              0.25 * std::log(nd));
                if (!(exact >= bound)) holds = false;
                worst_margin = std::min(worst_margin, exact / bound);
            }
        }
        add_check(suite, "inverse_chernoff_grid", holds && hypotheses,
                  "exact tail >= closed-form lower bound at 18 points; min ratio = " +
                      fmt(worst_margin));
    }
    return suite;
}

int run_verify(bool mgf, bool bounds, bool bayes, bool orbits, bool tails) {
    if (!mgf && !bounds && !bayes && !orbits && !tails) {
        mgf = bounds = bayes = orbits = tails = true;
    }
    std::vector<SuiteReport> suites;
    if (mgf) suites.push_back(verify_mgf());
    if (bounds) suites.push_back(verify_bounds());
    if (bayes) suites.push_back(verify_bayes());
    if (orbits) suites.push_back(verify_orbits());
    if (tails) suites.push_back(verify_tails());

    int checks = 0, failures = 0;
    json out;
    out["suites"] = json::object();
    for (const auto& s : suites) {
        checks += s.checks;
        failures += s.failures;
        out["suites"][s.name] = {{"checks", s.checks}, {"failures", s.failures}, {"results", s.rows}};
    }
    out["checks"] = checks;
    out["failures"] = failures;
    out["pass"] = (failures == 0);
    std::cout << out.dump(2) << "\n";
    std::fprintf(stderr, "%d checks, %d failures\n", checks, failures);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{"correlated graph matching: generation, recovery, thresholds, self-checks"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "sample a correlated pair instance as JSON");
    ModelFlags gen_model;
    gen_model.attach(gen);
    int gen_n = 8;
    std::uint64_t gen_seed = 0;
    std::string gen_pi = "uniform", gen_pi_map, gen_out = "-";
    gen->add_option("-n,--nodes", gen_n, "number of vertices")->required();
    gen->add_option("--seed", gen_seed, "instance seed");
    gen->add_option("--pi", gen_pi, "hidden relabeling: uniform | identity | given");
    gen->add_option("--pi-map", gen_pi_map, "one-line notation for --pi given, e.g. \"2 0 1\"");
    gen->add_option("-o,--output", gen_out, "output path (- for stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "recover the relabeling of an instance");
    std::string solve_in = "-", solve_est = "exact", solve_dir = "auto", solve_out = "-";
    int solve_capacity = 10, solve_restarts = 32;
    std::uint64_t solve_seed = 0;
    bool solve_truth_start = false;
    solve->add_option("-i,--input", solve_in, "instance JSON path (- for stdin)");
    solve->add_option("--estimator", solve_est, "exact | local");
    solve->add_option("--capacity", solve_capacity, "largest n the exhaustive path accepts");
    solve->add_option("--restarts", solve_restarts, "local search restarts");
    solve->add_option("--seed", solve_seed, "local search restart seed");
    solve->add_flag("--truth-start", solve_truth_start, "include the planted map as one start");
    solve->add_option("--direction", solve_dir, "objective direction: auto | max | min");
    solve->add_option("-o,--output", solve_out, "output path (- for stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a seeded parameter sweep to CSV");
    std::string sweep_config, sweep_out = "-", sweep_summary;
    bool sweep_timing = false;
    sweep->add_option("--config", sweep_config, "sweep config JSON path (- for stdin)")->required();
    sweep->add_option("-o,--output", sweep_out, "CSV output path (- for stdout)");
    sweep->add_option("--summary", sweep_summary, "also write per-cell aggregate JSON here");
    sweep->add_flag("--timing", sweep_timing,
                    "record wall time per trial (breaks byte-reproducibility of the CSV)");

    // theory
    auto* theory = app.add_subcommand("theory", "recovery-threshold report for a model at size n");
    ModelFlags theory_model;
    theory_model.attach(theory);
    std::int64_t theory_n = 0;
    double theory_eps = 0.1;
    std::string theory_out = "-";
    theory->add_option("-n,--nodes", theory_n, "number of vertices")->required();
    theory->add_option("--epsilon", theory_eps, "slack for regime classification");
    theory->add_option("-o,--output", theory_out, "output path (- for stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "run self-check suites (closed forms vs oracles)");
    bool v_mgf = false, v_bounds = false, v_bayes = false, v_orbits = false, v_tails = false;
    verify->add_flag("--mgf", v_mgf, "orbit MGF closed forms vs enumeration / Monte Carlo");
    verify->add_flag("--bounds", v_bounds, "inequalities: power bounds, tilt identities, MI paths");
    verify->add_flag("--bayes", v_bayes, "posterior, information bounds, interpolation");
    verify->add_flag("--orbits", v_orbits, "permutation orbit identities");
    verify->add_flag("--tails", v_tails, "random-walk tail DP vs enumeration and lower bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(gen_model, gen_n, gen_seed, gen_pi, gen_pi_map, gen_out);
        if (solve->parsed())
            return run_solve(solve_in, solve_est, solve_capacity, solve_restarts, solve_seed,
                             solve_truth_start, solve_dir, solve_out);
        if (sweep->parsed()) return run_sweep_cmd(sweep_config, sweep_out, sweep_summary, sweep_timing);
        if (theory->parsed()) return run_theory(theory_model, theory_n, theory_eps, theory_out);
        if (verify->parsed()) return run_verify(v_mgf, v_bounds, v_bayes, v_orbits, v_tails);
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
