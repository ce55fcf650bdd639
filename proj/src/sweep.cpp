#include "graphmatch/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "graphmatch/errors.hpp"
#include "graphmatch/estimators.hpp"
#include "graphmatch/rng.hpp"

namespace graphmatch {

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> as_double_list(const nlohmann::json& j, const std::string& key) {
    const nlohmann::json& v = j.at(key);
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number())
                throw ConfigError("config key '" + key + "' must hold numbers");
            out.push_back(e.get<double>());
        }
    } else {
        throw ConfigError("config key '" + key + "' must be a number or an array of numbers");
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' must not be empty");
    return out;
}

std::vector<int> as_int_list(const nlohmann::json& j, const std::string& key) {
    const nlohmann::json& v = j.at(key);
    std::vector<int> out;
    if (v.is_number_integer()) {
        out.push_back(v.get<int>());
    } else if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number_integer())
                throw ConfigError("config key '" + key + "' must hold integers");
            out.push_back(e.get<int>());
        }
    } else {
        throw ConfigError("config key '" + key + "' must be an integer or an array of integers");
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' must not be empty");
    return out;
}

struct Wilson {
    double phat, lo, hi;
};

Wilson wilson_interval(std::int64_t k, std::int64_t total) {
    constexpr double z = 1.96;
    const double t = static_cast<double>(total);
    const double phat = static_cast<double>(k) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (phat + z2 / (2.0 * t)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
    return Wilson{phat, std::max(0.0, center - half), std::min(1.0, center + half)};
}

} // namespace

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
    static const std::set<std::string> allowed = {
        "family",    "n",        "rho",            "x",         "p",      "s",
        "trials",    "estimator", "restarts",      "exact_capacity",
        "base_seed", "deltas",   "collect_timing"};
    for (const auto& item : j.items())
        if (allowed.find(item.key()) == allowed.end())
            throw ConfigError("unknown sweep config key '" + item.key() + "'");

    SweepConfig cfg;
    if (!j.contains("family") || !j.at("family").is_string())
        throw ConfigError("sweep config needs a string 'family'");
    cfg.family = j.at("family").get<std::string>();
    if (cfg.family != "gaussian" && cfg.family != "subsampled_er")
        throw ConfigError("family must be 'gaussian' or 'subsampled_er'");

    if (!j.contains("n")) throw ConfigError("sweep config needs 'n'");
    cfg.n_values = as_int_list(j, "n");
    for (const int n : cfg.n_values)
        if (n < 2) throw ConfigError("every n must be >= 2");

    if (j.contains("rho")) cfg.rho = as_double_list(j, "rho");
    if (j.contains("x")) cfg.x = as_double_list(j, "x");
    if (j.contains("p")) cfg.p = as_double_list(j, "p");
    if (j.contains("s")) cfg.s = as_double_list(j, "s");

    if (cfg.family == "gaussian") {
        if (!cfg.p.empty() || !cfg.s.empty())
            throw ConfigError("gaussian sweeps take 'rho' or 'x', not 'p'/'s'");
        if (cfg.rho.empty() == cfg.x.empty())
            throw ConfigError("gaussian sweeps need exactly one of 'rho' or 'x'");
    } else {
        if (!cfg.rho.empty())
            throw ConfigError("subsampled_er sweeps take 'p' with 's' or 'x', not 'rho'");
        if (cfg.p.empty()) throw ConfigError("subsampled_er sweeps need 'p'");
        if (cfg.s.empty() == cfg.x.empty())
            throw ConfigError("subsampled_er sweeps need exactly one of 's' or 'x'");
    }

    if (j.contains("trials")) {
        if (!j.at("trials").is_number_integer()) throw ConfigError("'trials' must be an integer");
        cfg.trials = j.at("trials").get<int>();
    }
    if (cfg.trials < 1) throw ConfigError("'trials' must be >= 1");

    if (j.contains("estimator")) {
        if (!j.at("estimator").is_string()) throw ConfigError("'estimator' must be a string");
        cfg.estimator = j.at("estimator").get<std::string>();
    }
    if (cfg.estimator != "exact" && cfg.estimator != "local")
        throw ConfigError("estimator must be 'exact' or 'local'");

    if (j.contains("restarts")) {
        if (!j.at("restarts").is_number_integer())
            throw ConfigError("'restarts' must be an integer");
        cfg.restarts = j.at("restarts").get<int>();
    }
    if (cfg.restarts < 1) throw ConfigError("'restarts' must be >= 1");

    if (j.contains("exact_capacity")) {
        if (!j.at("exact_capacity").is_number_integer())
            throw ConfigError("'exact_capacity' must be an integer");
        cfg.exact_capacity = j.at("exact_capacity").get<int>();
    }

    if (j.contains("base_seed")) {
        const auto& b = j.at("base_seed");
        if (!b.is_number_integer() || (b.is_number_integer() && !b.is_number_unsigned() &&
                                       b.get<std::int64_t>() < 0))
            throw ConfigError("'base_seed' must be a nonnegative integer");
        cfg.base_seed = b.get<std::uint64_t>();
    }

    if (j.contains("deltas")) {
        cfg.deltas = as_double_list(j, "deltas");
        for (const double d : cfg.deltas)
            if (!(d >= 0.0) || !(d <= 1.0)) throw ConfigError("every delta must lie in [0,1]");
    }

    if (j.contains("collect_timing")) {
        if (!j.at("collect_timing").is_boolean())
            throw ConfigError("'collect_timing' must be a boolean");
        cfg.collect_timing = j.at("collect_timing").get<bool>();
    }
    return cfg;
}

nlohmann::json sweep_config_to_json(const SweepConfig& cfg) {
    nlohmann::json j;
    j["family"] = cfg.family;
    j["n"] = cfg.n_values;
    if (!cfg.rho.empty()) j["rho"] = cfg.rho;
    if (!cfg.x.empty()) j["x"] = cfg.x;
    if (!cfg.p.empty()) j["p"] = cfg.p;
    if (!cfg.s.empty()) j["s"] = cfg.s;
    j["trials"] = cfg.trials;
    j["estimator"] = cfg.estimator;
    j["restarts"] = cfg.restarts;
    j["exact_capacity"] = cfg.exact_capacity;
    j["base_seed"] = cfg.base_seed;
    if (!cfg.deltas.empty()) j["deltas"] = cfg.deltas;
    j["collect_timing"] = cfg.collect_timing;
    return j;
}

namespace {

SweepCell make_cell(CorrelationModel model, int n) {
    SweepCell cell;
    cell.n = n;
    cell.flipped = false;
    std::string flipped_note;
    if (const auto* er = std::get_if<SubsampledER>(&model)) {
        const double q = er->p * er->s;
        if (q > 0.5 && q < 1.0) {
            const SubsampledER complement = flip_model(*er);
            flipped_note = ";flipped_from=" + variant_params_string(model);
            model = complement;
            cell.flipped = true;
        }
    }
    validate_model(model);
    cell.model = model;
    cell.params = variant_params_string(model) + flipped_note;

    nlohmann::json canon;
    canon["model"] = model_to_json(model);
    canon["n"] = n;
    cell.cell_hash = fnv1a64(canon.dump());
    return cell;
}

} // namespace

std::vector<SweepCell> resolve_cells(const SweepConfig& cfg) {
    std::vector<SweepCell> cells;
    for (const int n : cfg.n_values) {
        const double logn = std::log(static_cast<double>(n));
        if (cfg.family == "gaussian") {
            const bool direct = !cfg.rho.empty();
            const std::vector<double>& axis = direct ? cfg.rho : cfg.x;
            for (const double v : axis) {
                double rho = v;
                if (!direct) {
                    if (!(v >= 0.0)) throw ConfigError("normalized strength x must be >= 0");
                    rho = std::sqrt(v * logn / static_cast<double>(n));
                    if (rho > 1.0)
                        throw ConfigError("x = " + g17(v) + " needs rho > 1 at n = " +
                                          std::to_string(n) + "; out of range");
                }
                cells.push_back(make_cell(Gaussian{rho}, n));
            }
        } else {
            const bool direct = !cfg.s.empty();
            const std::vector<double>& axis = direct ? cfg.s : cfg.x;
            for (const double p : cfg.p) {
                for (const double v : axis) {
                    double s = v;
                    if (!direct) {
                        // x = n p s^2 (log(1/p) - 1 + p) / log n, solved for s.
                        if (!(v > 0.0)) throw ConfigError("normalized strength x must be > 0");
                        if (!(p > 0.0) || !(p < 1.0))
                            throw ConfigError("normalized strength x needs p in (0,1)");
                        const double rate = std::log(1.0 / p) - 1.0 + p;
                        s = std::sqrt(v * logn / (static_cast<double>(n) * p * rate));
                        if (s > 1.0)
                            throw ConfigError("x = " + g17(v) + " needs s > 1 at n = " +
                                              std::to_string(n) + ", p = " + g17(p) +
                                              "; out of range");
                    }
                    cells.push_back(make_cell(SubsampledER{p, s}, n));
                }
            }
        }
    }
    return cells;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    SweepResult result;
    result.cells = resolve_cells(cfg);

    // Fail before the parallel region on anything a worker would throw.
    for (const SweepCell& cell : result.cells) {
        if (cfg.estimator == "exact" && cell.n > cfg.exact_capacity)
            throw ConfigError("cell n = " + std::to_string(cell.n) +
                              " exceeds exact_capacity = " + std::to_string(cfg.exact_capacity));
    }

    const std::int64_t trials = cfg.trials;
    const std::int64_t total = static_cast<std::int64_t>(result.cells.size()) * trials;
    result.records.resize(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t job = 0; job < total; ++job) {
        const SweepCell& cell = result.cells[static_cast<std::size_t>(job / trials)];
        const int t = static_cast<int>(job % trials);
        const std::uint64_t seed =
            trial_seed(cfg.base_seed, cell.cell_hash, static_cast<std::uint64_t>(t));
        const MatchInstance inst = sample_instance(cell.model, cell.n, seed);

        const auto t0 = std::chrono::steady_clock::now();
        MatchResult mr;
        if (cfg.estimator == "exact") {
            ExactOptions eo;
            eo.capacity = cfg.exact_capacity;
            mr = solve_exact(inst, eo);
        } else {
            LocalOptions lo;
            lo.restarts = cfg.restarts;
            lo.seed = substream_seed(seed, 1);
            mr = solve_local(inst, lo);
        }
        const auto t1 = std::chrono::steady_clock::now();

        TrialRecord& rec = result.records[static_cast<std::size_t>(job)];
        rec.model = model_name(cell.model);
        rec.variant_params = cell.params;
        rec.n = cell.n;
        rec.trial = t;
        rec.seed = seed;
        rec.estimator = cfg.estimator;
        rec.objective = mr.objective_value;
        rec.overlap = overlap(inst.pi_true, mr.pi_hat);
        rec.exact = (mr.pi_hat == inst.pi_true) ? 1 : 0;
        rec.d = nonfixed_distance(inst.pi_true, mr.pi_hat);
        rec.runtime_ms =
            cfg.collect_timing
                ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                : 0.0;
    }
    return result;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
    std::string out = "model,variant_params,n,trial,seed,estimator,objective,overlap,exact,d,"
                      "runtime_ms\n";
    for (const TrialRecord& r : records) {
        out += r.model;
        out += ',';
        out += r.variant_params;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += r.estimator;
        out += ',';
        out += g17(r.objective);
        out += ',';
        out += g17(r.overlap);
        out += ',';
        out += std::to_string(r.exact);
        out += ',';
        out += std::to_string(r.d);
        out += ',';
        out += g17(r.runtime_ms);
        out += '\n';
    }
    return out;
}

std::vector<CellSummary> aggregate(const SweepResult& result, const std::vector<double>& deltas) {
    std::vector<CellSummary> out;
    if (result.cells.empty()) return out;
    const std::size_t trials = result.records.size() / result.cells.size();
    if (trials * result.cells.size() != result.records.size())
        throw ConfigError("sweep result records do not tile its cells");

    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const TrialRecord* rows = result.records.data() + c * trials;
        CellSummary s;
        s.model = rows[0].model;
        s.variant_params = rows[0].variant_params;
        s.n = rows[0].n;
        s.trials = static_cast<int>(trials);

        double mean = 0.0;
        std::int64_t exact_count = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            mean += rows[t].overlap;
            exact_count += rows[t].exact;
        }
        mean /= static_cast<double>(trials);
        double var = 0.0;
        for (std::size_t t = 0; t < trials; ++t)
            var += (rows[t].overlap - mean) * (rows[t].overlap - mean);
        const double se =
            trials > 1 ? std::sqrt(var / (static_cast<double>(trials) * (trials - 1.0))) : 0.0;
        s.mean_overlap = mean;
        s.mean_overlap_halfwidth = 1.96 * se;

        const Wilson we = wilson_interval(exact_count, static_cast<std::int64_t>(trials));
        s.p_exact = we.phat;
        s.p_exact_lo = we.lo;
        s.p_exact_hi = we.hi;

        for (const double d : deltas) {
            std::int64_t k = 0;
            for (std::size_t t = 0; t < trials; ++t)
                if (rows[t].overlap >= d - 1e-12) ++k;
            const Wilson w = wilson_interval(k, static_cast<std::int64_t>(trials));
            s.deltas.push_back(d);
            s.p_overlap_ge.push_back(w.phat);
            s.p_overlap_ge_lo.push_back(w.lo);
            s.p_overlap_ge_hi.push_back(w.hi);
        }
        out.push_back(std::move(s));
    }
    return out;
}

nlohmann::json summaries_to_json(const std::vector<CellSummary>& summaries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CellSummary& s : summaries) {
        nlohmann::json j;
        j["model"] = s.model;
        j["variant_params"] = s.variant_params;
        j["n"] = s.n;
        j["trials"] = s.trials;
        j["mean_overlap"] = s.mean_overlap;
        j["mean_overlap_halfwidth"] = s.mean_overlap_halfwidth;
        j["p_exact"] = s.p_exact;
        j["p_exact_lo"] = s.p_exact_lo;
        j["p_exact_hi"] = s.p_exact_hi;
        j["deltas"] = s.deltas;
        j["p_overlap_ge"] = s.p_overlap_ge;
        j["p_overlap_ge_lo"] = s.p_overlap_ge_lo;
        j["p_overlap_ge_hi"] = s.p_overlap_ge_hi;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace graphmatch
