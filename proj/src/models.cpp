#include "graphmatch/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "graphmatch/errors.hpp"

namespace graphmatch {

namespace {

constexpr double kCellSumTol = 1e-12;
constexpr double kSignTol = 1e-14;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void validate_model(const CorrelationModel& model) {
    if (const auto* g = std::get_if<Gaussian>(&model)) {
        if (!(g->rho >= -1.0 && g->rho <= 1.0))
            throw ConfigError("gaussian: rho must lie in [-1,1], got " + fmt17(g->rho));
        return;
    }
    if (const auto* m = std::get_if<SubsampledER>(&model)) {
        if (!(m->p > 0.0 && m->p < 1.0))
            throw ConfigError("subsampled_er: p must lie in (0,1), got " + fmt17(m->p));
        if (!(m->s > 0.0 && m->s <= 1.0))
            throw ConfigError("subsampled_er: s must lie in (0,1], got " + fmt17(m->s));
        return;
    }
    const auto& c = std::get<GeneralER>(model);
    const struct { const char* name; double v; } cells[] = {
        {"p11", c.p11}, {"p10", c.p10}, {"p01", c.p01}, {"p00", c.p00}};
    for (const auto& cell : cells)
        if (!(cell.v >= 0.0))
            throw ConfigError(std::string("general_er: ") + cell.name + " must be >= 0, got " +
                              fmt17(cell.v));
    const double sum = c.p11 + c.p10 + c.p01 + c.p00;
    if (std::abs(sum - 1.0) > kCellSumTol)
        throw ConfigError("general_er: cells must sum to 1 within 1e-12, got " + fmt17(sum));
}

bool is_gaussian(const CorrelationModel& model) {
    return std::holds_alternative<Gaussian>(model);
}

GeneralER to_cells(const CorrelationModel& model) {
    if (const auto* m = std::get_if<SubsampledER>(&model)) {
        const double q = m->p * m->s;
        return GeneralER{
            .p11 = q * m->s,
            .p10 = q * (1.0 - m->s),
            .p01 = q * (1.0 - m->s),
            .p00 = 1.0 - 2.0 * q + q * m->s,
        };
    }
    if (const auto* c = std::get_if<GeneralER>(&model)) return *c;
    throw UnsupportedModelError("to_cells: gaussian model has no four-cell pmf");
}

double edge_density(const GeneralER& cells) {
    return cells.p11 + cells.p10;
}

CorrelationSign correlation_sign(const CorrelationModel& model) {
    if (const auto* g = std::get_if<Gaussian>(&model)) {
        if (g->rho > 0.0) return CorrelationSign::positive;
        if (g->rho < 0.0) return CorrelationSign::negative;
        return CorrelationSign::zero;
    }
    const GeneralER c = to_cells(model);
    const double det = c.p11 * c.p00 - c.p01 * c.p10;
    if (det > kSignTol) return CorrelationSign::positive;
    if (det < -kSignTol) return CorrelationSign::negative;
    return CorrelationSign::zero;
}

SubsampledER flip_model(const SubsampledER& model) {
    validate_model(model);
    const double ps = model.p * model.s;
    if (!(ps < 1.0))
        throw ConfigError("flip_model: requires p*s < 1, got " + fmt17(ps));
    const double m2 = 1.0 - 2.0 * ps + model.p * model.s * model.s; // P(both absent | slot)
    // m2 <= 1 - ps holds exactly (their gap is p s (1-s)), so the flipped
    // rate is <= 1; the min() only trims the last-ulp rounding overshoot.
    return SubsampledER{
        .p = (1.0 - ps) * (1.0 - ps) / m2,
        .s = std::min(1.0, m2 / (1.0 - ps)),
    };
}

std::string model_name(const CorrelationModel& model) {
    if (std::holds_alternative<Gaussian>(model)) return "gaussian";
    if (std::holds_alternative<SubsampledER>(model)) return "subsampled_er";
    return "general_er";
}

std::string variant_params_string(const CorrelationModel& model) {
    if (const auto* g = std::get_if<Gaussian>(&model)) return "rho=" + fmt17(g->rho);
    if (const auto* m = std::get_if<SubsampledER>(&model))
        return "p=" + fmt17(m->p) + ";s=" + fmt17(m->s);
    const auto& c = std::get<GeneralER>(model);
    return "p11=" + fmt17(c.p11) + ";p10=" + fmt17(c.p10) + ";p01=" + fmt17(c.p01) +
           ";p00=" + fmt17(c.p00);
}

nlohmann::json model_to_json(const CorrelationModel& model) {
    nlohmann::json params;
    if (const auto* g = std::get_if<Gaussian>(&model)) {
        params["rho"] = g->rho;
    } else if (const auto* m = std::get_if<SubsampledER>(&model)) {
        params["p"] = m->p;
        params["s"] = m->s;
    } else {
        const auto& c = std::get<GeneralER>(model);
        params["p11"] = c.p11;
        params["p10"] = c.p10;
        params["p01"] = c.p01;
        params["p00"] = c.p00;
    }
    nlohmann::json j;
    j["variant"] = model_name(model);
    j["params"] = std::move(params);
    return j;
}

CorrelationModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("variant")) throw ConfigError("model: missing field 'variant'");
    if (!j.contains("params")) throw ConfigError("model: missing field 'params'");
    const std::string v = j.at("variant").get<std::string>();
    const nlohmann::json& p = j.at("params");
    CorrelationModel model;
    try {
        if (v == "gaussian") {
            model = Gaussian{p.at("rho").get<double>()};
        } else if (v == "subsampled_er") {
            model = SubsampledER{p.at("p").get<double>(), p.at("s").get<double>()};
        } else if (v == "general_er") {
            model = GeneralER{p.at("p11").get<double>(), p.at("p10").get<double>(),
                              p.at("p01").get<double>(), p.at("p00").get<double>()};
        } else {
            throw ConfigError("model: unknown variant '" + v + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    validate_model(model);
    return model;
}

MatchInstance sample_instance(const CorrelationModel& model, int n, std::uint64_t seed,
                              PiMode pi_mode, const Permutation* given_pi) {
    validate_model(model);
    if (n < 0) throw ConfigError("sample_instance: n must be >= 0, got " + std::to_string(n));

    MatchInstance inst;
    inst.n = n;
    inst.model = model;
    inst.seed = seed;

    CounterRng rng(seed);
    switch (pi_mode) {
        case PiMode::uniform:
            inst.pi_true = random_permutation(n, rng);
            break;
        case PiMode::identity:
            inst.pi_true = Permutation::identity(n);
            break;
        case PiMode::given:
            if (given_pi == nullptr)
                throw ConfigError("sample_instance: pi_mode=given requires a permutation");
            if (given_pi->size() != n)
                throw ConfigError("sample_instance: given permutation has size " +
                                  std::to_string(given_pi->size()) + ", expected n=" +
                                  std::to_string(n));
            validate_permutation(*given_pi);
            inst.pi_true = *given_pi;
            break;
    }

    const std::int64_t m = num_edge_slots(n);
    inst.A.assign(static_cast<std::size_t>(m), 0.0);
    inst.B.assign(static_cast<std::size_t>(m), 0.0);

    // Edge slot of {pi(i), pi(j)} for each slot {i,j}, in linear slot order.
    const Permutation edge_perm = induced_edge_permutation(inst.pi_true);

    if (const auto* g = std::get_if<Gaussian>(&model)) {
        NormalStream normals(rng);
        for (std::int64_t e = 0; e < m; ++e) inst.A[static_cast<std::size_t>(e)] = normals.next();
        const double rho = g->rho;
        const double noise = std::sqrt(std::max(0.0, 1.0 - rho * rho));
        for (std::int64_t e = 0; e < m; ++e) {
            const double z = normals.next();
            inst.B[static_cast<std::size_t>(e)] =
                rho * inst.A[static_cast<std::size_t>(edge_perm(static_cast<int>(e)))] + noise * z;
        }
    } else {
        const GeneralER c = to_cells(model);
        const double c11 = c.p11;
        const double c10 = c11 + c.p10;
        const double c01 = c10 + c.p01;
        for (std::int64_t e = 0; e < m; ++e) {
            const double u = rng.next_unit();
            int a, b;
            if (u < c11) {
                a = 1; b = 1;
            } else if (u < c10) {
                a = 1; b = 0;
            } else if (u < c01) {
                a = 0; b = 1;
            } else {
                a = 0; b = 0;
            }
            inst.A[static_cast<std::size_t>(edge_perm(static_cast<int>(e)))] = a;
            inst.B[static_cast<std::size_t>(e)] = b;
        }
    }
    return inst;
}

nlohmann::json instance_to_json(const MatchInstance& inst) {
    nlohmann::json j;
    j["n"] = inst.n;
    j["model"] = model_to_json(inst.model);
    j["seed"] = inst.seed;
    j["pi_true"] = inst.pi_true.img;
    j["A"] = inst.A;
    j["B"] = inst.B;
    return j;
}

MatchInstance instance_from_json(const nlohmann::json& j) {
    MatchInstance inst;
    try {
        inst.n = j.at("n").get<int>();
        inst.model = model_from_json(j.at("model"));
        inst.seed = j.at("seed").get<std::uint64_t>();
        inst.pi_true = Permutation(j.at("pi_true").get<std::vector<int>>());
        inst.A = j.at("A").get<std::vector<double>>();
        inst.B = j.at("B").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("instance: ") + e.what());
    }
    if (inst.pi_true.size() != inst.n)
        throw ConfigError("instance: pi_true size does not match n");
    validate_permutation(inst.pi_true);
    const auto m = static_cast<std::size_t>(num_edge_slots(inst.n));
    if (inst.A.size() != m || inst.B.size() != m)
        throw ConfigError("instance: A/B length does not match n(n-1)/2");
    return inst;
}

} // namespace graphmatch
