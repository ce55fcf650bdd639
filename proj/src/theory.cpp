#include "graphmatch/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphmatch/errors.hpp"

namespace graphmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSmallTiltCap = 0x1.0p-10;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

} // namespace

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("binary_entropy: argument must lie in [0,1]");
    return -xlogx(x) - xlogx(1.0 - x);
}

double binary_kl(double s, double q) {
    if (!(s >= 0.0 && s <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw DomainError("binary_kl: arguments must lie in [0,1]");
    if (q == 0.0) return s == 0.0 ? 0.0 : kInf;
    if (q == 1.0) return s == 1.0 ? 0.0 : kInf;
    double r = 0.0;
    if (s > 0.0) r += s * std::log(s / q);
    if (s < 1.0) r += (1.0 - s) * std::log((1.0 - s) / (1.0 - q));
    return r;
}

double edge_pair_mi(const CorrelationModel& model) {
    validate_model(model);
    if (const auto* g = std::get_if<Gaussian>(&model)) {
        const double r2 = g->rho * g->rho;
        if (r2 >= 1.0) return kInf;
        return -0.5 * std::log1p(-r2);
    }
    if (const auto* m = std::get_if<SubsampledER>(&model)) {
        const double q = m->p * m->s;
        if (q >= 1.0) return 0.0; // both graphs deterministically complete
        const double eta = q * (1.0 - m->s) / (1.0 - q);
        return q * binary_kl(m->s, q) + (1.0 - q) * binary_kl(eta, q);
    }
    const auto& c = std::get<GeneralER>(model);
    const double pa1 = c.p11 + c.p10, pa0 = c.p01 + c.p00;
    const double pb1 = c.p11 + c.p01, pb0 = c.p10 + c.p00;
    double mi = 0.0;
    const struct { double joint, ma, mb; } cells[] = {
        {c.p11, pa1, pb1}, {c.p10, pa1, pb0}, {c.p01, pa0, pb1}, {c.p00, pa0, pb0}};
    for (const auto& cell : cells)
        if (cell.joint > 0.0) mi += cell.joint * std::log(cell.joint / (cell.ma * cell.mb));
    return std::max(0.0, mi);
}

double mi_taylor_er(double p, double s) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("mi_taylor_er: p must lie in (0,1]");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("mi_taylor_er: s must lie in (0,1]");
    return s * s * p * (p - 1.0 + std::log(1.0 / p));
}

double phi_ratio(double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("phi_ratio: argument must lie in (0,1)");
    const double lg = std::log(1.0 / x);
    return (lg - 1.0 + x) / (x * lg * (1.0 + lg));
}

namespace {

// Trace-power closed form: mu_-^k + mu_+^k for the 2x2 transfer matrix with
// trace tr and determinant det (requires tr^2 >= 4 det up to roundoff).
double trace_power(double tr, double det, int k) {
    double disc2 = tr * tr - 4.0 * det;
    if (disc2 < 0.0) {
        if (disc2 < -1e-12)
            throw DomainError("orbit mgf: transfer matrix has complex eigenvalues");
        disc2 = 0.0;
    }
    const double disc = std::sqrt(disc2);
    return std::pow((tr - disc) / 2.0, k) + std::pow((tr + disc) / 2.0, k);
}

struct QS {
    double q, s;
};

// Symmetric-cell parametrization (q, s): marginals Bern(q), P(b=1|a=1) = s.
QS symmetric_params(const CorrelationModel& model) {
    if (const auto* m = std::get_if<SubsampledER>(&model)) return {m->p * m->s, m->s};
    const GeneralER c = to_cells(model);
    if (std::abs(c.p01 - c.p10) > 1e-12)
        throw UnsupportedModelError(
            "orbit_mgf_m: general cells must be symmetric (p01 == p10)");
    const double q = c.p11 + c.p10;
    if (q <= 0.0) throw DomainError("orbit_mgf_m: degenerate edge density q = 0");
    return {q, c.p11 / q};
}

void check_tilt_order(double t, int k) {
    if (!(t >= 0.0)) throw ConfigError("orbit mgf: tilt t must be >= 0");
    if (k < 1) throw ConfigError("orbit mgf: orbit length k must be >= 1");
}

} // namespace

double orbit_mgf_m(const CorrelationModel& model, double t, int k) {
    validate_model(model);
    check_tilt_order(t, k);
    if (const auto* g = std::get_if<Gaussian>(&model)) {
        const double rho = g->rho;
        const double r1 = (1.0 + rho * t) * (1.0 + rho * t) - t * t;
        const double r2 = (1.0 - rho * t) * (1.0 - rho * t) - t * t;
        if (r1 <= 0.0 || r2 <= 0.0)
            throw DomainError("orbit_mgf_m: gaussian form requires t < 1/(1+|rho|)");
        const double l1 = std::sqrt(r1), l2 = std::sqrt(r2);
        const double denom =
            std::pow((l1 + l2) / 2.0, k) - std::pow((l1 - l2) / 2.0, k);
        if (denom <= 0.0)
            throw DomainError("orbit_mgf_m: gaussian form diverges at this tilt");
        return 1.0 / denom;
    }
    const QS ps = symmetric_params(model);
    const double q = ps.q, s = ps.s;
    const double tr = std::exp(t * (1.0 - q) * (1.0 - q)) * q * s +
                      2.0 * std::exp(-t * q * (1.0 - q)) * q * (1.0 - s) +
                      std::exp(t * q * q) * (1.0 - 2.0 * q + q * s);
    const double det =
        (std::exp(t * ((1.0 - q) * (1.0 - q) + q * q)) - std::exp(-2.0 * t * q * (1.0 - q))) *
        q * (s - q);
    return trace_power(tr, det, k);
}

double orbit_mgf_l(const CorrelationModel& model, double t, int k) {
    validate_model(model);
    check_tilt_order(t, k);
    if (const auto* g = std::get_if<Gaussian>(&model)) {
        const double rho = g->rho;
        const double l2sq = 1.0 + 4.0 * t * rho - 4.0 * t * t * (1.0 - rho * rho);
        if (l2sq <= 0.0)
            throw DomainError("orbit_mgf_l: gaussian form requires 1+4t*rho-4t^2(1-rho^2) > 0");
        const double l2 = std::sqrt(l2sq);
        // Transfer eigenvalues (l2 +- 1)/2: the difference term carries l2 - 1,
        // which keeps the form equal to the defining expectation for every
        // cycle length (odd lengths included; a 1-cycle gives exactly 1).
        const double denom =
            std::pow((l2 + 1.0) / 2.0, k) - std::pow((l2 - 1.0) / 2.0, k);
        if (denom <= 0.0)
            throw DomainError("orbit_mgf_l: gaussian form diverges at this tilt");
        return 1.0 / denom;
    }
    const GeneralER c = to_cells(model);
    const double det =
        -(c.p01 * c.p10 * std::expm1(t) + c.p00 * c.p11 * std::expm1(-t));
    return trace_power(1.0, det, k);
}

MgfPowerBounds mgf_power_bounds(const CorrelationModel& model, double t, int k_max) {
    if (k_max < 2) throw ConfigError("mgf_power_bounds: k_max must be >= 2");
    MgfPowerBounds out;
    out.m_values.reserve(static_cast<std::size_t>(k_max));
    out.l_values.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        out.m_values.push_back(orbit_mgf_m(model, t, k));
        out.l_values.push_back(orbit_mgf_l(model, t, k));
    }
    const double m2 = out.m_values[1], l2 = out.l_values[1];
    for (int k = 2; k <= k_max; ++k) {
        out.max_violation_m = std::max(
            out.max_violation_m, out.m_values[static_cast<std::size_t>(k - 1)] - std::pow(m2, k / 2.0));
        out.max_violation_l = std::max(
            out.max_violation_l, out.l_values[static_cast<std::size_t>(k - 1)] - std::pow(l2, k / 2.0));
    }
    return out;
}

M2Bounds m2_upper_bounds(double p, double s, double t) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("m2_upper_bounds: p must lie in (0,1)");
    if (!(s > 0.0 && s <= 1.0)) throw ConfigError("m2_upper_bounds: s must lie in (0,1]");
    if (!(t >= 0.0)) throw ConfigError("m2_upper_bounds: t must be >= 0");
    const double q = p * s;
    if (q > 0.5)
        throw ConfigError("m2_upper_bounds: requires p*s <= 1/2 (flip the model first)");

    M2Bounds out;
    // M2 = tr^2 - 2 det of the transfer matrix: avoids cancellation in the
    // eigenvalue split when both bounds sit within 1e-12 of 1.
    const double tr = std::exp(t * (1.0 - q) * (1.0 - q)) * q * s +
                      2.0 * std::exp(-t * q * (1.0 - q)) * q * (1.0 - s) +
                      std::exp(t * q * q) * (1.0 - 2.0 * q + q * s);
    const double det =
        (std::exp(t * ((1.0 - q) * (1.0 - q) + q * q)) - std::exp(-2.0 * t * q * (1.0 - q))) *
        q * (s - q);
    out.m1 = tr;
    out.m2_exact = tr * tr - 2.0 * det;
    out.m1sq_over_m2 = tr * tr / out.m2_exact;

    if (t <= std::log(1.0 / p)) {
        out.bound_moderate_tilt = 1.0 + q * q * s * s - 2.0 * q * q +
                                  10.0 * q * q * q * t * (1.0 + t) +
                                  2.0 * std::exp(t) * q * q * (1.0 - s * s) +
                                  std::exp(2.0 * t) * q * q * s * s;
    }
    if (t <= kSmallTiltCap) {
        const double sigma2 = q * (1.0 - q);
        const double rho = (s - q) / (1.0 - q);
        out.bound_small_tilt =
            1.0 + t * t * sigma2 * sigma2 * (1.0 + rho * rho) + 8.0 * t * t * t * q * s;
    }
    return out;
}

double trinomial_tail(double a, double b, std::int64_t n, double tau) {
    if (!(a >= 0.0 && b >= 0.0 && a + b <= 1.0 + 1e-15))
        throw ConfigError("trinomial_tail: need a,b >= 0 and a+b <= 1");
    if (n < 0) throw ConfigError("trinomial_tail: n must be >= 0");
    constexpr std::int64_t kMaxN = 500000;
    if (n > kMaxN)
        throw CapacityError("trinomial_tail: n exceeds DP capacity " + std::to_string(kMaxN));

    const double cut_real = std::floor(-tau); // P(S <= -tau) = P(S <= floor(-tau))
    if (cut_real < static_cast<double>(-n)) return 0.0;
    const std::int64_t cut = static_cast<std::int64_t>(cut_real);

    const double c0 = 1.0 - a - b;
    const std::size_t width = static_cast<std::size_t>(2 * n + 1);
    std::vector<double> cur(width, 0.0), nxt(width, 0.0);
    cur[static_cast<std::size_t>(n)] = 1.0; // value v stored at index v + n
    for (std::int64_t step = 0; step < n; ++step) {
        const std::int64_t lo = n - step - 1, hi = n + step + 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (hi - lo > 8192)
#endif
        for (std::int64_t v = lo; v <= hi; ++v) {
            const auto u = static_cast<std::size_t>(v);
            double acc = c0 * cur[u];
            if (v > 0) acc += a * cur[u - 1];
            if (v + 1 < static_cast<std::int64_t>(width)) acc += b * cur[u + 1];
            nxt[u] = acc;
        }
        std::swap(cur, nxt);
    }

    // Kahan-compensated tail sum from the left edge.
    const std::int64_t last = std::min(cut, n) + n;
    double sum = 0.0, comp = 0.0;
    for (std::int64_t idx = 0; idx <= last; ++idx) {
        const double y = cur[static_cast<std::size_t>(idx)] - comp;
        const double t2 = sum + y;
        comp = (t2 - sum) - y;
        sum = t2;
    }
    return std::min(1.0, sum);
}

std::string regime_name(RecoveryRegime r) {
    switch (r) {
        case RecoveryRegime::exact_recoverable: return "exact-recoverable";
        case RecoveryRegime::almost_exact_only: return "almost-exact-only";
        case RecoveryRegime::partial_only_band: return "partial-only-band";
        case RecoveryRegime::partial_impossible: return "partial-impossible";
        case RecoveryRegime::indeterminate_band: return "indeterminate-band";
    }
    return "indeterminate-band";
}

nlohmann::json ThresholdReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["epsilon"] = epsilon;
    j["regime"] = regime_name(regime);
    j["statistics"] = nlohmann::json::array();
    for (const auto& s : statistics) {
        j["statistics"].push_back({{"name", s.name},
                                   {"statistic", s.statistic},
                                   {"threshold", s.threshold},
                                   {"ratio", s.ratio}});
    }
    return j;
}

ThresholdReport threshold_report(const CorrelationModel& model, std::int64_t n, double epsilon,
                                 double band) {
    validate_model(model);
    if (n < 2) throw ConfigError("threshold_report: n must be >= 2");
    if (!(epsilon >= 0.0)) throw ConfigError("threshold_report: epsilon must be >= 0");
    const double logn = std::log(static_cast<double>(n));

    ThresholdReport rep;
    rep.n = n;
    rep.epsilon = epsilon;

    const auto push = [&rep](std::string name, double stat, double thr) {
        rep.statistics.push_back(
            {std::move(name), stat, thr, thr > 0.0 ? stat / thr : kInf});
    };
    const auto in_band = [band](double ratio) { return std::abs(ratio - 1.0) <= band; };

    if (const auto* g = std::get_if<Gaussian>(&model)) {
        const double stat = static_cast<double>(n) * g->rho * g->rho;
        push("exact_recovery", stat, 4.0 * logn);
        const double r = rep.statistics[0].ratio;
        if (in_band(r))
            rep.regime = RecoveryRegime::indeterminate_band;
        else if (r >= 1.0 + epsilon)
            rep.regime = RecoveryRegime::exact_recoverable;
        else if (r <= 1.0 - epsilon)
            rep.regime = RecoveryRegime::partial_impossible;
        else
            rep.regime = RecoveryRegime::indeterminate_band;
        return rep;
    }

    const GeneralER c = to_cells(model);
    const double hel =
        std::sqrt(c.p00 * c.p11) - std::sqrt(c.p01 * c.p10); // sqrt-cell gap
    push("exact_recovery", static_cast<double>(n) * hel * hel, logn);
    const double r_exact = rep.statistics[0].ratio;

    const auto* sub = std::get_if<SubsampledER>(&model);
    if (sub == nullptr || sub->p >= 1.0) {
        // No (p,s) decomposition with p < 1: only the cell-based statistic.
        if (in_band(r_exact))
            rep.regime = RecoveryRegime::indeterminate_band;
        else if (r_exact >= 1.0 + epsilon)
            rep.regime = RecoveryRegime::exact_recoverable;
        else
            rep.regime = RecoveryRegime::indeterminate_band;
        return rep;
    }

    const double p = sub->p, s = sub->s;
    const double nps2 = static_cast<double>(n) * p * s * s;
    const double lg1p = std::log(1.0 / p);
    push("almost_exact", nps2 * (lg1p - 1.0 + p), 2.0 * logn);
    push("partial_sparse", nps2, 2.0 * std::max(logn / lg1p, 2.0));
    push("partial_converse", nps2, 1.0);
    const double r_almost = rep.statistics[1].ratio;
    const double r_partial = rep.statistics[2].ratio;
    const double r_conv = rep.statistics[3].ratio;

    if (in_band(r_exact) || in_band(r_almost) || in_band(r_partial) || in_band(r_conv))
        rep.regime = RecoveryRegime::indeterminate_band;
    else if (r_exact >= 1.0 + epsilon)
        rep.regime = RecoveryRegime::exact_recoverable;
    else if (r_almost >= 1.0 + epsilon)
        rep.regime = RecoveryRegime::almost_exact_only;
    else if (r_partial >= 1.0 + epsilon)
        rep.regime = RecoveryRegime::partial_only_band;
    else if (r_almost <= 1.0 - epsilon && r_conv <= 1.0 - epsilon)
        rep.regime = RecoveryRegime::partial_impossible;
    else
        rep.regime = RecoveryRegime::indeterminate_band;
    return rep;
}

} // namespace graphmatch
