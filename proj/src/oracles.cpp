#include "graphmatch/oracles.hpp"

#include <cmath>
#include <vector>

#include "graphmatch/errors.hpp"
#include "graphmatch/rng.hpp"

namespace graphmatch::oracles {

namespace {

void check_orbit_length(int k, int cap) {
    if (k < 1) throw ConfigError("orbit length k must be >= 1");
    if (k > cap) {
        throw ConfigError("enumerated orbit oracle supports k <= " + std::to_string(cap));
    }
}

double cell_prob(const GeneralER& cells, int a, int b) {
    if (a == 1) return b == 1 ? cells.p11 : cells.p10;
    return b == 1 ? cells.p01 : cells.p00;
}

template <typename Statistic>
double enumerate_orbit(const GeneralER& cells, double t, int k, Statistic stat) {
    const std::uint64_t total = std::uint64_t{1} << (2 * k);
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        int a[32];
        int b[32];
        double prob = 1.0;
        for (int i = 0; i < k; ++i) {
            a[i] = static_cast<int>((mask >> (2 * i)) & 1u);
            b[i] = static_cast<int>((mask >> (2 * i + 1)) & 1u);
            prob *= cell_prob(cells, a[i], b[i]);
        }
        if (prob == 0.0) continue;
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += stat(a[(i + 1) % k], a[i], b[i]);
        acc += prob * std::exp(t * s);
    }
    return acc;
}

// One MC substream: accumulates sum of exp(t*S) and its square.
template <typename Statistic>
void mc_chunk(double rho, double t, int k, std::int64_t samples, std::uint64_t seed,
              Statistic stat, double& sum_x, double& sum_x2) {
    CounterRng rng(seed);
    NormalStream normals(rng);
    const double noise = std::sqrt(1.0 - rho * rho);
    std::vector<double> a(static_cast<std::size_t>(k));
    std::vector<double> b(static_cast<std::size_t>(k));
    sum_x = 0.0;
    sum_x2 = 0.0;
    for (std::int64_t it = 0; it < samples; ++it) {
        for (int i = 0; i < k; ++i) a[static_cast<std::size_t>(i)] = normals.next();
        for (int i = 0; i < k; ++i) {
            b[static_cast<std::size_t>(i)] =
                rho * a[static_cast<std::size_t>(i)] + noise * normals.next();
        }
        double s = 0.0;
        for (int i = 0; i < k; ++i) {
            s += stat(a[static_cast<std::size_t>((i + 1) % k)], a[static_cast<std::size_t>(i)],
                      b[static_cast<std::size_t>(i)]);
        }
        const double x = std::exp(t * s);
        sum_x += x;
        sum_x2 += x * x;
    }
}

template <typename Statistic>
MonteCarloMgf mc_estimate(double rho, double t, int k, std::int64_t samples,
                          std::uint64_t seed, Statistic stat) {
    if (!(rho > -1.0 && rho < 1.0)) throw ConfigError("Monte Carlo oracle needs |rho| < 1");
    check_orbit_length(k, 64);
    if (samples < 2) throw ConfigError("Monte Carlo oracle needs at least 2 samples");

    constexpr int kChunks = 256;
    const int chunks = samples < kChunks ? 1 : kChunks;
    std::vector<double> xs(static_cast<std::size_t>(chunks), 0.0);
    std::vector<double> x2s(static_cast<std::size_t>(chunks), 0.0);

#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) {
        const std::int64_t lo = samples * c / chunks;
        const std::int64_t hi = samples * (c + 1) / chunks;
        mc_chunk(rho, t, k, hi - lo, substream_seed(seed, static_cast<std::uint64_t>(c)),
                 stat, xs[static_cast<std::size_t>(c)], x2s[static_cast<std::size_t>(c)]);
    }

    double sum_x = 0.0;
    double sum_x2 = 0.0;
    for (int c = 0; c < chunks; ++c) {
        sum_x += xs[static_cast<std::size_t>(c)];
        sum_x2 += x2s[static_cast<std::size_t>(c)];
    }
    const double nd = static_cast<double>(samples);
    const double mean = sum_x / nd;
    const double var = std::max(0.0, (sum_x2 - nd * mean * mean) / (nd - 1.0));
    return MonteCarloMgf{mean, std::sqrt(var / nd), samples};
}

double lu_det(std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r) {
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) >
                std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)])) {
                piv = r;
            }
        }
        if (piv != c) {
            std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(c)]);
            d = -d;
        }
        const double pivot = a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        if (pivot == 0.0) return 0.0;
        d *= pivot;
        for (int r = c + 1; r < n; ++r) {
            const double f =
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / pivot;
            for (int cc = c; cc < n; ++cc) {
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
                    f * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)];
            }
        }
    }
    return d;
}

// The orbit statistic is b' M a with M = shift (M kind) or shift - I (L kind)
// on the k aligned pairs; z = (a, b) has covariance [[I, rho I], [rho I, I]].
double det_mgf(double rho, double t, int k, bool l_kind) {
    if (!(rho > -1.0 && rho < 1.0)) throw ConfigError("determinant oracle needs |rho| < 1");
    check_orbit_length(k, 64);
    const int n = 2 * k;
    std::vector<std::vector<double>> m(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int i = 0; i < k; ++i) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>((i + 1) % k)] += 1.0;
        if (l_kind) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] -= 1.0;
    }
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double mij = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const double mji = m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -t * rho * mij;
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k + j)] = -t * mji;
            a[static_cast<std::size_t>(k + i)][static_cast<std::size_t>(j)] = -t * mij;
            a[static_cast<std::size_t>(k + i)][static_cast<std::size_t>(k + j)] = -t * rho * mji;
        }
    }
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += 1.0;
    const double d = lu_det(a);
    if (d <= 0.0) throw DomainError("determinant oracle: tilt beyond the validity window");
    return 1.0 / std::sqrt(d);
}

} // namespace

double orbit_mgf_m_gaussian_det(double rho, double t, int k) {
    return det_mgf(rho, t, k, false);
}

double orbit_mgf_l_gaussian_det(double rho, double t, int k) {
    return det_mgf(rho, t, k, true);
}

double orbit_mgf_m_enumerated(const GeneralER& cells, double t, int k) {
    check_orbit_length(k, 10);
    if (std::abs(cells.p01 - cells.p10) > 1e-12) {
        throw UnsupportedModelError("centered orbit statistic requires symmetric cells");
    }
    const double q = edge_density(cells);
    return enumerate_orbit(cells, t, k, [q](int a_next, int /*a_cur*/, int b) {
        return (a_next - q) * (b - q);
    });
}

double orbit_mgf_l_enumerated(const GeneralER& cells, double t, int k) {
    check_orbit_length(k, 10);
    return enumerate_orbit(cells, t, k, [](int a_next, int a_cur, int b) {
        return static_cast<double>((a_next - a_cur) * b);
    });
}

MonteCarloMgf orbit_mgf_m_gaussian_mc(double rho, double t, int k, std::int64_t samples,
                                      std::uint64_t seed) {
    return mc_estimate(rho, t, k, samples, seed,
                       [](double a_next, double /*a_cur*/, double b) { return a_next * b; });
}

MonteCarloMgf orbit_mgf_l_gaussian_mc(double rho, double t, int k, std::int64_t samples,
                                      std::uint64_t seed) {
    return mc_estimate(rho, t, k, samples, seed,
                       [](double a_next, double a_cur, double b) { return (a_next - a_cur) * b; });
}

double trinomial_tail_enumerated(double a, double b, int n, double tau) {
    if (!(a >= 0.0 && b >= 0.0 && a + b <= 1.0)) {
        throw ConfigError("step probabilities must satisfy a, b >= 0 and a + b <= 1");
    }
    if (n < 1 || n > 14) throw ConfigError("enumerated tail oracle supports 1 <= n <= 14");
    const double probs[3] = {b, 1.0 - a - b, a}; // steps -1, 0, +1
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    double acc = 0.0;
    for (;;) {
        double prob = 1.0;
        int sum = 0;
        for (int i = 0; i < n; ++i) {
            const int d = digits[static_cast<std::size_t>(i)];
            prob *= probs[d];
            sum += d - 1;
        }
        if (static_cast<double>(sum) <= -tau) acc += prob;
        int pos = 0;
        while (pos < n && digits[static_cast<std::size_t>(pos)] == 2) {
            digits[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
        ++digits[static_cast<std::size_t>(pos)];
    }
    return acc;
}

double discrete_mi(const GeneralER& cells) {
    const double table[2][2] = {{cells.p00, cells.p01}, {cells.p10, cells.p11}};
    const double pa[2] = {cells.p00 + cells.p01, cells.p10 + cells.p11};
    const double pb[2] = {cells.p00 + cells.p10, cells.p01 + cells.p11};
    double mi = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double cell = table[x][y];
            if (cell > 0.0) mi += cell * std::log(cell / (pa[x] * pb[y]));
        }
    }
    return mi;
}

} // namespace graphmatch::oracles
