#include "graphmatch/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "graphmatch/errors.hpp"
#include "graphmatch/rng.hpp"

namespace graphmatch {

namespace {

constexpr double kTieRel = 1e-9;
constexpr int kDriftResync = 16384; // incremental steps between full recomputes

void check_instance_shape(const MatchInstance& inst) {
    if (inst.n < 0) throw ConfigError("instance has negative n");
    const std::size_t m = static_cast<std::size_t>(num_edge_slots(inst.n));
    if (inst.A.size() != m || inst.B.size() != m)
        throw ConfigError("instance edge arrays do not match n");
    if (inst.pi_true.size() != inst.n) throw ConfigError("instance pi_true does not match n");
}

// Dense symmetric view (zero diagonal) of an edge-slot vector.
std::vector<double> dense_symmetric(int n, const std::vector<double>& edges) {
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = edges[edge_index(n, i, j)];
            m[static_cast<std::size_t>(i) * n + j] = v;
            m[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return m;
}

double recompute_objective(int n, const std::vector<double>& ahat,
                           const std::vector<double>& bhat, const std::vector<int>& img) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* brow = bhat.data() + static_cast<std::size_t>(i) * n;
        const double* arow = ahat.data() + static_cast<std::size_t>(img[i]) * n;
        for (int j = i + 1; j < n; ++j) s += arow[img[j]] * brow[j];
    }
    return s;
}

// Objective change from swapping the images at positions a and b (img is the
// state BEFORE the swap): sum over k outside {a,b} of
// (ahat[img[b]][img[k]] - ahat[img[a]][img[k]]) * (bhat[a][k] - bhat[b][k]).
double swap_delta(int n, const std::vector<double>& ahat, const std::vector<double>& bhat,
                  const std::vector<int>& img, int a, int b) {
    const double* au = ahat.data() + static_cast<std::size_t>(img[a]) * n;
    const double* aw = ahat.data() + static_cast<std::size_t>(img[b]) * n;
    const double* ba = bhat.data() + static_cast<std::size_t>(a) * n;
    const double* bb = bhat.data() + static_cast<std::size_t>(b) * n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        if (k == a || k == b) continue;
        s += (aw[img[k]] - au[img[k]]) * (ba[k] - bb[k]);
    }
    return s;
}

bool better(bool maximize, double a, double b) { return maximize ? (a > b) : (a < b); }

struct Incumbent {
    bool have = false;
    double val = 0.0;
    std::vector<int> perm;
    std::int64_t count = 0;
};

// Record one candidate. Values within 1e-9*(1+|best|) of the incumbent are
// counted as co-optimizers and the lexicographically smallest one is kept;
// a strictly better value resets the group. Exact for integer-valued
// objectives; for continuous ones true ties (e.g. automorphisms) land well
// inside the tolerance while distinct values land well outside it.
void offer(Incumbent& inc, bool maximize, double val, const std::vector<int>& img) {
    if (!inc.have) {
        inc.have = true;
        inc.val = val;
        inc.perm = img;
        inc.count = 1;
        return;
    }
    const double tol = kTieRel * (1.0 + std::fabs(inc.val));
    if (std::fabs(val - inc.val) <= tol) {
        ++inc.count;
        if (std::lexicographical_compare(img.begin(), img.end(), inc.perm.begin(), inc.perm.end()))
            inc.perm = img;
        if (better(maximize, val, inc.val)) inc.val = val;
    } else if (better(maximize, val, inc.val)) {
        inc.val = val;
        inc.perm = img;
        inc.count = 1;
    }
}

void merge(Incumbent& into, const Incumbent& from, bool maximize) {
    if (!from.have) return;
    if (!into.have) {
        into = from;
        return;
    }
    const double tol = kTieRel * (1.0 + std::fabs(into.val));
    if (std::fabs(from.val - into.val) <= tol) {
        into.count += from.count;
        if (std::lexicographical_compare(from.perm.begin(), from.perm.end(), into.perm.begin(),
                                         into.perm.end()))
            into.perm = from.perm;
        if (better(maximize, from.val, into.val)) into.val = from.val;
    } else if (better(maximize, from.val, into.val)) {
        into = from;
    }
}

struct Direction {
    bool maximize = true;
    bool degenerate = false; // model sign is zero; direction is a convention
};

Direction resolve_direction(const CorrelationModel& model,
                            const std::optional<bool>& override_dir) {
    Direction dir;
    const CorrelationSign sgn = correlation_sign(model);
    dir.degenerate = (sgn == CorrelationSign::zero);
    if (override_dir.has_value()) {
        dir.maximize = *override_dir;
    } else {
        dir.maximize = (sgn != CorrelationSign::negative);
    }
    return dir;
}

MatchResult trivial_result(int n, const char* method, const Direction& dir) {
    MatchResult r;
    r.pi_hat = Permutation::identity(n);
    r.objective_value = 0.0;
    r.optimizer_count = 1;
    r.evaluations = 1;
    r.method = method;
    r.degenerate_sign = dir.degenerate;
    return r;
}

} // namespace

double objective(const MatchInstance& inst, const Permutation& pi_cand) {
    check_instance_shape(inst);
    if (pi_cand.size() != inst.n) throw ConfigError("candidate permutation does not match n");
    validate_permutation(pi_cand);
    const int n = inst.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int u = pi_cand(i);
            const int w = pi_cand(j);
            s += inst.A[edge_index(n, std::min(u, w), std::max(u, w))] *
                 inst.B[edge_index(n, i, j)];
        }
    }
    return s;
}

MatchResult solve_exact(const MatchInstance& inst, const ExactOptions& opts) {
    check_instance_shape(inst);
    const Direction dir = resolve_direction(inst.model, opts.maximize);
    const bool maximize = dir.maximize;
    const int n = inst.n;
    if (n > opts.capacity)
        throw CapacityError("exhaustive search over n! relabelings refused for n = " +
                            std::to_string(n) +
                            "; raise the capacity or use the local-search estimator");
    if (n <= 1) return trivial_result(n, "exhaustive", dir);

    const std::vector<double> ahat = dense_symmetric(n, inst.A);
    const std::vector<double> bhat = dense_symmetric(n, inst.B);

    std::vector<Incumbent> branch_best(n);
    std::vector<std::int64_t> branch_evals(n, 0);

#pragma omp parallel for schedule(dynamic, 1)
    for (int v = 0; v < n; ++v) {
        std::vector<int> img;
        img.reserve(n);
        img.push_back(v);
        for (int u = 0; u < n; ++u)
            if (u != v) img.push_back(u);

        double obj = recompute_objective(n, ahat, bhat, img);
        Incumbent best;
        std::int64_t evals = 0;
        offer(best, maximize, obj, img);
        ++evals;

        // Iterative Heap enumeration of the images at positions 1..n-1; each
        // step swaps two positions and updates the objective in O(n).
        const int len = n - 1;
        std::vector<int> c(len, 0);
        int drift = 0;
        int i = 0;
        while (i < len) {
            if (c[i] < i) {
                const int pa = 1 + ((i % 2 == 0) ? 0 : c[i]);
                const int pb = 1 + i;
                obj += swap_delta(n, ahat, bhat, img, pa, pb);
                std::swap(img[pa], img[pb]);
                if (++drift >= kDriftResync) {
                    obj = recompute_objective(n, ahat, bhat, img);
                    drift = 0;
                }
                offer(best, maximize, obj, img);
                ++evals;
                ++c[i];
                i = 0;
            } else {
                c[i] = 0;
                ++i;
            }
        }
        branch_best[v] = std::move(best);
        branch_evals[v] = evals;
    }

    Incumbent global;
    std::int64_t evals = 0;
    for (int v = 0; v < n; ++v) {
        merge(global, branch_best[v], maximize);
        evals += branch_evals[v];
    }

    MatchResult r;
    r.pi_hat = Permutation{global.perm};
    r.objective_value = global.val;
    r.optimizer_count = global.count;
    r.evaluations = evals;
    r.method = "exhaustive";
    r.degenerate_sign = dir.degenerate;
    return r;
}

MatchResult solve_exact_reference(const MatchInstance& inst, const ExactOptions& opts) {
    check_instance_shape(inst);
    const Direction dir = resolve_direction(inst.model, opts.maximize);
    const bool maximize = dir.maximize;
    const int n = inst.n;
    if (n > opts.capacity)
        throw CapacityError("exhaustive search over n! relabelings refused for n = " +
                            std::to_string(n) +
                            "; raise the capacity or use the local-search estimator");
    if (n <= 1) return trivial_result(n, "exhaustive-reference", dir);

    const std::vector<double> ahat = dense_symmetric(n, inst.A);
    const std::vector<double> bhat = dense_symmetric(n, inst.B);

    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[i] = i;

    Incumbent best;
    std::int64_t evals = 0;
    do {
        offer(best, maximize, recompute_objective(n, ahat, bhat, img), img);
        ++evals;
    } while (std::next_permutation(img.begin(), img.end()));

    MatchResult r;
    r.pi_hat = Permutation{best.perm};
    r.objective_value = best.val;
    r.optimizer_count = best.count;
    r.evaluations = evals;
    r.method = "exhaustive-reference";
    r.degenerate_sign = dir.degenerate;
    return r;
}

namespace {

struct LocalRun {
    double val = 0.0;
    std::vector<int> perm;
    std::int64_t evals = 0;
};

LocalRun run_one_restart(int n, const std::vector<double>& ahat, const std::vector<double>& bhat,
                         std::vector<int> img, bool maximize) {
    const auto at = [&](const std::vector<double>& m, int r, int c2) {
        return m[static_cast<std::size_t>(r) * n + c2];
    };

    double obj = recompute_objective(n, ahat, bhat, img);
    std::int64_t evals = 1;

    // delta[a*n+b] = objective change from swapping positions a and b.
    std::vector<double> delta(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            delta[static_cast<std::size_t>(a) * n + b] = swap_delta(n, ahat, bhat, img, a, b);
    evals += static_cast<std::int64_t>(n) * (n - 1) / 2;

    const std::int64_t max_steps = 1000000;
    for (std::int64_t step = 0; step < max_steps; ++step) {
        // Steepest improving swap; ties go to the smallest (a,b) pair.
        int best_a = -1;
        int best_b = -1;
        double best_gain = 0.0;
        for (int a = 0; a < n; ++a) {
            const double* row = delta.data() + static_cast<std::size_t>(a) * n;
            for (int b = a + 1; b < n; ++b) {
                const double gain = maximize ? row[b] : -row[b];
                if (gain > best_gain) {
                    best_gain = gain;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        evals += static_cast<std::int64_t>(n) * (n - 1) / 2;
        if (best_a < 0 || best_gain <= kTieRel * (1.0 + std::fabs(obj))) break;

        const int a = best_a;
        const int b = best_b;
        const int u = img[a]; // images before the swap
        const int w = img[b];
        obj += delta[static_cast<std::size_t>(a) * n + b];

        // O(1) correction for every pair disjoint from {a,b}: only the k=a and
        // k=b terms of its delta change, and they just exchange image rows.
        for (int i = 0; i < n; ++i) {
            if (i == a || i == b) continue;
            double* row = delta.data() + static_cast<std::size_t>(i) * n;
            for (int j = i + 1; j < n; ++j) {
                if (j == a || j == b) continue;
                const double afac = (at(ahat, img[j], w) - at(ahat, img[i], w)) -
                                    (at(ahat, img[j], u) - at(ahat, img[i], u));
                const double bfac = (at(bhat, i, a) - at(bhat, j, a)) -
                                    (at(bhat, i, b) - at(bhat, j, b));
                row[j] += afac * bfac;
            }
        }

        std::swap(img[a], img[b]);

        // Pairs touching a or b: recompute from scratch.
        for (int k = 0; k < n; ++k) {
            if (k != a) {
                const int lo = std::min(k, a);
                const int hi = std::max(k, a);
                delta[static_cast<std::size_t>(lo) * n + hi] =
                    swap_delta(n, ahat, bhat, img, lo, hi);
            }
            if (k != b && k != a) {
                const int lo = std::min(k, b);
                const int hi = std::max(k, b);
                delta[static_cast<std::size_t>(lo) * n + hi] =
                    swap_delta(n, ahat, bhat, img, lo, hi);
            }
        }
    }

    LocalRun out;
    out.val = recompute_objective(n, ahat, bhat, img);
    out.perm = std::move(img);
    out.evals = evals;
    return out;
}

} // namespace

MatchResult solve_local(const MatchInstance& inst, const LocalOptions& opts) {
    check_instance_shape(inst);
    const Direction dir = resolve_direction(inst.model, opts.maximize);
    const bool maximize = dir.maximize;
    if (opts.restarts < 1) throw ConfigError("solve_local needs restarts >= 1");
    const int n = inst.n;
    if (n <= 1) return trivial_result(n, "local-search", dir);

    const std::vector<double> ahat = dense_symmetric(n, inst.A);
    const std::vector<double> bhat = dense_symmetric(n, inst.B);
    const int restarts = opts.restarts;

    std::vector<LocalRun> runs(static_cast<std::size_t>(restarts));

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> start;
        if (r == 0 && opts.include_truth_start) {
            start = inst.pi_true.img;
        } else {
            CounterRng rng(substream_seed(opts.seed, static_cast<std::uint64_t>(r)));
            start = random_permutation(n, rng).img;
        }
        runs[r] = run_one_restart(n, ahat, bhat, std::move(start), maximize);
    }

    // Fold in restart order: a strictly better value wins; within tolerance
    // the earlier restart's permutation is kept. optimizer_count reports how
    // many restarts landed on the reported value.
    Incumbent global;
    std::int64_t evals = 0;
    for (int r = 0; r < restarts; ++r) {
        evals += runs[r].evals;
        if (!global.have) {
            global.have = true;
            global.val = runs[r].val;
            global.perm = runs[r].perm;
            global.count = 1;
            continue;
        }
        const double tol = kTieRel * (1.0 + std::fabs(global.val));
        if (std::fabs(runs[r].val - global.val) <= tol) {
            ++global.count;
            if (better(maximize, runs[r].val, global.val)) global.val = runs[r].val;
        } else if (better(maximize, runs[r].val, global.val)) {
            global.val = runs[r].val;
            global.perm = runs[r].perm;
            global.count = 1;
        }
    }

    MatchResult res;
    res.pi_hat = Permutation{global.perm};
    res.objective_value = global.val;
    res.optimizer_count = global.count;
    res.evaluations = evals;
    res.method = "local-search";
    res.degenerate_sign = dir.degenerate;
    return res;
}

std::vector<TranspositionStat> transposition_scan(const MatchInstance& inst,
                                                  const Permutation* at) {
    check_instance_shape(inst);
    const int n = inst.n;
    if (n < 3) throw ConfigError("transposition_scan needs n >= 3");
    if (n > 4096) throw CapacityError("transposition_scan capped at n <= 4096");
    const Permutation& pi = (at != nullptr) ? *at : inst.pi_true;
    if (pi.size() != n) throw ConfigError("candidate permutation does not match n");
    validate_permutation(pi);

    const std::vector<double> ahat = dense_symmetric(n, inst.A);
    const std::vector<double> bhat = dense_symmetric(n, inst.B);

    // p[i][k] = relabeled A entry at (i,k); q = B.
    std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* arow = ahat.data() + static_cast<std::size_t>(pi(i)) * n;
        double* prow = p.data() + static_cast<std::size_t>(i) * n;
        for (int k = 0; k < n; ++k) prow[k] = arow[pi(k)];
    }

    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<double> cross(static_cast<std::size_t>(n) * n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double* prow = p.data() + static_cast<std::size_t>(i) * n;
        const double* brow = bhat.data() + static_cast<std::size_t>(i) * n;
        double di = 0.0;
        for (int k = 0; k < n; ++k) di += prow[k] * brow[k];
        d[i] = di;
        double* crow = cross.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* bj = bhat.data() + static_cast<std::size_t>(j) * n;
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += prow[k] * bj[k];
            crow[j] = s;
        }
    }

    std::vector<TranspositionStat> out;
    out.reserve(num_edge_slots(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            TranspositionStat t;
            t.i = i;
            t.j = j;
            t.value = d[i] + d[j] - cross[static_cast<std::size_t>(i) * n + j] -
                      cross[static_cast<std::size_t>(j) * n + i] -
                      2.0 * p[static_cast<std::size_t>(i) * n + j] *
                          bhat[static_cast<std::size_t>(i) * n + j];
            out.push_back(t);
        }
    }
    return out;
}

} // namespace graphmatch
