// Benchmark: OpenMP kernels against their serial reference implementations.
// Every comparison also asserts the two paths agree, so this doubles as a
// coarse correctness harness at sizes the unit tests do not reach.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "graphmatch/estimators.hpp"
#include "graphmatch/models.hpp"
#include "graphmatch/oracles.hpp"
#include "graphmatch/parallel.hpp"
#include "graphmatch/permutation.hpp"
#include "graphmatch/sweep.hpp"
#include "graphmatch/theory.hpp"

namespace {

using namespace graphmatch;
using clock_type = std::chrono::steady_clock;

int failures = 0;
// Thread count observed at startup; set_threads(1) changes what max_threads()
// reports afterward, so the parallel legs restore this instead.
int ambient_threads = 1;

template <typename F>
double time_ms(F&& f) {
    const auto t0 = clock_type::now();
    f();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, double serial_ms, double parallel_ms, bool match) {
    if (!match) ++failures;
    std::printf("%-34s %12.1f %12.1f %9.2fx   %s\n", name.c_str(), serial_ms, parallel_ms,
                serial_ms / parallel_ms, match ? "agree" : "MISMATCH");
}

// Direct per-pair evaluation of the swap statistic; the kernel's slow twin.
std::vector<TranspositionStat> scan_reference(const MatchInstance& inst) {
    const int n = inst.n;
    const Permutation& pi = inst.pi_true;
    std::vector<TranspositionStat> out;
    out.reserve(static_cast<std::size_t>(num_edge_slots(n)));
    auto a_at = [&](int u, int v) {
        const int pu = pi(u), pv = pi(v);
        return inst.A[static_cast<std::size_t>(
            edge_index(n, std::min(pu, pv), std::max(pu, pv)))];
    };
    auto b_at = [&](int u, int v) {
        return inst.B[static_cast<std::size_t>(edge_index(n, std::min(u, v), std::max(u, v)))];
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v = 0.0;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                v += (a_at(i, k) - a_at(j, k)) * (b_at(i, k) - b_at(j, k));
            }
            out.push_back({i, j, v});
        }
    }
    return out;
}

void bench_exhaustive() {
    for (int n : {8, 9}) {
        const MatchInstance inst = sample_instance(Gaussian{0.8}, n, 1234u + static_cast<unsigned>(n));
        MatchResult ref, par;
        const double t_ref = time_ms([&] { ref = solve_exact_reference(inst); });
        const double t_par = time_ms([&] { par = solve_exact(inst); });
        const bool match = ref.pi_hat == par.pi_hat &&
                           std::abs(ref.objective_value - par.objective_value) <= 1e-9 &&
                           ref.optimizer_count == par.optimizer_count;
        row("exhaustive search n=" + std::to_string(n), t_ref, t_par, match);
    }
}

void bench_scan() {
    const int n = 500;
    const MatchInstance inst = sample_instance(Gaussian{0.9}, n, 99u);
    std::vector<TranspositionStat> ref, par;
    const double t_ref = time_ms([&] { ref = scan_reference(inst); });
    const double t_par = time_ms([&] { par = transposition_scan(inst); });
    bool match = ref.size() == par.size();
    if (match) {
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (ref[i].i != par[i].i || ref[i].j != par[i].j ||
                std::abs(ref[i].value - par[i].value) > 1e-9) {
                match = false;
                break;
            }
        }
    }
    row("swap-statistic scan n=500", t_ref, t_par, match);
}

void bench_local() {
    const int n = 120;
    const MatchInstance inst = sample_instance(Gaussian{0.95}, n, 7u);
    LocalOptions opts;
    opts.restarts = 48;
    opts.seed = 5;
    MatchResult serial, parallel;
    set_threads(1);
    const double t_ser = time_ms([&] { serial = solve_local(inst, opts); });
    set_threads(ambient_threads);
    const double t_par = time_ms([&] { parallel = solve_local(inst, opts); });
    const bool match = serial.pi_hat == parallel.pi_hat &&
                       serial.objective_value == parallel.objective_value &&
                       serial.evaluations == parallel.evaluations;
    row("local search n=120 restarts=48", t_ser, t_par, match);
}

void bench_sweep() {
    SweepConfig cfg;
    cfg.family = "gaussian";
    cfg.n_values = {7};
    cfg.rho = {0.6, 0.9};
    cfg.trials = 40;
    cfg.estimator = "exact";
    cfg.base_seed = 11;
    std::string csv_serial, csv_parallel;
    set_threads(1);
    const double t_ser = time_ms([&] { csv_serial = records_to_csv(run_sweep(cfg).records); });
    set_threads(ambient_threads);
    const double t_par = time_ms([&] { csv_parallel = records_to_csv(run_sweep(cfg).records); });
    row("sweep 2x40 exhaustive trials n=7", t_ser, t_par, csv_serial == csv_parallel);
}

void bench_mc() {
    const std::int64_t samples = 4000000;
    oracles::MonteCarloMgf serial, parallel;
    set_threads(1);
    const double t_ser =
        time_ms([&] { serial = oracles::orbit_mgf_m_gaussian_mc(0.6, 0.2, 3, samples, 17); });
    set_threads(ambient_threads);
    const double t_par =
        time_ms([&] { parallel = oracles::orbit_mgf_m_gaussian_mc(0.6, 0.2, 3, samples, 17); });
    row("Monte Carlo MGF 4e6 samples", t_ser, t_par,
        serial.mean == parallel.mean && serial.std_error == parallel.std_error);
}

void bench_tail() {
    const std::int64_t n = 20000;
    double serial = 0.0, parallel = 0.0;
    set_threads(1);
    const double t_ser = time_ms([&] { serial = trinomial_tail(0.3, 0.1, n, 25.0); });
    set_threads(ambient_threads);
    const double t_par = time_ms([&] { parallel = trinomial_tail(0.3, 0.1, n, 25.0); });
    row("walk-tail dp n=20000", t_ser, t_par, serial == parallel);
}

} // namespace

int main() {
    apply_thread_env();
    ambient_threads = max_threads();
    std::printf("threads available: %d\n\n", ambient_threads);
    std::printf("%-34s %12s %12s %10s   %s\n", "kernel", "serial ms", "parallel ms", "speedup",
                "check");
    bench_exhaustive();
    bench_scan();
    bench_local();
    bench_sweep();
    bench_mc();
    bench_tail();
    std::printf("\n%s\n", failures == 0 ? "all comparisons agree" : "MISMATCHES PRESENT");
    return failures == 0 ? 0 : 1;
}
