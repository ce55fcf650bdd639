#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "graphmatch/errors.hpp"
#include "graphmatch/estimators.hpp"
#include "graphmatch/models.hpp"
#include "graphmatch/rng.hpp"

using namespace graphmatch;

namespace {

MatchInstance manual_instance(int n, CorrelationModel model, std::vector<double> A,
                              std::vector<double> B) {
    MatchInstance inst;
    inst.n = n;
    inst.model = std::move(model);
    inst.seed = 0;
    inst.pi_true = Permutation::identity(n);
    inst.A = std::move(A);
    inst.B = std::move(B);
    return inst;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-9 * (1.0 + std::fabs(b)); }

const CorrelationModel kPositiveCells = GeneralER{0.4, 0.1, 0.1, 0.4};

} // namespace

TEST_CASE("objective: complete graphs score every candidate equally") {
    const int n = 4;
    const std::vector<double> ones(static_cast<std::size_t>(num_edge_slots(n)), 1.0);
    const MatchInstance inst = manual_instance(n, kPositiveCells, ones, ones);
    CounterRng rng(3);
    for (int rep = 0; rep < 10; ++rep)
        CHECK(objective(inst, random_permutation(n, rng)) == doctest::Approx(6.0));

    CHECK_THROWS_AS(objective(inst, Permutation{{0, 1, 2}}), ConfigError);
    CHECK_THROWS_AS(objective(inst, Permutation{{0, 1, 2, 2}}), ConfigError);
}

TEST_CASE("exhaustive search finds the path graph's automorphisms") {
    // A = B = path 0-1-2 (slots {0,1} and {1,2} present). Two relabelings
    // align both edges: the identity and the end-swap (0 2).
    const std::vector<double> path{1.0, 0.0, 1.0};
    const MatchInstance inst = manual_instance(3, kPositiveCells, path, path);
    const MatchResult r = solve_exact(inst);
    CHECK(r.objective_value == doctest::Approx(2.0));
    CHECK(r.optimizer_count == 2);
    CHECK(r.pi_hat == Permutation::identity(3)); // lexicographically smallest optimizer
    CHECK(r.evaluations == 6);
    CHECK(r.method == "exhaustive");
    CHECK_FALSE(r.degenerate_sign);

    const MatchResult rr = solve_exact_reference(inst);
    CHECK(rr.objective_value == r.objective_value);
    CHECK(rr.optimizer_count == r.optimizer_count);
    CHECK(rr.pi_hat == r.pi_hat);
    CHECK(rr.method == "exhaustive-reference");
}

TEST_CASE("parallel exhaustive search agrees with the serial reference") {
    for (const CorrelationModel m :
         {CorrelationModel{Gaussian{0.8}}, CorrelationModel{SubsampledER{0.3, 0.7}}}) {
        for (int n : {5, 6}) {
            for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
                const MatchInstance inst = sample_instance(m, n, seed);
                const MatchResult fast = solve_exact(inst);
                const MatchResult ref = solve_exact_reference(inst);
                CHECK(fast.pi_hat == ref.pi_hat);
                CHECK(fast.objective_value == doctest::Approx(ref.objective_value));
                CHECK(fast.optimizer_count == ref.optimizer_count);
                std::int64_t fact = 1;
                for (int i = 2; i <= n; ++i) fact *= i;
                CHECK(fast.evaluations == fact);
                CHECK(ref.evaluations == fact);
            }
        }
    }
}

TEST_CASE("identical pair with an asymmetric graph has a unique optimizer") {
    // At s = 1 the second graph is an exact relabeling; when the graph has a
    // trivial automorphism group the planted relabeling is the only optimum
    // and the objective counts every edge.
    const MatchInstance inst = sample_instance(SubsampledER{0.5, 1.0}, 7, 5);
    const MatchResult r = solve_exact(inst);
    CHECK(r.optimizer_count == 1);
    CHECK(r.pi_hat == inst.pi_true);
    const double edge_count = std::accumulate(inst.A.begin(), inst.A.end(), 0.0);
    CHECK(r.objective_value == doctest::Approx(edge_count));
}

TEST_CASE("optimizer set is invariant under 0/1 complement") {
    for (std::uint64_t seed = 601; seed <= 610; ++seed) {
        const SubsampledER model{0.35, 0.8};
        const MatchInstance inst = sample_instance(model, 6, seed);
        MatchInstance comp = inst;
        comp.model = flip_model(model);
        for (auto& v : comp.A) v = 1.0 - v;
        for (auto& v : comp.B) v = 1.0 - v;

        const MatchResult r = solve_exact(inst);
        const MatchResult rc = solve_exact(comp);
        CHECK(r.pi_hat == rc.pi_hat);
        CHECK(r.optimizer_count == rc.optimizer_count);
    }
}

TEST_CASE("relabeling the first graph shifts the optimizer accordingly") {
    // If A' is A with vertices relabeled by tau, every candidate pi' scores
    // on (A', B) what tau∘pi' scores on (A, B); the optimizer moves to
    // tau^{-1}∘pi_hat with the same value and multiplicity.
    CounterRng rng(2718);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 6;
        const MatchInstance inst = sample_instance(SubsampledER{0.4, 0.9}, n, 800 + rep);
        const Permutation tau = random_permutation(n, rng);
        const Permutation ep = induced_edge_permutation(tau);

        MatchInstance moved = inst;
        for (std::int64_t e = 0; e < num_edge_slots(n); ++e)
            moved.A[e] = inst.A[ep(static_cast<int>(e))];
        moved.pi_true = tau.inverse().compose(inst.pi_true);

        const MatchResult r = solve_exact(inst);
        const MatchResult rm = solve_exact(moved);
        CHECK(rm.objective_value == doctest::Approx(r.objective_value));
        CHECK(rm.optimizer_count == r.optimizer_count);
        // The reported optimizer, mapped back, attains the original optimum.
        // (With ties the lexicographic representative itself may differ:
        // lex-min does not commute with composition.)
        CHECK(objective(inst, tau.compose(rm.pi_hat)) == doctest::Approx(r.objective_value));
        if (r.optimizer_count == 1) CHECK(rm.pi_hat == tau.inverse().compose(r.pi_hat));
    }
}

TEST_CASE("negatively correlated models are solved by minimizing") {
    const GeneralER neg{0.1, 0.4, 0.4, 0.1};
    const MatchInstance inst = sample_instance(neg, 6, 42);
    const MatchResult automatic = solve_exact(inst);
    ExactOptions explicit_min;
    explicit_min.maximize = false;
    const MatchResult minimized = solve_exact(inst, explicit_min);
    CHECK(automatic.pi_hat == minimized.pi_hat);
    CHECK(automatic.objective_value == doctest::Approx(minimized.objective_value));
    CHECK_FALSE(automatic.degenerate_sign);

    // The chosen optimum is at most the planted alignment's score.
    CHECK(automatic.objective_value <= objective(inst, inst.pi_true) + 1e-9);

    // A negative gaussian pair matches the sign-flipped maximization problem.
    const MatchInstance ginst = sample_instance(Gaussian{-0.7}, 6, 77);
    const MatchResult gmin = solve_exact(ginst);
    MatchInstance flipped = ginst;
    flipped.model = Gaussian{0.7};
    for (auto& v : flipped.B) v = -v;
    const MatchResult gmax = solve_exact(flipped);
    CHECK(gmin.pi_hat == gmax.pi_hat);
    CHECK(gmin.objective_value == doctest::Approx(-gmax.objective_value));
}

TEST_CASE("zero-sign models are flagged as degenerate") {
    const MatchInstance inst = sample_instance(Gaussian{0.0}, 5, 9);
    const MatchResult r = solve_exact(inst);
    CHECK(r.degenerate_sign);
    ExactOptions force_max;
    force_max.maximize = true;
    const MatchResult rmax = solve_exact(inst, force_max);
    CHECK(r.pi_hat == rmax.pi_hat); // zero sign maximizes by convention
    CHECK(r.objective_value == doctest::Approx(rmax.objective_value));
    CHECK(rmax.degenerate_sign); // flag reports the model, not the override

    const double s = 0.3;
    const GeneralER indep{s * s, s * (1 - s), s * (1 - s), (1 - s) * (1 - s)};
    CHECK(solve_exact(sample_instance(indep, 5, 10)).degenerate_sign);
    CHECK_FALSE(solve_exact(sample_instance(SubsampledER{0.4, 0.6}, 5, 10)).degenerate_sign);
}

TEST_CASE("local search: determinism and restart monotonicity") {
    const MatchInstance inst = sample_instance(Gaussian{0.9}, 14, 2025);
    LocalOptions lo;
    lo.restarts = 8;
    lo.seed = 99;
    const MatchResult a = solve_local(inst, lo);
    const MatchResult b = solve_local(inst, lo);
    CHECK(a.pi_hat == b.pi_hat);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.optimizer_count == b.optimizer_count);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.method == "local-search");

    // Restart r's start depends only on (seed, r), so widening the restart
    // budget can only improve the incumbent.
    LocalOptions wide = lo;
    wide.restarts = 32;
    const MatchResult w = solve_local(inst, wide);
    CHECK(w.objective_value >= a.objective_value - 1e-12);

    LocalOptions truth = lo;
    truth.include_truth_start = true;
    const MatchResult tr = solve_local(inst, truth);
    CHECK(tr.objective_value >= objective(inst, inst.pi_true) - 1e-9);
}

TEST_CASE("local search attains the exhaustive optimum at n = 6") {
    for (int i = 0; i < 20; ++i) {
        const CorrelationModel m = (i % 2 == 0) ? CorrelationModel{SubsampledER{0.3, 0.9}}
                                                : CorrelationModel{Gaussian{0.9}};
        const MatchInstance inst = sample_instance(m, 6, 9000 + i);
        const MatchResult exact = solve_exact(inst);
        LocalOptions lo;
        lo.restarts = 50;
        lo.seed = substream_seed(9000 + static_cast<std::uint64_t>(i), 1);
        const MatchResult local = solve_local(inst, lo);
        CHECK(close(local.objective_value, exact.objective_value));
    }
}

TEST_CASE("local search recovers strongly correlated pairs at n = 10") {
    for (int i = 0; i < 20; ++i) {
        const MatchInstance inst = sample_instance(Gaussian{0.95}, 10, 31000 + i);
        LocalOptions lo;
        lo.restarts = 32;
        lo.seed = substream_seed(31000 + static_cast<std::uint64_t>(i), 1);
        const MatchResult r = solve_local(inst, lo);
        CHECK(r.pi_hat == inst.pi_true);
    }
}

TEST_CASE("truth-started climb stays at a near-perfect alignment") {
    for (int i = 0; i < 10; ++i) {
        const MatchInstance inst = sample_instance(Gaussian{0.999}, 50, 7000 + i);
        LocalOptions lo;
        lo.restarts = 2;
        lo.seed = substream_seed(7000 + static_cast<std::uint64_t>(i), 1);
        lo.include_truth_start = true;
        const MatchResult r = solve_local(inst, lo);
        CHECK(overlap(inst.pi_true, r.pi_hat) >= 0.98);
        CHECK(r.objective_value >= objective(inst, inst.pi_true) - 1e-9);
    }
}

TEST_CASE("transposition statistics equal direct objective differences") {
    const MatchInstance inst = sample_instance(Gaussian{0.6}, 12, 1234);
    CounterRng rng(55);
    const Permutation at = random_permutation(12, rng);
    for (const Permutation* cand : {static_cast<const Permutation*>(nullptr), &at}) {
        const Permutation base = (cand == nullptr) ? inst.pi_true : *cand;
        const auto stats = transposition_scan(inst, cand);
        CHECK(stats.size() == static_cast<std::size_t>(num_edge_slots(12)));
        const double base_obj = objective(inst, base);
        for (const auto& st : stats) {
            Permutation swapped = base;
            std::swap(swapped.img[st.i], swapped.img[st.j]);
            CHECK(std::fabs(st.value - (base_obj - objective(inst, swapped))) <= 1e-9);
        }
    }
}

TEST_CASE("at high correlation the planted alignment is swap-stable") {
    const MatchInstance inst = sample_instance(Gaussian{0.99}, 30, 1);
    for (const auto& st : transposition_scan(inst)) CHECK(st.value > 0.0);
}

TEST_CASE("capacity and input errors") {
    const MatchInstance big = sample_instance(Gaussian{0.5}, 11, 3);
    CHECK_THROWS_WITH_AS(solve_exact(big), doctest::Contains("local-search"), CapacityError);
    ExactOptions raised;
    raised.capacity = 11;
    CHECK_NOTHROW(solve_exact(sample_instance(Gaussian{0.5}, 5, 3), raised));

    const MatchInstance tiny = sample_instance(Gaussian{0.5}, 2, 3);
    CHECK_THROWS_AS(transposition_scan(tiny), ConfigError);

    const MatchInstance inst = sample_instance(Gaussian{0.5}, 5, 3);
    const Permutation wrong{{1, 0}};
    CHECK_THROWS_AS(transposition_scan(inst, &wrong), ConfigError);

    LocalOptions bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(solve_local(inst, bad), ConfigError);

    MatchInstance malformed = inst;
    malformed.A.pop_back();
    CHECK_THROWS_AS(solve_exact(malformed), ConfigError);
}
