#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphmatch/rng.hpp"

namespace graphmatch {

// Permutation of {0,...,n-1} in one-line notation: img[i] is the image of i.
struct Permutation {
    std::vector<int> img;

    Permutation() = default;
    explicit Permutation(std::vector<int> image) : img(std::move(image)) {}

    static Permutation identity(int n);

    int size() const { return static_cast<int>(img.size()); }
    int operator()(int i) const { return img[static_cast<std::size_t>(i)]; }

    // (this ∘ other)(i) = this(other(i)).
    Permutation compose(const Permutation& other) const;
    Permutation inverse() const;
    bool is_identity() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
};

// Throws ConfigError if img is not a bijection on {0,...,n-1}.
void validate_permutation(const Permutation& sigma);

// One-line notation as whitespace-separated images, e.g. "2 0 1".
std::string format_permutation(const Permutation& sigma);
Permutation parse_permutation(std::string_view text);

// Uniformly random permutation (Fisher-Yates over the given stream).
Permutation random_permutation(int n, CounterRng& rng);

// --- Edge-slot indexing -----------------------------------------------------
// Unordered vertex pairs {i<j} of an n-vertex graph are laid out row-major:
// (0,1),(0,2),...,(0,n-1),(1,2),...  Slot count is n(n-1)/2.

inline std::int64_t num_edge_slots(int n) {
    return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

inline std::int64_t edge_index(int n, int i, int j) {
    // requires 0 <= i < j < n
    return static_cast<std::int64_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::pair<int, int> edge_from_index(int n, std::int64_t e);

// Permutation of edge slots induced by a vertex permutation:
// slot {i,j} maps to slot {sigma(i), sigma(j)}.
Permutation induced_edge_permutation(const Permutation& sigma);

// --- Orbits ------------------------------------------------------------------

struct OrbitDecomposition {
    // Cycles listed with their minimum element first, sorted by that element.
    std::vector<std::vector<int>> node_orbits;
    std::vector<std::vector<std::int64_t>> edge_orbits;
    // count_by_length[k] = number of orbits of length k (index 0 unused).
    std::vector<std::int64_t> node_count_by_length;
    std::vector<std::int64_t> edge_count_by_length;
};

// Node and edge orbits of a vertex permutation.
OrbitDecomposition orbit_decomposition(const Permutation& sigma);

// --- Correspondence quality --------------------------------------------------

// Fraction of vertices on which the two maps agree.
double overlap(const Permutation& pi, const Permutation& pi_hat);

// Number of vertices on which they disagree (= non-fixed points of
// pi^{-1}∘pi_hat); takes values in {0, 2, 3, ..., n}.
int nonfixed_distance(const Permutation& pi, const Permutation& pi_hat);

// Fraction of edge slots fixed by the relative permutation pi^{-1}∘pi_hat.
double edge_fixed_fraction(const Permutation& pi, const Permutation& pi_hat);

} // namespace graphmatch
