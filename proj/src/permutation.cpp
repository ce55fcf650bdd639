#include "graphmatch/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "graphmatch/errors.hpp"

namespace graphmatch {

Permutation Permutation::identity(int n) {
    Permutation p;
    p.img.resize(static_cast<std::size_t>(n));
    std::iota(p.img.begin(), p.img.end(), 0);
    return p;
}

Permutation Permutation::compose(const Permutation& other) const {
    if (size() != other.size())
        throw ConfigError("compose: size mismatch (" + std::to_string(size()) + " vs " +
                          std::to_string(other.size()) + ")");
    Permutation r;
    r.img.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        r.img[i] = img[static_cast<std::size_t>(other.img[i])];
    return r;
}

Permutation Permutation::inverse() const {
    Permutation r;
    r.img.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        r.img[static_cast<std::size_t>(img[i])] = static_cast<int>(i);
    return r;
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < img.size(); ++i)
        if (img[i] != static_cast<int>(i)) return false;
    return true;
}

void validate_permutation(const Permutation& sigma) {
    const int n = sigma.size();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const int v : sigma.img) {
        if (v < 0 || v >= n)
            throw ConfigError("permutation: image " + std::to_string(v) + " out of range for n=" +
                              std::to_string(n));
        if (seen[static_cast<std::size_t>(v)])
            throw ConfigError("permutation: image " + std::to_string(v) + " repeated");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

std::string format_permutation(const Permutation& sigma) {
    std::string out;
    for (std::size_t i = 0; i < sigma.img.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(sigma.img[i]);
    }
    return out;
}

Permutation parse_permutation(std::string_view text) {
    std::istringstream in{std::string(text)};
    Permutation p;
    int v;
    while (in >> v) p.img.push_back(v);
    if (!in.eof())
        throw ConfigError("permutation: unparsable token in one-line notation");
    validate_permutation(p);
    return p;
}

Permutation random_permutation(int n, CounterRng& rng) {
    Permutation p = Permutation::identity(n);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(p.img[static_cast<std::size_t>(i)], p.img[static_cast<std::size_t>(j)]);
    }
    return p;
}

std::pair<int, int> edge_from_index(int n, std::int64_t e) {
    if (e < 0 || e >= num_edge_slots(n))
        throw ConfigError("edge_from_index: slot " + std::to_string(e) + " out of range for n=" +
                          std::to_string(n));
    // Find row i: first slot of row i is i*(2n-i-1)/2.
    int i = static_cast<int>((2.0 * n - 1.0 - std::sqrt((2.0 * n - 1.0) * (2.0 * n - 1.0) - 8.0 * static_cast<double>(e))) / 2.0);
    i = std::max(0, std::min(i, n - 2));
    while (edge_index(n, i, i + 1) > e) --i;
    while (i + 1 < n - 1 && edge_index(n, i + 1, i + 2) <= e) ++i;
    const int j = static_cast<int>(e - edge_index(n, i, i + 1)) + i + 1;
    return {i, j};
}

Permutation induced_edge_permutation(const Permutation& sigma) {
    const int n = sigma.size();
    Permutation r;
    r.img.resize(static_cast<std::size_t>(num_edge_slots(n)));
    std::int64_t e = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++e) {
            int a = sigma(i), b = sigma(j);
            if (a > b) std::swap(a, b);
            r.img[static_cast<std::size_t>(e)] = static_cast<int>(edge_index(n, a, b));
        }
    }
    return r;
}

namespace {

// Cycles of an arbitrary permutation given as an image vector.
template <typename Int>
std::vector<std::vector<Int>> cycles_of(const std::vector<int>& img) {
    const auto n = img.size();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<Int>> out;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<Int> cyc;
        std::size_t cur = start;
        while (!seen[cur]) {
            seen[cur] = 1;
            cyc.push_back(static_cast<Int>(cur));
            cur = static_cast<std::size_t>(img[cur]);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

} // namespace

OrbitDecomposition orbit_decomposition(const Permutation& sigma) {
    OrbitDecomposition d;
    d.node_orbits = cycles_of<int>(sigma.img);
    const Permutation edge_perm = induced_edge_permutation(sigma);
    d.edge_orbits = cycles_of<std::int64_t>(edge_perm.img);

    d.node_count_by_length.assign(sigma.img.size() + 1, 0);
    for (const auto& c : d.node_orbits) ++d.node_count_by_length[c.size()];
    d.edge_count_by_length.assign(edge_perm.img.size() + 1, 0);
    for (const auto& c : d.edge_orbits) ++d.edge_count_by_length[c.size()];
    return d;
}

double overlap(const Permutation& pi, const Permutation& pi_hat) {
    if (pi.size() != pi_hat.size())
        throw ConfigError("overlap: size mismatch");
    if (pi.size() == 0) throw ConfigError("overlap: empty permutation");
    int agree = 0;
    for (std::size_t i = 0; i < pi.img.size(); ++i)
        if (pi.img[i] == pi_hat.img[i]) ++agree;
    return static_cast<double>(agree) / static_cast<double>(pi.size());
}

int nonfixed_distance(const Permutation& pi, const Permutation& pi_hat) {
    if (pi.size() != pi_hat.size())
        throw ConfigError("nonfixed_distance: size mismatch");
    int differ = 0;
    for (std::size_t i = 0; i < pi.img.size(); ++i)
        if (pi.img[i] != pi_hat.img[i]) ++differ;
    return differ;
}

double edge_fixed_fraction(const Permutation& pi, const Permutation& pi_hat) {
    if (pi.size() != pi_hat.size())
        throw ConfigError("edge_fixed_fraction: size mismatch");
    const int n = pi.size();
    if (n < 2) throw ConfigError("edge_fixed_fraction: need n >= 2");
    const Permutation rel = pi.inverse().compose(pi_hat);
    std::int64_t fixed = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int a = rel(i), b = rel(j);
            if (a > b) std::swap(a, b);
            if (a == i && b == j) ++fixed;
        }
    }
    return static_cast<double>(fixed) / static_cast<double>(num_edge_slots(n));
}

} // namespace graphmatch
