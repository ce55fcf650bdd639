#pragma once

#include <cstdint>

#include "graphmatch/models.hpp"

namespace graphmatch::oracles {

// Brute-force and Monte Carlo reference implementations, kept deliberately
// independent of the closed forms they cross-check: enumeration over the full
// configuration space where it is finite, chunked deterministic Monte Carlo
// where it is not. Shared by the test suites and the CLI `verify` command.

// E exp(t * sum_i (a_{i+1} - q)(b_i - q)) over one cyclic orbit of length k,
// by enumeration of all 4^k binary slot configurations (q = marginal edge
// density). Requires symmetric cells (p01 == p10). k is capped at 10.
double orbit_mgf_m_enumerated(const GeneralER& cells, double t, int k);

// E exp(t * sum_i (a_{i+1} - a_i) * b_i), same enumeration, arbitrary cells.
double orbit_mgf_l_enumerated(const GeneralER& cells, double t, int k);

// Exact Gaussian orbit MGFs via the quadratic-form identity
// E exp((t/2) z' K z) = det(I - t Sigma K)^{-1/2} on the 2k-dimensional joint
// vector, evaluated by LU factorization. Independent of the eigenvalue closed
// forms; exact up to factorization rounding. Throws DomainError when the
// matrix determinant is nonpositive (tilt beyond the validity window).
double orbit_mgf_m_gaussian_det(double rho, double t, int k);
double orbit_mgf_l_gaussian_det(double rho, double t, int k);

struct MonteCarloMgf {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

// Monte Carlo estimates of the Gaussian orbit MGFs. Sampling is split over a
// fixed number of counter-seeded substreams and reduced in substream order,
// so the estimate depends only on (rho, t, k, samples, seed) -- never on the
// thread count.
MonteCarloMgf orbit_mgf_m_gaussian_mc(double rho, double t, int k,
                                      std::int64_t samples, std::uint64_t seed);
MonteCarloMgf orbit_mgf_l_gaussian_mc(double rho, double t, int k,
                                      std::int64_t samples, std::uint64_t seed);

// P(sum_{k=1}^n X_k <= -tau) with X i.i.d. on {-1,0,+1}, P(+1) = a,
// P(-1) = b, by direct enumeration of all 3^n outcomes. n is capped at 14.
double trinomial_tail_enumerated(double a, double b, int n, double tau);

// Generic discrete mutual information of a four-cell pmf, written straight
// from the definition.
double discrete_mi(const GeneralER& cells);

} // namespace graphmatch::oracles
