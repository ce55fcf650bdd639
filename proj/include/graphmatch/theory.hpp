#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphmatch/models.hpp"

namespace graphmatch {

// All logarithms are natural; information quantities are in nats.

// h(x) = -x log x - (1-x) log(1-x); h(0) = h(1) = 0.
double binary_entropy(double x);

// d(s||q) = s log(s/q) + (1-s) log((1-s)/(1-q)), with the 0 log 0 = 0
// convention. Returns +infinity when q is degenerate and s is not.
double binary_kl(double s, double q);

// Mutual information of one correlated edge pair.
// Gaussian: (1/2) log(1/(1-rho^2)); returns +infinity at rho = +-1.
// SubsampledER: q*d(s||q) + (1-q)*d(eta||q) with q = ps, eta = q(1-s)/(1-q).
// GeneralER: generic discrete mutual information of the four-cell pmf.
double edge_pair_mi(const CorrelationModel& model);

// Small-density expansion of the subsampled pair information:
// s^2 * p * (p - 1 + log(1/p)).
double mi_taylor_er(double p, double s);

// (log(1/x) - 1 + x) / (x log(1/x) (1 + log(1/x))) for x in (0,1);
// monotonically decreasing on (0,1).
double phi_ratio(double x);

// --- Orbit moment generating functions ----------------------------------------
//
// Both MGFs are over one edge orbit of length k of a relative permutation,
// with the pair coupling P on each slot.
//
// orbit_mgf_m: E exp(t * sum_i (a_{i+1} - q)(b_i - q)) with cyclic indexing
//   (centered cross-products along the orbit; q = 0 for Gaussian).
// orbit_mgf_l: E exp(t * sum_i (a_{i+1} - a_i) * b_i) (the orbit's
//   contribution to the relabeled-minus-planted objective difference).
//
// ER closed forms are exact for all t >= 0. Gaussian forms are valid on a
// bounded tilt window and throw DomainError at or past the divergence point:
// orbit_mgf_m needs t < 1/(1+|rho|); orbit_mgf_l needs 1+4t*rho-4t^2(1-rho^2) > 0.
// orbit_mgf_m on GeneralER requires symmetric cells (p01 == p10).

double orbit_mgf_m(const CorrelationModel& model, double t, int k);
double orbit_mgf_l(const CorrelationModel& model, double t, int k);

// Checks M_k <= M_2^{k/2} and L_k <= L_2^{k/2} for k = 2..k_max.
struct MgfPowerBounds {
    std::vector<double> m_values; // index 0 -> k=1
    std::vector<double> l_values;
    double max_violation_m = 0.0; // max over k of M_k - M_2^{k/2}
    double max_violation_l = 0.0;
};
MgfPowerBounds mgf_power_bounds(const CorrelationModel& model, double t, int k_max);

// Closed-form upper bounds on the 2-orbit MGF M_2 for a subsampled pair with
// p*s <= 1/2, plus the second-moment ratio M_1^2 / M_2 (which stays <= e^2 on
// the moderate-tilt window).
struct M2Bounds {
    double m1 = 0.0;
    double m2_exact = 0.0;
    // Valid when t <= log(1/p):
    // 1 + q^2 s^2 - 2 q^2 + 10 q^3 t (1+t) + 2 e^t q^2 (1-s^2) + e^{2t} q^2 s^2.
    std::optional<double> bound_moderate_tilt;
    // Valid when t <= 2^-10:
    // 1 + t^2 sigma^4 (1+rho^2) + 8 t^3 q s,  sigma^2 = q(1-q), rho = (s-q)/(1-q).
    std::optional<double> bound_small_tilt;
    double m1sq_over_m2 = 0.0;
};
M2Bounds m2_upper_bounds(double p, double s, double t);

// Exact left-tail probability P(sum_{k=1}^n X_k <= -tau) where the X_k are
// i.i.d. on {-1,0,+1} with P(+1)=a, P(-1)=b. Dynamic program over the lattice
// support; probabilities kept in linear scale with compensated summation.
double trinomial_tail(double a, double b, std::int64_t n, double tau);

// --- Recovery-regime report ----------------------------------------------------

enum class RecoveryRegime {
    exact_recoverable,
    almost_exact_only,
    partial_only_band,
    partial_impossible,
    indeterminate_band,
};

std::string regime_name(RecoveryRegime r);

struct ThresholdStatistic {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    double ratio = 0.0; // statistic / threshold
};

struct ThresholdReport {
    std::int64_t n = 0;
    double epsilon = 0.0;
    std::vector<ThresholdStatistic> statistics;
    RecoveryRegime regime = RecoveryRegime::indeterminate_band;
    nlohmann::json to_json() const;
};

// Compares the model's recovery statistics against their critical rates at
// size n and classifies with slack epsilon: ratios within `band` of 1 are
// always reported as indeterminate.
ThresholdReport threshold_report(const CorrelationModel& model, std::int64_t n,
                                 double epsilon = 0.1, double band = 1e-9);

} // namespace graphmatch
