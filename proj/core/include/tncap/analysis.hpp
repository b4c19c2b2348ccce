#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tncap/matrix.hpp"
#include "tncap/mmtp.hpp"

namespace tncap::analysis {

// Transform sign of a rate function: laplace gives r(-theta) (drives lower
// bounds, nonincreasing in theta), mgf gives r(theta) (upper bounds,
// nondecreasing).
enum class Sign { laplace, mgf };

// theta -> rate map over theta > 0. For MACs whose hops share one modulating
// chain (CSMA) the Hoelder exponent k is folded into eval, so bound
// optimizers only ever see a plain function of theta.
struct RateFunction {
    std::function<double(double)> eval;
    Sign sign = Sign::laplace;
    int hops = 1;
    mmtp::MacKind mac = mmtp::MacKind::aloha;
    double mean_rate = 0.0;  // theta -> 0 limit, C * pi(favorable)
};

// Per-slot Bernoulli service transform rate:
//   laplace: -log(q e^{-theta C} + 1 - q) / theta
//   mgf:      log(q e^{+theta C} + 1 - q) / theta
double aloha_rate(double q, double rate, double theta, Sign sign);

// min_j (laplace) or max_j (mgf) of the per-hop Aloha rates.
RateFunction aloha_rate_function(std::vector<double> qs, double rate,
                                 Sign sign);

// B_j = Q - theta_eff * C * I_j with (I_j)_{ii} = 1 on favorable states of
// `link`. theta_eff < 0 builds the MGF-side matrix.
Matrix csma_b_matrix(const mmtp::MacModel& m, int link, double theta_eff);

// Hoelder-coupled CSMA rates over the hops in `links`:
//   laplace: min_j lambda_max(B_j(k theta)) / (-k theta)
//   mgf:     max_j lambda_max(B_j(-k theta)) / (k theta)
RateFunction csma_rate_function(const mmtp::MacModel& m,
                                std::vector<int> links, Sign sign);

// E[e^{-theta S_link(t)}] with the chain started in steady state.
// Solved through dL/dt = B L, L_0 = 1: eigenvalues of B plus hyperexponential
// coefficients recovered by moment matching; must agree with direct ODE
// integration. A defective decomposition falls back to RK4 and is flagged.
struct LaplaceResult {
    double value = 0.0;
    bool used_ode_fallback = false;
    double max_real = 0.0;  // largest Re(eigenvalue) of B
    std::vector<std::complex<double>> eigenvalues;   // distinct
    std::vector<std::complex<double>> coefficients;  // sums to 1
};
LaplaceResult csma_laplace(const mmtp::MacModel& m, int link, double theta,
                           double t);

// RK4 integration of dL/dt = B L, L_0 = 1, returning pi . L_t.
// step <= 0 picks the production step ||B|| h = 0.1.
double laplace_ode(const Matrix& b, const std::vector<double>& pi, double t,
                   double step = 0.0);

// log C(t+k-1, k-1) via lgamma; t can be huge.
double log_binomial_paths(double t, int k);

struct BoundResult {
    double rate = 0.0;
    double theta = 0.0;
    bool infeasible = false;  // lower bound clamped at 0
};

// Theorem-style transient capacity bounds at horizon t slots:
//   lower: sup_theta { r(-theta) + (log eps - log C(t+k-1,k-1)) / (theta t) }
//   upper: inf_theta { r(theta) - log eps / (theta t) }
BoundResult lower_bound_rate(const RateFunction& r_neg, int k, double t,
                             double eps);
BoundResult upper_bound_rate(const RateFunction& r_pos, int k, double t,
                             double eps);

struct BoundPoint {
    double t = 0.0;
    double lambda_lower = 0.0, lambda_upper = 0.0;
    double theta_lower = 0.0, theta_upper = 0.0;
    bool lower_infeasible = false;
};

struct BoundCurve {
    std::vector<BoundPoint> points;
    double eps = 0.0;
    int hops = 1;
    mmtp::MacKind mac = mmtp::MacKind::aloha;
    std::string to_csv() const;  // t,lambda_L,lambda_U,theta_L,theta_U,eps,k,mac
};

BoundCurve bound_curve(const RateFunction& r_neg, const RateFunction& r_pos,
                       const std::vector<double>& times, double eps);

// Log-spaced integer horizons from t_min to t_max, deduplicated.
std::vector<double> log_time_grid(double t_min, double t_max, int points);

// Single-hop vs multi-hop crossover (the "threshold" experiment): smallest
// integer t at which the k-hop lower bound at per-hop rate `rate_multi`
// exceeds the direct single-hop upper bound at rate `rate_single`. The k
// relays plus endpoints all hear each other (complete contention graph); the
// single-hop link runs alone. nullopt when no crossing at or below t_cap.
struct ThresholdQuery {
    mmtp::MacKind mac = mmtp::MacKind::aloha;
    int hops = 2;
    double p = 0.5;              // aloha transmit probability (e.g. 1/k)
    double nu = 0.1, mu = 0.1;   // csma backoff/transmission rates
    double rate_single = 0.05;   // r_sh
    double rate_multi = 1.0;     // r_mh
    double eps = 1e-3;
    std::uint64_t t_cap = 1000000000ull;
};
std::optional<std::uint64_t> threshold_time(const ThresholdQuery& q);

// The two bound curves the threshold compares, exposed so callers (and the
// linear-scan oracle) evaluate exactly the same objects.
std::pair<RateFunction, RateFunction> threshold_rate_functions(
    const ThresholdQuery& q);

// Golden-section maximization over log theta in [1e-4, 1e2], seeded by a
// 64-point coarse grid, refined to 1e-6 relative tolerance.
struct ThetaOptimum {
    double theta = 0.0;
    double value = 0.0;
};
ThetaOptimum maximize_over_theta(const std::function<double(double)>& f);

}  // namespace tncap::analysis
