#include "tncap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tncap/csv.hpp"
#include "tncap/eig.hpp"
#include "tncap/errors.hpp"

namespace tncap::analysis {

double aloha_rate(double q, double rate, double theta, Sign sign) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    if (q < 0.0 || q > 1.0)
        throw std::invalid_argument("success probability outside [0,1]");
    if (q == 1.0) return rate;  // deterministic service, both signs
    if (q == 0.0) return 0.0;
    if (sign == Sign::laplace)
        return -std::log(q * std::exp(-theta * rate) + 1.0 - q) / theta;
    return std::log(q * std::exp(theta * rate) + 1.0 - q) / theta;
}

RateFunction aloha_rate_function(std::vector<double> qs, double rate,
                                 Sign sign) {
    if (qs.empty()) throw std::invalid_argument("no hops given");
    RateFunction rf;
    rf.sign = sign;
    rf.hops = static_cast<int>(qs.size());
    rf.mac = mmtp::MacKind::aloha;
    double worst = (sign == Sign::laplace)
                       ? *std::min_element(qs.begin(), qs.end())
                       : *std::max_element(qs.begin(), qs.end());
    rf.mean_rate = worst * rate;
    rf.eval = [qs = std::move(qs), rate, sign](double theta) {
        double best = 0.0;
        bool first = true;
        for (double q : qs) {
            double r = aloha_rate(q, rate, theta, sign);
            if (first)
                best = r, first = false;
            else
                best = (sign == Sign::laplace) ? std::min(best, r)
                                               : std::max(best, r);
        }
        return best;
    };
    return rf;
}

Matrix csma_b_matrix(const mmtp::MacModel& m, int link, double theta_eff) {
    if (m.kind != mmtp::MacKind::csma)
        throw model_error("csma_b_matrix needs a csma model");
    Matrix b = m.generator;
    for (int idx : m.favorable(link))
        b(idx, idx) -= theta_eff * m.rate;
    return b;
}

RateFunction csma_rate_function(const mmtp::MacModel& m,
                                std::vector<int> links, Sign sign) {
    if (links.empty()) throw std::invalid_argument("no hops given");
    RateFunction rf;
    rf.sign = sign;
    rf.hops = static_cast<int>(links.size());
    rf.mac = mmtp::MacKind::csma;
    double worst = 0.0;
    bool first = true;
    for (int l : links) {
        double mr = mmtp::mean_service_rate(m, l);
        if (first)
            worst = mr, first = false;
        else
            worst = (sign == Sign::laplace) ? std::min(worst, mr)
                                            : std::max(worst, mr);
    }
    rf.mean_rate = worst;
    const int k = rf.hops;
    rf.eval = [model = m, links = std::move(links), k, sign](double theta) {
        const double kt = k * theta;
        double best = 0.0;
        bool first = true;
        for (int l : links) {
            double lam, r;
            if (sign == Sign::laplace) {
                lam = eig::max_real_eig(csma_b_matrix(model, l, kt));
                r = lam / (-kt);
            } else {
                lam = eig::max_real_eig(csma_b_matrix(model, l, -kt));
                r = lam / kt;
            }
            if (first)
                best = r, first = false;
            else
                best = (sign == Sign::laplace) ? std::min(best, r)
                                               : std::max(best, r);
        }
        return best;
    };
    return rf;
}

double laplace_ode(const Matrix& b, const std::vector<double>& pi, double t,
                   double step) {
    const std::size_t n = b.rows();
    if (pi.size() != n) throw std::invalid_argument("pi size mismatch");
    std::vector<double> l(n, 1.0);
    if (t > 0.0) {
        double norm = std::max(b.inf_norm(), 1e-12);
        double h = step > 0.0 ? step : 0.1 / norm;
        auto steps = static_cast<std::uint64_t>(std::ceil(t / h));
        steps = std::max<std::uint64_t>(steps, 1);
        h = t / static_cast<double>(steps);
        std::vector<double> k1, k2, k3, k4, tmp(n);
        for (std::uint64_t s = 0; s < steps; ++s) {
            k1 = b.apply(l);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = l[i] + 0.5 * h * k1[i];
            k2 = b.apply(tmp);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = l[i] + 0.5 * h * k2[i];
            k3 = b.apply(tmp);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = l[i] + h * k3[i];
            k4 = b.apply(tmp);
            for (std::size_t i = 0; i < n; ++i)
                l[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) out += pi[i] * l[i];
    return out;
}

namespace {

using complexd = std::complex<double>;

// Distinct eigenvalues (clustered within a scale-relative tolerance).
std::vector<complexd> distinct_eigenvalues(std::vector<complexd> eigs) {
    double scale = 0.0;
    for (const auto& z : eigs) scale = std::max(scale, std::abs(z));
    const double tol = 1e-8 * std::max(scale, 1e-30);
    std::sort(eigs.begin(), eigs.end(), [](const complexd& a, const complexd& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<complexd> out;
    for (const auto& z : eigs) {
        bool fresh = true;
        for (const auto& d : out)
            if (std::abs(z - d) <= tol) {
                fresh = false;
                break;
            }
        if (fresh) out.push_back(z);
    }
    return out;
}

std::vector<complexd> apply_complex(const Matrix& b,
                                    const std::vector<complexd>& v) {
    const std::size_t n = b.rows();
    std::vector<complexd> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        complexd acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += b(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

}  // namespace

LaplaceResult csma_laplace(const mmtp::MacModel& m, int link, double theta,
                           double t) {
    if (theta == 0.0) throw std::invalid_argument("theta must be nonzero");
    if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
    const Matrix b = csma_b_matrix(m, link, theta);
    const std::vector<double> pi = mmtp::stationary(m).probs;
    const std::size_t n = b.rows();

    LaplaceResult res;
    auto eigs = eig::eigenvalues(b);
    res.max_real = -std::numeric_limits<double>::infinity();
    for (const auto& z : eigs) res.max_real = std::max(res.max_real, z.real());

    const auto distinct = distinct_eigenvalues(eigs);
    const std::size_t d = distinct.size();

    // Hyperexponential coefficients a_i with L(t) = sum_i a_i e^{lambda_i t}:
    // matrix Lagrange polynomials applied to the all-ones start vector,
    //   a_i = pi . prod_{k != i} (B - lambda_k I) / (lambda_i - lambda_k) . 1
    // Apply the most distant factors first so stiff components die early.
    std::vector<complexd> coeff(d);
    bool ok = true;
    for (std::size_t i = 0; i < d && ok; ++i) {
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < d; ++k)
            if (k != i) order.push_back(k);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
            return std::abs(distinct[a] - distinct[i]) >
                   std::abs(distinct[c] - distinct[i]);
        });
        std::vector<complexd> v(n, 1.0);
        for (std::size_t k : order) {
            const complexd gap = distinct[i] - distinct[k];
            if (std::abs(gap) < 1e-300) {
                ok = false;
                break;
            }
            auto bv = apply_complex(b, v);
            for (std::size_t j = 0; j < n; ++j)
                v[j] = (bv[j] - distinct[k] * v[j]) / gap;
        }
        complexd a = 0.0;
        for (std::size_t j = 0; j < n; ++j) a += pi[j] * v[j];
        coeff[i] = a;
    }

    if (ok) {
        // Moment checks: sum_i a_i lambda_i^r must reproduce pi . B^r . 1 for
        // r beyond the interpolation order, else B is defective in a way the
        // hyperexponential form cannot express.
        std::vector<double> ones(n, 1.0);
        std::vector<double> br = ones;
        std::vector<complexd> powers(d, 1.0);
        double scale = 1.0;
        for (std::size_t r = 0; r <= d + 1 && ok; ++r) {
            double moment = 0.0;
            for (std::size_t j = 0; j < n; ++j) moment += pi[j] * br[j];
            complexd mine = 0.0;
            for (std::size_t i = 0; i < d; ++i) mine += coeff[i] * powers[i];
            if (std::abs(mine - moment) > 1e-7 * std::max(scale, 1.0))
                ok = false;
            for (std::size_t i = 0; i < d; ++i) powers[i] *= distinct[i];
            br = b.apply(br);
            scale *= std::max(b.inf_norm(), 1.0);
        }
    }

    if (ok) {
        complexd value = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            value += coeff[i] * std::exp(distinct[i] * t);
        if (std::abs(value.imag()) > 1e-7) ok = false;
        if (ok) {
            res.value = value.real();
            res.eigenvalues = distinct;
            res.coefficients = coeff;
            return res;
        }
    }

    res.used_ode_fallback = true;
    res.value = laplace_ode(b, pi, t);
    return res;
}

double log_binomial_paths(double t, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    // log C(t+k-1, k-1)
    return std::lgamma(t + k) - std::lgamma(t + 1.0) - std::lgamma(k);
}

ThetaOptimum maximize_over_theta(const std::function<double(double)>& f) {
    constexpr double kLogLo = -4.0 * 2.302585092994046;  // ln 1e-4
    constexpr double kLogHi = 2.0 * 2.302585092994046;   // ln 1e2
    constexpr int kGrid = 64;

    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    auto grid_x = [&](int i) {
        return kLogLo + (kLogHi - kLogLo) * i / (kGrid - 1);
    };
    for (int i = 0; i < kGrid; ++i) {
        double val = f(std::exp(grid_x(i)));
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    double lo = grid_x(std::max(best - 1, 0));
    double hi = grid_x(std::min(best + 1, kGrid - 1));

    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(std::exp(x1));
    double f2 = f(std::exp(x2));
    while (hi - lo > 1e-6) {  // log-scale width == relative theta tolerance
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(std::exp(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(std::exp(x1));
        }
    }
    double xm = 0.5 * (lo + hi);
    double fm = f(std::exp(xm));
    if (best_val > fm) {  // grid edge beat the refinement
        return {std::exp(grid_x(best)), best_val};
    }
    return {std::exp(xm), fm};
}

BoundResult lower_bound_rate(const RateFunction& r_neg, int k, double t,
                             double eps) {
    if (r_neg.sign != Sign::laplace)
        throw std::invalid_argument("lower bound needs a laplace rate function");
    if (!(t >= 1.0)) throw std::invalid_argument("t must be >= 1");
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("eps must lie in (0,1]");
    const double penalty_num = std::log(eps) - log_binomial_paths(t, k);
    auto objective = [&](double theta) {
        return r_neg.eval(theta) + penalty_num / (theta * t);
    };
    ThetaOptimum opt = maximize_over_theta(objective);
    BoundResult out;
    out.theta = opt.theta;
    if (opt.value <= 0.0) {
        out.rate = 0.0;
        out.infeasible = true;
    } else {
        out.rate = opt.value;
    }
    return out;
}

BoundResult upper_bound_rate(const RateFunction& r_pos, int k, double t,
                             double eps) {
    if (r_pos.sign != Sign::mgf)
        throw std::invalid_argument("upper bound needs an mgf rate function");
    if (!(t >= 1.0)) throw std::invalid_argument("t must be >= 1");
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("eps must lie in (0,1]");
    (void)k;  // the Hoelder exponent already lives inside r_pos.eval
    const double log_eps = std::log(eps);
    auto objective = [&](double theta) {
        return -(r_pos.eval(theta) - log_eps / (theta * t));
    };
    ThetaOptimum opt = maximize_over_theta(objective);
    return {-opt.value, opt.theta, false};
}

std::string BoundCurve::to_csv() const {
    csv::Writer w({"t", "lambda_L", "lambda_U", "theta_L", "theta_U", "eps",
                   "k", "mac"});
    for (const auto& p : points) {
        w.cell(p.t)
            .cell(p.lambda_lower)
            .cell(p.lambda_upper)
            .cell(p.theta_lower)
            .cell(p.theta_upper)
            .cell(eps)
            .cell(hops)
            .cell(std::string(mmtp::mac_name(mac)));
        w.end_row();
    }
    return w.str();
}

BoundCurve bound_curve(const RateFunction& r_neg, const RateFunction& r_pos,
                       const std::vector<double>& times, double eps) {
    if (r_neg.hops != r_pos.hops || r_neg.mac != r_pos.mac)
        throw std::invalid_argument("mismatched rate function pair");
    BoundCurve curve;
    curve.eps = eps;
    curve.hops = r_neg.hops;
    curve.mac = r_neg.mac;
    for (double t : times) {
        BoundResult lo = lower_bound_rate(r_neg, curve.hops, t, eps);
        BoundResult up = upper_bound_rate(r_pos, curve.hops, t, eps);
        curve.points.push_back(
            {t, lo.rate, up.rate, lo.theta, up.theta, lo.infeasible});
    }
    return curve;
}

std::vector<double> log_time_grid(double t_min, double t_max, int points) {
    if (!(t_min >= 1.0) || t_max < t_min || points < 1)
        throw std::invalid_argument("bad time grid");
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        double x = points == 1 ? 0.0
                               : static_cast<double>(i) / (points - 1);
        double t = std::round(
            std::exp(std::log(t_min) + x * (std::log(t_max) - std::log(t_min))));
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    return out;
}

std::pair<RateFunction, RateFunction> threshold_rate_functions(
    const ThresholdQuery& q) {
    if (!(q.rate_single < q.rate_multi))
        throw std::invalid_argument(
            "threshold needs r_sh < r_mh, anything else is trivial");
    if (q.hops < 2) throw std::invalid_argument("multi-hop needs k >= 2");

    // Multi-hop: k links that all hear each other.
    contention::ContentionGraph complete(q.hops);
    for (int i = 0; i < q.hops; ++i)
        for (int j = i + 1; j < q.hops; ++j) complete.add_edge(i, j);
    std::vector<int> hops_links(q.hops);
    for (int i = 0; i < q.hops; ++i) hops_links[i] = i;

    // Single-hop: the direct link runs alone.
    contention::ContentionGraph alone(1);

    if (q.mac == mmtp::MacKind::aloha) {
        std::vector<double> q_multi(
            q.hops, mmtp::aloha_model(complete, 0, q.p, 1.0).p_on);
        double q_single = mmtp::aloha_model(alone, 0, q.p, 1.0).p_on;
        return {aloha_rate_function(q_multi, q.rate_multi, Sign::laplace),
                aloha_rate_function({q_single}, q.rate_single, Sign::mgf)};
    }
    if (q.mac == mmtp::MacKind::csma) {
        auto multi = mmtp::csma_model(complete, q.nu, q.mu, q.rate_multi);
        auto single = mmtp::csma_model(alone, q.nu, q.mu, q.rate_single);
        return {csma_rate_function(multi, hops_links, Sign::laplace),
                csma_rate_function(single, {0}, Sign::mgf)};
    }
    throw std::invalid_argument("threshold supports aloha and csma");
}

std::optional<std::uint64_t> threshold_time(const ThresholdQuery& q) {
    auto [r_multi, r_single] = threshold_rate_functions(q);
    auto crossed = [&](std::uint64_t t) {
        double lo = lower_bound_rate(r_multi, q.hops, static_cast<double>(t),
                                     q.eps)
                        .rate;
        double up = upper_bound_rate(r_single, 1, static_cast<double>(t),
                                     q.eps)
                        .rate;
        return lo > up;
    };
    // The lower bound rises with t and the upper bound falls, so the
    // predicate is monotone: double to bracket, then bisect.
    std::uint64_t hi = 1;
    while (hi <= q.t_cap && !crossed(hi)) hi *= 2;
    if (hi > q.t_cap) return std::nullopt;
    std::uint64_t lo = hi / 2;  // crossed(lo) is false (or lo == 0)
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (crossed(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace tncap::analysis
