#include "tncap/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tncap/errors.hpp"

namespace tncap::eig {

namespace {

// Householder similarity reduction to upper Hessenberg form, in place.
void hessenberg_reduce(Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    std::vector<double> v(n, 0.0);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(a(i, k));
        if (scale == 0.0) continue;
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k) / scale;
            norm2 += v[i] * v[i];
        }
        double alpha = std::sqrt(norm2);
        if (v[k + 1] > 0.0) alpha = -alpha;
        // v = x - alpha e1
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;

        // A <- (I - beta v v^T) A
        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * a(i, j);
            dot *= beta;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= dot * v[i];
        }
        // A <- A (I - beta v v^T)
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
            dot *= beta;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= dot * v[j];
        }
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr shape).
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix& h) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(h.rows());
    std::vector<std::complex<double>> out;
    out.reserve(n);
    const double eps = std::numeric_limits<double>::epsilon();

    double norm = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i)
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(i - 1, 0); j < n; ++j)
            norm += std::abs(h(i, j));
    if (norm == 0.0) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out.push_back(0.0);
        return out;
    }

    std::ptrdiff_t nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        std::ptrdiff_t l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = norm;
                if (std::abs(h(l, l - 1)) <= eps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = h(nn, nn);
            if (l == nn) {  // one root found
                out.push_back(x + t);
                --nn;
            } else {
                double y = h(nn - 1, nn - 1);
                double w = h(nn, nn - 1) * h(nn - 1, nn);
                if (l == nn - 1) {  // two roots found
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {  // real pair
                        z = p + (p >= 0.0 ? z : -z);
                        out.push_back(x + z);
                        out.push_back(z == 0.0 ? x + z : x - w / z);
                    } else {  // complex pair
                        out.push_back({x + p, z});
                        out.push_back({x + p, -z});
                    }
                    nn -= 2;
                } else {  // no roots yet, continue iterating
                    if (its == 30)
                        throw numeric_error(
                            "qr eigenvalue iteration failed to converge");
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0, s = 0.0;
                    if (its == 10 || its == 20) {  // exceptional shift
                        t += x;
                        for (std::ptrdiff_t i = 0; i <= nn; ++i) h(i, i) -= x;
                        s = std::abs(h(nn, nn - 1)) +
                            std::abs(h(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    std::ptrdiff_t m;
                    for (m = nn - 2; m >= l; --m) {
                        z = h(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
                        q = h(m + 1, m + 1) - z - r - s;
                        r = h(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        double u = std::abs(h(m, m - 1)) *
                                   (std::abs(q) + std::abs(r));
                        double v = std::abs(p) *
                                   (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                    std::abs(h(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (std::ptrdiff_t i = m + 2; i <= nn; ++i) {
                        h(i, i - 2) = 0.0;
                        if (i > m + 2) h(i, i - 3) = 0.0;
                    }
                    for (std::ptrdiff_t k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = h(k, k - 1);
                            q = h(k + 1, k - 1);
                            r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = std::sqrt(p * p + q * q + r * r);
                        if (p < 0.0) s = -s;
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) h(k, k - 1) = -h(k, k - 1);
                        } else {
                            h(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        double yy = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        // row modification
                        for (std::ptrdiff_t j = k; j <= nn; ++j) {
                            double pp = h(k, j) + q * h(k + 1, j);
                            if (k != nn - 1) {
                                pp += r * h(k + 2, j);
                                h(k + 2, j) -= pp * z;
                            }
                            h(k + 1, j) -= pp * yy;
                            h(k, j) -= pp * x;
                        }
                        std::ptrdiff_t mmin = (nn < k + 3) ? nn : k + 3;
                        // column modification
                        for (std::ptrdiff_t i = l; i <= mmin; ++i) {
                            double pp = x * h(i, k) + yy * h(i, k + 1);
                            if (k != nn - 1) {
                                pp += z * h(i, k + 2);
                                h(i, k + 2) -= pp * r;
                            }
                            h(i, k + 1) -= pp * q;
                            h(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return out;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(Matrix a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("eigenvalues: matrix must be square");
    const std::size_t n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};
    hessenberg_reduce(a);
    return hessenberg_eigenvalues(a);
}

double max_real_eig(const Matrix& b) {
    if (b.rows() != b.cols())
        throw std::invalid_argument("max_real_eig: matrix must be square");
    const std::size_t n = b.rows();
    if (n == 0) throw std::invalid_argument("max_real_eig: empty matrix");
    if (n == 1) return b(0, 0);

    if (b.is_metzler()) {
        double sigma = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            sigma = std::max(sigma, 1.0 + std::abs(b(i, i)));
        Matrix a = b;
        for (std::size_t i = 0; i < n; ++i) a(i, i) += sigma;  // a >= 0
        std::vector<double> v(n, 1.0);
        for (int it = 0; it < 200000; ++it) {
            std::vector<double> w = a.apply(v);
            double up = -std::numeric_limits<double>::infinity();
            double lo = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                double ratio = w[i] / v[i];
                up = std::max(up, ratio);
                lo = std::min(lo, ratio);
            }
            if (up - lo <= 1e-13 * std::max(1.0, std::abs(up)))
                return 0.5 * (up + lo) - sigma;
            double scale = 0.0;
            for (double x : w) scale = std::max(scale, x);
            if (!(scale > 0.0)) break;  // reducible corner case
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / scale;
        }
        // Collatz-Wielandt bracket failed to close (reducible matrix or a
        // pathological gap); the QR path below settles it.
    }

    auto eigs = eigenvalues(b);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : eigs) best = std::max(best, z.real());
    return best;
}

}  // namespace tncap::eig
