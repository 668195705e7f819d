#include "twistxxz/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "twistxxz/error.hpp"

namespace twistxxz {
namespace {

// Householder reduction of the symmetric matrix held in v (row-major n x n).
// On exit v holds the accumulated orthogonal transform, d the diagonal and
// e the subdiagonal (e[0] = 0).
void householder_tridiagonalize(std::vector<double>& v, std::vector<double>& d,
                                std::vector<double>& e, std::size_t n) {
    auto V = [&](std::size_t r, std::size_t c) -> double& { return v[r * n + c]; };
    for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
                V(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                V(j, i) = f;
                g = e[j] + V(j, j) * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += V(k, j) * d[k];
                    e[k] += V(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k) V(k, j) -= (f * e[k] + g * d[k]);
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        V(n - 1, i) = V(i, i);
        V(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
                for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = V(n - 1, j);
        V(n - 1, j) = 0.0;
    }
    V(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL sweeps on the tridiagonal (d, e), rotating v alongside.
void tridiagonal_ql(std::vector<double>& v, std::vector<double>& d, std::vector<double>& e,
                    std::size_t n, bool want_vectors) {
    auto V = [&](std::size_t r, std::size_t c) -> double& { return v[r * n + c]; };
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m == n) m = n - 1;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 200) fail(ErrorKind::consistency, "QL iteration did not converge");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (want_vectors) {
                        for (std::size_t k = 0; k < n; ++k) {
                            const double t = V(k, i + 1);
                            V(k, i + 1) = s * V(k, i) + c * t;
                            V(k, i) = c * V(k, i) - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n, bool want_vectors) {
    if (a.size() != n * n) fail(ErrorKind::invalid_argument, "matrix storage is not n*n");
    SymmetricEigen out;
    out.n = n;
    if (n == 0) return out;
    if (n == 1) {
        out.values = {a[0]};
        if (want_vectors) out.vectors = {1.0};
        return out;
    }
    std::vector<double> d(n), e(n);
    householder_tridiagonalize(a, d, e, n);
    tridiagonal_ql(a, d, e, n, want_vectors);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return d[x] < d[y]; });
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
    if (want_vectors) {
        out.vectors.resize(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) out.vectors[r * n + k] = a[r * n + order[k]];
    }
    return out;
}

HermitianEigen hermitian_eigen_jacobi(const DenseMatrix& h, double tol, int max_sweeps) {
    const std::size_t n = h.dim();
    DenseMatrix a = h;
    DenseMatrix v = DenseMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (p != q) s += std::norm(a(p, q));
        return std::sqrt(s);
    };
    const double scale = std::max(a.frobenius_norm(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps && off_norm() > tol * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= tol * scale * 1e-3) continue;
                // Phase-rotate to a real off-diagonal, then apply a real Givens rotation.
                const cplx phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                // Unitary G: columns p, q -> c*e_p - s*conj(phase)*e_q, s*phase*e_p + c*e_q
                auto rotate_cols = [&](DenseMatrix& m) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const cplx mkp = m(k, p);
                        const cplx mkq = m(k, q);
                        m(k, p) = c * mkp - s * std::conj(phase) * mkq;
                        m(k, q) = s * phase * mkp + c * mkq;
                    }
                };
                auto rotate_rows = [&](DenseMatrix& m) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const cplx mpk = m(p, k);
                        const cplx mqk = m(q, k);
                        m(p, k) = c * mpk - s * phase * mqk;
                        m(q, k) = s * std::conj(phase) * mpk + c * mqk;
                    }
                };
                rotate_cols(a);
                rotate_rows(a);
                rotate_cols(v);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](auto x, auto y) { return a(x, x).real() < a(y, y).real(); });
    HermitianEigen out{std::vector<double>(n), DenseMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

}  // namespace twistxxz
