#include "twistxxz/tq.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "twistxxz/error.hpp"

namespace twistxxz {
namespace {

double rel(cplx lhs, cplx rhs) {
    const double den = std::max(std::abs(lhs), std::abs(rhs));
    return den == 0.0 ? 0.0 : std::abs(lhs - rhs) / den;
}

double rel_sum(std::span<const cplx> terms) {
    cplx s{};
    double den = 0.0;
    for (const auto& t : terms) {
        s += t;
        den = std::max(den, std::abs(t));
    }
    return den == 0.0 ? 0.0 : std::abs(s) / den;
}

double sign_pow(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

cplx horner(std::span<const cplx> c, cplx x) {
    cplx p{};
    for (const auto& a : c) p = p * x + a;
    return p;
}

cplx horner_derivative(std::span<const cplx> c, cplx x) {
    const std::size_t n = c.size() - 1;
    cplx p{};
    for (std::size_t k = 0; k < n; ++k) p = p * x + c[k] * static_cast<double>(n - k);
    return p;
}

}  // namespace

cplx a_function(cplx u, const ModelParams& p) {
    const cplx s = std::sinh(p.eta);
    if (std::abs(s) < 1e-14) fail(ErrorKind::degenerate_anisotropy, "sinh(eta) vanishes");
    cplx r{1.0, 0.0};
    for (const auto& th : p.thetas) r *= std::sinh(u - th + p.eta) / s;
    return r;
}

cplx d_function(cplx u, const ModelParams& p) { return a_function(u - p.eta, p); }

cplx SpectralFunction::operator()(cplx u) const {
    cplx r = lambda0;
    for (const auto& z : zeros) r *= std::sinh(u - z);
    return r;
}

cplx lambda_from_zeros(cplx u, const SpectralFunction& f) { return f(u); }

double BilinearReport::max_relative() const {
    double m = 0.0;
    for (double r : relative) m = std::max(m, r);
    return m;
}

BilinearReport bilinear_residuals(const SpectralFunction& f, const ModelParams& p) {
    p.validate();
    BilinearReport rep;
    for (const auto& th : p.thetas) {
        const cplx lhs = f(th) * f(th - p.eta);
        const cplx rhs = -a_function(th, p) * d_function(th - p.eta, p);
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        rep.relative.push_back(rel(lhs, rhs));
    }
    return rep;
}

Lambda0Fit fit_lambda0(const ZeroPointSet& zs, const ModelParams& p) {
    p.validate();
    if (zs.size() + 1 != static_cast<std::size_t>(p.n_sites))
        fail(ErrorKind::invalid_argument, "expected N-1 zero points");
    SpectralFunction f{{1.0, 0.0}, zs.zeros};
    const cplx th = p.thetas.front();
    const cplx prod = f(th) * f(th - p.eta);
    if (std::abs(prod) < 1e-300) fail(ErrorKind::inconsistent_zero_set, "a zero point sits on an identity point");
    cplx l0 = std::sqrt(-a_function(th, p) * d_function(th - p.eta, p) / prod);
    if (l0.real() < 0.0 || (l0.real() == 0.0 && l0.imag() < 0.0)) l0 = -l0;
    f.lambda0 = l0;
    return {f, bilinear_residuals(f, p)};
}

void require_consistent(const Lambda0Fit& fit, double tol) {
    const double m = fit.report.max_relative();
    if (!(m <= tol))
        fail(ErrorKind::inconsistent_zero_set,
             "bilinear identities fail for both signs of lambda0 (max relative residual " + std::to_string(m) + ")");
}

std::vector<cplx> cubic_sample_points(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-1.0, 1.0), im(-pi / 2.0, pi / 2.0);
    std::vector<cplx> out;
    while (out.size() < count) {
        const double x = re(rng), y = im(rng);
        const double step = pi / 6.0;
        const double dist = std::abs(std::abs(y) - step * std::round(std::abs(y) / step));
        if (dist < 0.05) continue;
        out.emplace_back(x, y);
    }
    return out;
}

CubicReport verify_cubic(const SpectralFunction& f, const ModelParams& p, std::span<const cplx> samples) {
    p.validate();
    const cplx e = p.eta;
    const double sn = sign_pow(p.n_sites);
    CubicReport rep;
    for (const auto& u : samples) {
        const cplx l0 = f(u), l1 = f(u - e), l2 = f(u - 2.0 * e);
        const cplx terms[4] = {
            l0 * l1 * l2,
            a_function(u, p) * d_function(u - e, p) * l2,
            a_function(u - e, p) * d_function(u - 2.0 * e, p) * l0,
            -sn * a_function(u + e, p) * d_function(u, p) * l1,
        };
        const double r = rel_sum(terms);
        rep.samples.push_back(u);
        rep.relative.push_back(r);
        rep.max_relative = std::max(rep.max_relative, r);
    }
    return rep;
}

cplx f3_function(cplx u, const SpectralFunction& f, cplx eta) { return f(u) * f(u - eta) * f(u - 2.0 * eta); }

double F3Report::max() const { return std::max({quasi_periodicity, property1, property2, property3}); }

F3Report verify_f3_properties(const SpectralFunction& f, const ModelParams& p, std::span<const cplx> samples) {
    p.validate();
    const cplx e = p.eta;
    const int n = p.n_sites;
    F3Report rep;
    for (const auto& u : samples)
        rep.quasi_periodicity =
            std::max(rep.quasi_periodicity, rel(f3_function(u + e, f, e), sign_pow(n - 1) * f3_function(u, f, e)));
    for (const auto& th : p.thetas) {
        const cplx ad = a_function(th, p) * d_function(th - e, p);
        rep.property1 = std::max(rep.property1, rel(f3_function(th, f, e), -ad * f(th - 2.0 * e)));
        rep.property2 = std::max(rep.property2, rel(f3_function(th + e, f, e), -ad * f(th + e)));
        rep.property3 = std::max(rep.property3, rel(f3_function(th + 2.0 * e, f, e), sign_pow(n) * ad * f(th + e)));
    }
    return rep;
}

double degree_tail(const std::function<cplx(cplx)>& lambda, int n) {
    if (n < 1) fail(ErrorKind::invalid_argument, "n_sites must be positive");
    const int samples = 4 * n;
    std::vector<cplx> values(samples);
    for (int k = 0; k < samples; ++k) values[k] = lambda(cplx{0.0, k * pi / (2.0 * n)});
    double inside = 0.0, outside = 0.0;
    for (int m = -2 * n; m < 2 * n; ++m) {
        cplx c{};
        for (int k = 0; k < samples; ++k) c += values[k] * std::exp(cplx{0.0, -m * k * pi / (2.0 * n)});
        c /= static_cast<double>(samples);
        (std::abs(m) <= n - 1 ? inside : outside) += std::norm(c);
    }
    const double total = inside + outside;
    return total == 0.0 ? 0.0 : std::sqrt(outside / total);
}

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs) {
    if (coeffs.empty() || coeffs.front() == cplx{}) fail(ErrorKind::precondition, "leading coefficient vanishes");
    const std::size_t n = coeffs.size() - 1;
    std::vector<cplx> c(coeffs.begin(), coeffs.end());
    for (auto& x : c) x /= coeffs.front();
    if (n == 0) return {};
    double radius = 0.0;
    for (std::size_t k = 1; k <= n; ++k) radius = std::max(radius, std::pow(std::abs(c[k]), 1.0 / k));
    radius = std::max(radius, 1e-3);
    std::vector<cplx> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = radius * std::exp(cplx{0.0, 2.0 * pi * k / n + 0.4});
    for (int it = 0; it < 500; ++it) {
        double change = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx pv = horner(c, r[k]);
            if (pv == cplx{}) continue;
            const cplx ratio = pv / horner_derivative(c, r[k]);
            cplx s{};
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) s += 1.0 / (r[k] - r[j]);
            const cplx w = ratio / (1.0 - ratio * s);
            r[k] -= w;
            change = std::max(change, std::abs(w) / std::max(1.0, std::abs(r[k])));
        }
        if (change < 1e-15) break;
    }
    for (auto& x : r)
        for (int it = 0; it < 3; ++it) {
            const cplx d = horner_derivative(c, x);
            if (d == cplx{}) break;
            x -= horner(c, x) / d;
        }
    return r;
}

SpectralFunction zeros_from_samples(const std::function<cplx(cplx)>& lambda, int n) {
    if (n < 2) fail(ErrorKind::invalid_argument, "n_sites must be >= 2");
    // Lambda(i phi) = sum_k c_k exp(i (N-1-2k) phi); 2N samples separate the N modes.
    const int samples = 2 * n;
    std::vector<cplx> values(samples);
    for (int s = 0; s < samples; ++s) values[s] = lambda(cplx{0.0, pi * s / n});
    std::vector<cplx> c(n);
    double scale = 0.0;
    for (int k = 0; k < n; ++k) {
        const int m = n - 1 - 2 * k;
        for (int s = 0; s < samples; ++s) c[k] += values[s] * std::exp(cplx{0.0, -m * pi * s / n});
        c[k] /= static_cast<double>(samples);
        scale = std::max(scale, std::abs(c[k]));
    }
    if (scale == 0.0) fail(ErrorKind::precondition, "function vanishes identically");
    if (std::abs(c.front()) < 1e-12 * scale || std::abs(c.back()) < 1e-12 * scale)
        fail(ErrorKind::precondition, "a zero point sits at infinity");
    // In x = exp(2u): Lambda = exp(-(N-1)u) sum_k c_k x^{N-1-k}.
    const auto xs = polynomial_roots(c);
    SpectralFunction f;
    cplx lead{1.0, 0.0};
    for (const auto& x : xs) {
        const cplx z = 0.5 * std::log(x);
        f.zeros.push_back(z);
        lead *= std::exp(-z) / 2.0;
    }
    f.lambda0 = c.front() / lead;
    return f;
}

}  // namespace twistxxz
