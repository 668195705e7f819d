#include "twistxxz/bae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "twistxxz/dense_matrix.hpp"
#include "twistxxz/error.hpp"

namespace twistxxz {
namespace {

constexpr double pole_tol = 1e-14;

cplx checked_sinh(cplx x) {
    const cplx s = std::sinh(x);
    if (std::abs(s) < pole_tol) fail(ErrorKind::singular_configuration, "zero point at a pole of the BAE");
    return s;
}

double wrap_phase(double x) {
    x = std::remainder(x, 2.0 * pi);
    if (x <= -pi) x += 2.0 * pi;
    return x;
}

cplx coth(cplx x) { return std::cosh(x) / std::sinh(x); }

double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

DenseMatrix bae_jacobian(const std::vector<cplx>& z, const ModelParams& p) {
    const std::size_t m = z.size();
    const cplx eta = p.eta;
    DenseMatrix jac(m);
    for (std::size_t j = 0; j < m; ++j) {
        cplx diag{};
        for (const auto& th : p.thetas) diag += coth(z[j] - th) - coth(z[j] - th - 2.0 * eta);
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            const cplx d = z[j] - z[k];
            const cplx c = coth(d + eta) - coth(d - eta);
            diag -= c;
            jac(j, k) = c;
        }
        jac(j, j) = diag;
    }
    return jac;
}

bool has_collision(const ZeroPointSet& s, double tol, cplx eta) {
    const auto lam = s.shifted(eta);
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t j = i + 1; j < lam.size(); ++j) {
            cplx d = canonical_root(lam[i] - lam[j]);
            if (std::abs(d) < tol) return true;
        }
    return false;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tol > 0.0) || max_iter <= 0 || !(damping > 0.0) || !(dedupe_tol > 0.0))
        fail(ErrorKind::invalid_argument, "solver settings must be positive");
}

ZeroPointSet ZeroPointSet::from_shifted(std::span<const cplx> lambdas, cplx eta) {
    ZeroPointSet s;
    s.zeros.reserve(lambdas.size());
    for (const auto& l : lambdas) s.zeros.push_back(l - eta / 2.0);
    return s;
}

std::vector<cplx> ZeroPointSet::shifted(cplx eta) const {
    std::vector<cplx> out;
    out.reserve(zeros.size());
    for (const auto& z : zeros) out.push_back(z + eta / 2.0);
    return out;
}

cplx canonical_root(cplx lambda) {
    double im = std::remainder(lambda.imag(), pi);  // [-pi/2, pi/2]
    if (im <= -pi / 2.0) im += pi;
    return {lambda.real(), im};
}

const char* to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::line_search_failed: return "line_search_failed";
        case SolveStatus::singular_jacobian: return "singular_jacobian";
        case SolveStatus::singular_configuration: return "singular_configuration";
        case SolveStatus::collision: return "collision";
    }
    return "unknown";
}

std::vector<cplx> bae_residual(const ZeroPointSet& zs, const ModelParams& p) {
    p.validate();
    const auto& z = zs.zeros;
    const cplx eta = p.eta;
    if (std::abs(std::sinh(eta)) < pole_tol) fail(ErrorKind::degenerate_anisotropy, "sinh(eta) vanishes");
    std::vector<cplx> r(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        cplx acc{};
        for (const auto& th : p.thetas)
            acc += std::log(checked_sinh(z[j] - th)) - std::log(checked_sinh(z[j] - th - 2.0 * eta));
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (k == j) continue;
            const cplx d = z[j] - z[k];
            acc -= std::log(checked_sinh(d + eta)) - std::log(checked_sinh(d - eta));
        }
        r[j] = {acc.real(), wrap_phase(acc.imag())};
    }
    return r;
}

double max_abs(std::span<const cplx> v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

SolveResult solve_newton(const ZeroPointSet& initial, const ModelParams& params, const SolverConfig& cfg) {
    cfg.validate();
    params.validate();
    if (initial.size() + 1 != static_cast<std::size_t>(params.n_sites))
        fail(ErrorKind::invalid_argument, "expected N-1 zero points");

    SolveResult res;
    res.roots = initial;
    std::vector<cplx> r;
    try {
        r = bae_residual(res.roots, params);
    } catch (const Error& e) {
        res.status = SolveStatus::singular_configuration;
        res.message = e.what();
        return res;
    }
    for (const auto& x : r)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            res.status = SolveStatus::singular_configuration;
            res.message = "initial residual is not finite";
            return res;
        }
    res.residual = max_abs(r);
    res.residual_history.push_back(res.residual);

    const std::size_t m = initial.size();
    for (int it = 0;; ++it) {
        if (res.residual < cfg.tol) {
            res.iterations = it;
            if (has_collision(res.roots, cfg.dedupe_tol, params.eta)) {
                res.status = SolveStatus::collision;
                res.message = "two zero points coincide";
            } else {
                res.status = SolveStatus::converged;
            }
            return res;
        }
        if (it == cfg.max_iter) {
            res.iterations = it;
            res.status = SolveStatus::max_iterations;
            std::ostringstream os;
            os << "no convergence after " << it << " iterations, residual " << res.residual;
            res.message = os.str();
            return res;
        }
        std::vector<cplx> step;
        try {
            std::vector<cplx> rhs(m);
            for (std::size_t i = 0; i < m; ++i) rhs[i] = -r[i];
            step = solve_linear(bae_jacobian(res.roots.zeros, params), rhs);
        } catch (const Error&) {
            res.iterations = it;
            res.status = SolveStatus::singular_jacobian;
            res.message = "singular Jacobian; re-seed the solve";
            return res;
        }

        const double base = norm2(r);
        double t = cfg.damping;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
            ZeroPointSet trial = res.roots;
            for (std::size_t i = 0; i < m; ++i) trial.zeros[i] += t * step[i];
            std::vector<cplx> rt;
            try {
                rt = bae_residual(trial, params);
            } catch (const Error&) {
                continue;
            }
            const double n = norm2(rt);
            if (std::isfinite(n) && n < base) {
                res.roots = std::move(trial);
                r = std::move(rt);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.iterations = it;
            res.status = SolveStatus::line_search_failed;
            std::ostringstream os;
            os << "line search stalled at residual " << res.residual;
            res.message = os.str();
            return res;
        }
        res.residual = max_abs(r);
        res.residual_history.push_back(res.residual);
    }
}

SolveResult continue_solution(const ZeroPointSet& start, const ModelParams& from, const ModelParams& to,
                              int steps, const SolverConfig& cfg) {
    from.validate();
    to.validate();
    if (from.n_sites != to.n_sites || steps < 1)
        fail(ErrorKind::invalid_argument, "continuation needs equal sizes and at least one step");
    SolveResult res;
    res.roots = start;
    res.status = SolveStatus::converged;
    int total = 0;
    for (int s = 1; s <= steps; ++s) {
        ModelParams p = to;
        const double f = static_cast<double>(s) / steps;
        p.eta = from.eta + f * (to.eta - from.eta);
        for (std::size_t i = 0; i < p.thetas.size(); ++i)
            p.thetas[i] = from.thetas[i] + f * (to.thetas[i] - from.thetas[i]);
        res = solve_newton(res.roots, p, cfg);
        total += res.iterations;
        if (!res.ok()) break;
    }
    res.iterations = total;
    return res;
}

cplx complex_energy_from_zeros(const ZeroPointSet& zs, const ModelParams& p) {
    p.validate();
    cplx e = static_cast<double>(p.n_sites) * std::cosh(p.eta);
    const cplx sh = std::sinh(p.eta);
    for (const auto& z : zs.zeros) e += 2.0 * sh * coth(z);
    return e;
}

double energy_from_zeros(const ZeroPointSet& zs, const ModelParams& p, double imag_tol) {
    const cplx e = complex_energy_from_zeros(zs, p);
    if (!(std::abs(e.imag()) <= imag_tol)) {
        std::ostringstream os;
        os << "energy has imaginary part " << e.imag();
        fail(ErrorKind::non_physical, os.str());
    }
    return e.real();
}

std::string RootPattern::name() const {
    if (other == 0 && half_line == 0 && strings == 0) return "ground-like";
    if (other == 0 && half_line == 1 && strings == 0) return "type-I";
    if (other == 0 && half_line == 0 && strings == 1) return "type-II";
    std::ostringstream os;
    os << real << " real";
    if (half_line) os << " + " << half_line << " half-line";
    if (strings) os << " + " << strings << " 2-string";
    if (other) os << " + " << other << " other";
    return os.str();
}

RootPattern classify_roots(const ZeroPointSet& zs, cplx eta, double tol) {
    const auto lam = zs.shifted(eta);
    RootPattern pat;
    pat.labels.assign(lam.size(), RootLabel::other);
    std::vector<std::size_t> upper, lower;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const cplx c = canonical_root(lam[i]);
        const double im = c.imag();
        if (std::abs(im) < tol) {
            pat.labels[i] = RootLabel::real;
        } else if (std::abs(std::abs(im) - pi / 2.0) < tol) {
            pat.labels[i] = RootLabel::half_line;
            pat.half_line_centers.push_back(c.real());
        } else if (std::abs(im - pi / 3.0) < tol) {
            upper.push_back(i);
        } else if (std::abs(im + pi / 3.0) < tol) {
            lower.push_back(i);
        }
    }
    // Pair string members by nearest real part.
    std::vector<bool> used(lower.size(), false);
    for (auto u : upper) {
        std::size_t best = lower.size();
        double bd = 1e300;
        for (std::size_t k = 0; k < lower.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(lam[u].real() - lam[lower[k]].real());
            if (d < bd) bd = d, best = k;
        }
        if (best == lower.size()) continue;
        used[best] = true;
        pat.labels[u] = RootLabel::string_upper;
        pat.labels[lower[best]] = RootLabel::string_lower;
        pat.string_centers.push_back(0.5 * (lam[u].real() + lam[lower[best]].real()));
        if (bd > tol) {
            std::ostringstream os;
            os << "2-string members differ in real part by " << bd;
            pat.warnings.push_back(os.str());
        }
    }
    for (std::size_t i = 0; i < lam.size(); ++i) {
        switch (pat.labels[i]) {
            case RootLabel::real: ++pat.real; break;
            case RootLabel::half_line: ++pat.half_line; break;
            case RootLabel::string_upper: ++pat.strings; break;
            case RootLabel::string_lower: break;
            case RootLabel::other: {
                ++pat.other;
                std::ostringstream os;
                os << "root " << i << " (" << lam[i].real() << (lam[i].imag() < 0 ? "" : "+") << lam[i].imag()
                   << "i) is on no pattern line";
                pat.warnings.push_back(os.str());
                break;
            }
        }
    }
    std::sort(pat.half_line_centers.begin(), pat.half_line_centers.end());
    std::sort(pat.string_centers.begin(), pat.string_centers.end());
    return pat;
}

bool same_roots(const ZeroPointSet& a, const ZeroPointSet& b, double tol, cplx eta) {
    if (a.size() != b.size()) return false;
    const auto la = a.shifted(eta);
    const auto lb = b.shifted(eta);
    std::vector<bool> used(lb.size(), false);
    for (const auto& x : la) {
        bool found = false;
        for (std::size_t k = 0; k < lb.size(); ++k) {
            if (used[k]) continue;
            if (std::abs(canonical_root(x - lb[k])) <= tol) {
                used[k] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

MatchReport match_spectrum(std::span<const double> ed, std::span<const double> bae, double tol,
                           int states_per_solution) {
    if (states_per_solution < 1) fail(ErrorKind::invalid_argument, "states_per_solution must be >= 1");
    struct Candidate {
        double d;
        std::size_t b, e;
    };
    std::vector<Candidate> cands;
    for (std::size_t b = 0; b < bae.size(); ++b)
        for (std::size_t e = 0; e < ed.size(); ++e) {
            const double d = std::abs(bae[b] - ed[e]);
            if (d <= tol) cands.push_back({d, b, e});
        }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.d < y.d; });
    std::vector<int> claimed(bae.size(), 0);
    std::vector<bool> ed_used(ed.size(), false);
    MatchReport rep;
    for (const auto& c : cands) {
        if (ed_used[c.e] || claimed[c.b] >= states_per_solution) continue;
        ed_used[c.e] = true;
        ++claimed[c.b];
        rep.pairs.push_back({c.b, c.e, c.d});
        rep.max_deviation = std::max(rep.max_deviation, c.d);
    }
    for (std::size_t e = 0; e < ed.size(); ++e)
        if (!ed_used[e]) rep.unmatched_ed.push_back(e);
    for (std::size_t b = 0; b < bae.size(); ++b)
        if (claimed[b] < states_per_solution) rep.unmatched_bae.push_back(b);
    std::sort(rep.pairs.begin(), rep.pairs.end(),
              [](const MatchReport::Pair& x, const MatchReport::Pair& y) { return x.bae_index < y.bae_index; });
    return rep;
}

}  // namespace twistxxz
