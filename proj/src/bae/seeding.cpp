#include <algorithm>
#include <cmath>
#include <sstream>

#include "twistxxz/bae.hpp"
#include "twistxxz/dense_matrix.hpp"
#include "twistxxz/error.hpp"
#include "twistxxz/kernels.hpp"

namespace twistxxz {
namespace {

enum Species { real_root = 0, half_root = 1, string_root = 2 };

// Driving kernel order of each species and the (sign, order) of the phase
// a root of species `a` picks up from a root of species `b`.
constexpr int drive_order[3] = {1, 2, 1};
constexpr int coupling_sign[3][3] = {{+1, -1, -1}, {+1, -1, -1}, {+1, -1, -1}};
constexpr int coupling_order[3][3] = {{2, 1, 2}, {1, 2, 1}, {2, 1, 2}};

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }
bool is_half_odd(double x) { return is_integer(x - 0.5); }

void check_species(const std::vector<double>& v, bool integers, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (integers ? !is_integer(v[i]) : !is_half_odd(v[i])) {
            std::ostringstream os;
            os << what << " quantum number " << v[i] << " must be " << (integers ? "an integer" : "a half-odd integer");
            fail(ErrorKind::invalid_argument, os.str());
        }
        for (std::size_t k = 0; k < i; ++k)
            if (std::abs(v[i] - v[k]) < 1e-9) fail(ErrorKind::invalid_argument, std::string(what) + " quantum numbers repeat");
    }
}

double clamp_tanh(double t) { return std::atanh(std::clamp(t, -0.99, 0.99)); }

struct RealSystem {
    int n;
    std::vector<int> species;
    std::vector<double> targets;  // 2 pi Q

    std::vector<double> residual(const std::vector<double>& v) const {
        std::vector<double> f(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int a = species[i];
            double s = n * theta_m(v[i], drive_order[a]);
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (k == i) continue;
                const int b = species[k];
                s += coupling_sign[a][b] * theta_m(v[i] - v[k], coupling_order[a][b]);
            }
            f[i] = s - targets[i];
        }
        return f;
    }

    DenseMatrix jacobian(const std::vector<double>& v) const {
        const std::size_t m = v.size();
        DenseMatrix j(m);
        for (std::size_t i = 0; i < m; ++i) {
            const int a = species[i];
            double d = n * 2.0 * pi * a_m(v[i], drive_order[a]);
            for (std::size_t k = 0; k < m; ++k) {
                if (k == i) continue;
                const int b = species[k];
                const double g = coupling_sign[a][b] * 2.0 * pi * a_m(v[i] - v[k], coupling_order[a][b]);
                d += g;
                j(i, k) = -g;
            }
            j(i, i) = d;
        }
        return j;
    }
};

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void solve_real_system(const RealSystem& sys, std::vector<double>& v) {
    auto f = sys.residual(v);
    for (int it = 0; it < 100 && norm2(f) > 1e-13; ++it) {
        std::vector<cplx> rhs(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -f[i];
        std::vector<cplx> step;
        try {
            step = solve_linear(sys.jacobian(v), rhs);
        } catch (const Error&) {
            return;
        }
        const double base = norm2(f);
        double t = 1.0;
        bool ok = false;
        for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
            auto trial = v;
            for (std::size_t i = 0; i < v.size(); ++i) trial[i] += t * step[i].real();
            auto ft = sys.residual(trial);
            if (norm2(ft) < base) {
                v = std::move(trial);
                f = std::move(ft);
                ok = true;
                break;
            }
        }
        if (!ok) return;
    }
}

}  // namespace

bool bulk_numbers_are_integers(int n_sites, int reals, int strings) { return (n_sites + reals - 1 + strings) % 2 == 0; }
bool half_line_numbers_are_integers(int half_lines) { return half_lines % 2 == 1; }
bool string_numbers_are_integers(int reals, int strings) { return (reals + strings) % 2 == 1; }

QuantumNumbers QuantumNumbers::ground(int n) {
    if (n < 2 || n % 2 != 0) fail(ErrorKind::invalid_argument, "ground-state quantum numbers need even N");
    QuantumNumbers q;
    for (int i = -n / 2 + 1; i <= n / 2 - 1; ++i) q.bulk.push_back(i);
    return q;
}

QuantumNumbers QuantumNumbers::type_one(int n, double j_value) {
    if (n < 4 || n % 2 != 0) fail(ErrorKind::invalid_argument, "type-I quantum numbers need even N >= 4");
    if (!is_integer(j_value) || std::abs(j_value) > n / 2 - 1)
        fail(ErrorKind::invalid_argument, "type-I J must be an integer in [-N/2+1, N/2-1]");
    QuantumNumbers q;
    const double top = (n - 1) / 2.0 - 1.0;
    for (double i = -top; i <= top + 1e-9; i += 1.0) q.bulk.push_back(i);
    q.half_line.push_back(j_value);
    return q;
}

QuantumNumbers QuantumNumbers::type_two(int n, int j) {
    if (n < 4 || n % 2 != 0) fail(ErrorKind::invalid_argument, "type-II quantum numbers need even N >= 4");
    if (j < 1 || j > n - 2) fail(ErrorKind::invalid_argument, "type-II index j must lie in [1, N-2]");
    const double hole = (n - 1) / 2.0 - j;
    QuantumNumbers q;
    const double top = (n - 1) / 2.0 - 1.0;
    for (double i = -top; i <= top + 1e-9; i += 1.0)
        if (std::abs(i - hole) > 1e-9) q.bulk.push_back(i);
    q.two_string.push_back(hole);
    return q;
}

void QuantumNumbers::validate(int n) const {
    if (n < 2) fail(ErrorKind::invalid_argument, "n_sites must be >= 2");
    if (root_count() != static_cast<std::size_t>(n - 1)) {
        std::ostringstream os;
        os << "quantum numbers describe " << root_count() << " roots, expected " << n - 1;
        fail(ErrorKind::invalid_argument, os.str());
    }
    const int r = static_cast<int>(bulk.size());
    const int h = static_cast<int>(half_line.size());
    const int s = static_cast<int>(two_string.size());
    check_species(bulk, bulk_numbers_are_integers(n, r, s), "bulk");
    check_species(half_line, half_line_numbers_are_integers(h), "half-line");
    check_species(two_string, string_numbers_are_integers(r, s), "2-string");
}

std::string QuantumNumbers::describe() const {
    std::ostringstream os;
    auto list = [&os](const char* name, const std::vector<double>& v) {
        os << name << "={";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "}";
    };
    list("I", bulk);
    os << " ";
    list("J_half", half_line);
    os << " ";
    list("J_string", two_string);
    return os.str();
}

ZeroPointSet seed_from_quantum_numbers(const QuantumNumbers& qn, const ModelParams& params, double string_offset) {
    params.validate();
    qn.validate(params.n_sites);
    const int n = params.n_sites;
    RealSystem sys{n, {}, {}};
    std::vector<double> v;
    auto add = [&](int sp, const std::vector<double>& qs, double scale) {
        for (double q : qs) {
            sys.species.push_back(sp);
            sys.targets.push_back(2.0 * pi * q);
            // Decoupled guess theta_drive(x) = 2 pi Q / N, clamped into the kernel range.
            const double t = std::tan(std::clamp(pi * q / n, -1.5, 1.5));
            v.push_back(clamp_tanh(t * scale));
        }
    };
    const double r3 = std::sqrt(3.0);
    add(real_root, qn.bulk, 1.0 / r3);
    add(half_root, qn.half_line, r3);
    add(string_root, qn.two_string, 1.0 / r3);
    // Break ties produced by the clamp.
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = 0; k < i; ++k)
            if (sys.species[i] == sys.species[k] && std::abs(v[i] - v[k]) < 1e-6) v[i] += 1e-3 * (i - k);
    solve_real_system(sys, v);

    std::vector<cplx> lam;
    lam.reserve(qn.root_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        switch (sys.species[i]) {
            case real_root: lam.emplace_back(v[i], 0.0); break;
            case half_root: lam.emplace_back(v[i], -pi / 2.0); break;
            default:
                lam.emplace_back(v[i], pi / 3.0 + string_offset);
                lam.emplace_back(v[i], -pi / 3.0 - string_offset);
        }
    }
    return ZeroPointSet::from_shifted(lam, params.eta);
}

SolveResult solve_quantum_numbers(const QuantumNumbers& qn, const ModelParams& params, const SolverConfig& cfg) {
    static constexpr double offsets[] = {0.02, 0.005, 0.05, 0.1, 0.001};
    SolveResult first_ok;
    bool have_ok = false;
    SolveResult last;
    for (double off : offsets) {
        last = solve_newton(seed_from_quantum_numbers(qn, params, off), params, cfg);
        if (!last.ok()) {
            if (qn.two_string.empty()) break;
            continue;
        }
        const auto pat = classify_roots(last.roots, params.eta, 0.25);
        if (pat.half_line == static_cast<int>(qn.half_line.size()) &&
            pat.strings == static_cast<int>(qn.two_string.size()) && pat.other == 0)
            return last;
        if (!have_ok) first_ok = last, have_ok = true;
        if (qn.two_string.empty()) break;  // the offset only moves string members
    }
    return have_ok ? first_ok : last;
}

}  // namespace twistxxz
