// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "twistxxz/bae.hpp"
#include "twistxxz/core.hpp"
#include "twistxxz/thermo.hpp"
#include "twistxxz/tq.hpp"

using namespace twistxxz;
using testsupport::load_table1;
using testsupport::rel_diff;
using testsupport::table_set;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> grid(double a, double b, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
    return g;
}

cplx random_u(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-1.0, 1.0), im(-pi / 2.0, pi / 2.0);
    return {re(rng), im(rng)};
}

void table1(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = ModelParams::homogeneous(6);
    const auto rows = load_table1();
    std::vector<double> energies;
    double printed = 0.0;
    int converged = 0;
    for (const auto& row : rows) {
        const auto r = solve_newton(table_set(row), p);
        if (!r.ok()) continue;
        ++converged;
        const double e = energy_from_zeros(r.roots, p);
        printed = std::max(printed, std::abs(e - row.energy));
        energies.push_back(e);
    }
    const auto ed = solve_chain(p, false).eigenvalues;
    const auto m = match_spectrum(ed, energies, 1e-8, 2);
    o.require(rows.size() == 32 && converged == 32, "all 32 levels converge");
    o.require(printed < 1e-3, "printed energies within 1e-3");
    o.require(m.all_bae_matched() && m.unmatched_ed.empty(), "ED match within 1e-8");
    o.detail << "levels " << converged << "/32, max |E-E_printed| " << printed << ", max |E-E_ed| "
             << m.max_deviation << ", " << seconds_since(t0) << " s";
}

void ground_level(Outcome& o) {
    const auto e = solve_chain(ModelParams::homogeneous(6), false).eigenvalues;
    o.require(std::abs(e.front() + 6.4785) < 1e-3, "minimum -6.4785");
    o.require(std::abs(e.back() - 8.7513) < 1e-3, "maximum 8.7513");
    o.detail << "min " << e.front() << ", max " << e.back();
}

void identities(Outcome& o) {
    for (int n : {4, 6}) {
        const auto from = ModelParams::homogeneous(n);
        const auto to = ModelParams::random_inhomogeneous(n, 4242 + n);
        std::vector<ZeroPointSet> starts;
        if (n == 6) {
            for (const auto& row : load_table1()) starts.push_back(table_set(row));
        } else {
            for (const auto& s : scan_quantum_numbers(from)) starts.push_back(s.roots);
        }
        const auto samples = cubic_sample_points(20, 77);
        int good = 0;
        double worst_bilinear = 0.0, worst_cubic = 0.0;
        for (const auto& s : starts) {
            const auto r = continue_solution(s, from, to);
            if (!r.ok()) continue;
            const auto fit = fit_lambda0(r.roots, to);
            const double b = fit.report.max_relative();
            const double c = verify_cubic(fit.function, to, samples).max_relative;
            worst_bilinear = std::max(worst_bilinear, b);
            worst_cubic = std::max(worst_cubic, c);
            good += b < 1e-8 && c < 1e-6;
        }
        o.require(good >= 5, "N=" + std::to_string(n) + " has 5 verified states");
        o.detail << (n == 4 ? "" : "; ") << "N=" << n << ": " << good << "/" << starts.size() << " states, bilinear " << worst_bilinear
                 << ", cubic " << worst_cubic;
    }
}

void transfer(Outcome& o) {
    std::mt19937_64 rng(2024);
    double comm = 0.0, quasi = 0.0, ham = 0.0;
    for (int n = 2; n <= 8; ++n) {
        const auto p = n % 2 ? ModelParams::random_inhomogeneous(n, 300 + n) : ModelParams::homogeneous(n);
        const double sign = (n - 1) % 2 ? -1.0 : 1.0;
        for (int k = 0; k < 10; ++k) {
            const cplx u = random_u(rng), v = random_u(rng);
            const auto tu = build_transfer_matrix(u, p);
            const auto tv = build_transfer_matrix(v, p);
            comm = std::max(comm, commutator(tu, tv).frobenius_norm() / (tu.frobenius_norm() * tv.frobenius_norm()));
            if (k < 2) quasi = std::max(quasi, rel_diff(build_transfer_matrix(u + I * pi, p), sign * tu));
        }
        if (n <= 6) {
            const auto h = ModelParams::homogeneous(n);
            ham = std::max(ham, rel_diff(hamiltonian_from_transfer(h), build_hamiltonian(h)));
        }
    }
    o.require(comm < 1e-10, "commutator");
    o.require(quasi < 1e-10, "quasi-periodicity");
    o.require(ham < 1e-6, "hamiltonian from transfer");
    o.detail << "commutator " << comm << ", quasi-periodicity " << quasi << ", H from t " << ham;
}

void thermodynamic_limit(Outcome& o) {
    const auto g = ground_energy_density(1.0);
    o.require(std::abs(g.quadrature - g.closed_form) < 1e-8, "quadrature");
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = ModelParams::homogeneous(64);
    const auto r = solve_quantum_numbers(QuantumNumbers::ground(64), p);
    const double secs = seconds_since(t0);
    o.require(r.ok(), "N=64 converges");
    const double e64 = r.ok() ? energy_from_zeros(r.roots, p) / 64.0 : NAN;
    o.require(std::abs(e64 - g.closed_form) < 1e-3, "N=64 within 1e-3");
    o.require(secs < 60.0, "N=64 under a minute");
    o.detail << "e_g " << g.closed_form << ", quadrature gap " << std::abs(g.quadrature - g.closed_form)
             << ", N=64 gap " << e64 - g.closed_form << " in " << secs << " s";
}

void excitations(Outcome& o) {
    const double e1 = excitation_energy({ExcitationKind::type_one, 0.0, {}});
    const double e2 = excitation_energy({ExcitationKind::type_two, 0.0, {}});
    o.require(std::abs(e1 - 1.5 * std::sqrt(3.0)) < 1e-12, "de1(0)");
    o.require(std::abs(e2 - 3.0 * std::sqrt(6.0)) < 1e-12, "de2(0)");
    double quad = 0.0, pair = 0.0;
    for (double a : grid(-2.0, 2.0, 21)) {
        for (auto k : {ExcitationKind::type_one, ExcitationKind::type_two}) {
            const ExcitationSpec s{k, a, {}};
            quad = std::max(quad, std::abs(excitation_energy_quadrature(s) - excitation_energy(s)));
        }
        pair = std::max(pair, std::abs(excitation_energy({ExcitationKind::type_two, a, {}}) - 3.0 * hole_pair_delta(a)));
    }
    o.require(quad < 1e-6, "quadrature dispersions");
    o.require(pair < 1e-10, "de2 = 3 Delta pair");
    o.detail << "de1(0) " << e1 << ", de2(0) " << e2 << ", quadrature " << quad << ", hole pair " << pair;
}

void sum_rules(Outcome& o) {
    const int n = 8;
    const double g = ground_profile(n, 0.0).total_integral();
    const std::vector<ExcitationSpec> one{{ExcitationKind::type_one, 0.4, {}}};
    const std::vector<ExcitationSpec> two{{ExcitationKind::type_two, -0.3, {}}};
    const double f1 = excited_profile(one, n, 0.0).total_integral();
    const double f2 = excited_profile(two, n, 0.0).total_integral();
    o.require(std::abs(g - 7.0 / 8.0) < 1e-6, "ground filling");
    o.require(std::abs(f1 - 6.0 / 8.0) < 1e-6, "type-I filling");
    o.require(std::abs(f2 - 5.0 / 8.0) < 1e-6, "type-II filling");
    o.detail << "ground " << g << ", type-I " << f1 << ", type-II " << f2;
}

void scattering(Outcome& o) {
    const auto g = grid(-2.0, 2.0, 10);
    double unit = 0.0, diag = 0.0, swap = 0.0, same = 0.0;
    for (auto proc : {Process::I_I, Process::II_II, Process::I_II}) {
        for (double a : g) {
            diag = std::max(diag, std::abs(smatrix(proc, a, a).value - 1.0));
            for (double b : g) {
                const cplx s = smatrix(proc, a, b).value;
                unit = std::max(unit, std::abs(std::abs(s) - 1.0));
                swap = std::max(swap, std::abs(s * smatrix(proc, b, a).value - 1.0));
                if (proc == Process::I_I) same = std::max(same, std::abs(s - smatrix(Process::II_II, a, b).value));
            }
        }
    }
    const double gap = std::abs(smatrix(Process::I_II, 1.0, 0.0).value - smatrix(Process::I_I, 1.0, 0.0).value);
    o.require(unit < 1e-12, "unimodular");
    o.require(diag < 1e-12, "S(a,a)=1");
    o.require(swap < 1e-12, "swap inverse");
    o.require(same < 1e-12, "S1 = S2");
    o.require(gap > 1e-2, "S3 differs from S1");
    o.detail << "| |S|-1 | " << unit << ", S(a,a) " << diag << ", swap " << swap << ", S1-S2 " << same
             << ", |S3-S1| " << gap;
}

void solver_properties(Outcome& o) {
    const auto p = ModelParams::homogeneous(6);
    const auto rows = load_table1();
    // fixed point
    bool fixed = true;
    for (const auto& row : rows) {
        const auto r = solve_newton(table_set(row), p);
        const auto again = solve_newton(r.roots, p);
        fixed = fixed && r.ok() && again.ok() && again.iterations == 0;
    }
    o.require(fixed, "fixed point");
    // quadratic convergence from a two-decimal seed of the ground state
    auto seed = table_set(rows[0]).shifted();
    for (auto& l : seed) l = {std::round(l.real() * 100.0) / 100.0, std::round(l.imag() * 100.0) / 100.0};
    const auto r = solve_newton(ZeroPointSet::from_shifted(seed), p);
    int quadratic = 0, linear = 0;
    for (std::size_t k = 0; k + 1 < r.residual_history.size(); ++k) {
        const double a = r.residual_history[k], b = r.residual_history[k + 1];
        if (a > 1e-2 || b < 1e-14) continue;
        (b <= 10.0 * a * a ? quadratic : linear)++;
    }
    o.require(r.ok() && quadratic >= 1 && linear == 0, "quadratic convergence");
    // classification
    int consistent = 0, ground = 0, type1 = 0, type2 = 0;
    for (const auto& row : rows) {
        int real = 0, half = 0, str = 0;
        for (const auto& l : row.lambdas) {
            const double im = std::abs(l.imag());
            if (im == 0.0) ++real;
            else if (std::abs(im - 1.5708) < 1e-9) ++half;
            else ++str;
        }
        const auto pat = classify_roots(solve_newton(table_set(row), p).roots, eta_third, 0.1);
        consistent += pat.real == real && pat.half_line == half && 2 * pat.strings == str && pat.other == 0;
        const auto name = pat.name();
        ground += name == "ground-like";
        type1 += name == "type-I";
        type2 += name == "type-II";
    }
    o.require(consistent == 32, "every level classified as printed");
    o.require(classify_roots(table_set(rows[0])).name() == "ground-like", "level 1 ground");
    o.detail << "fixed point " << (fixed ? "yes" : "no") << ", quadratic steps " << quadratic << ", classified "
             << consistent << "/32 (ground " << ground << ", type-I " << type1 << ", type-II " << type2 << ")";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "six-site reference table", table1},
        {2, "N=6 ground and top levels", ground_level},
        {3, "functional identities on random inhomogeneous chains", identities},
        {4, "transfer-matrix properties", transfer},
        {5, "thermodynamic-limit ground energy", thermodynamic_limit},
        {6, "excitation energies", excitations},
        {7, "density sum rules", sum_rules},
        {8, "scattering matrices", scattering},
        {9, "solver and classification properties", solver_properties},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failed += !o.pass;
        std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
