#include <algorithm>
#include <cmath>
#include <functional>

#include "twistxxz/bae.hpp"
#include "twistxxz/error.hpp"

namespace twistxxz {
namespace {

std::vector<double> admissible(bool integers, double bound) {
    std::vector<double> out;
    const double start = integers ? 0.0 : 0.5;
    for (double q = start; q < bound; q += 1.0) {
        out.push_back(q);
        if (q != 0.0) out.push_back(-q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void for_each_subset(const std::vector<double>& pool, std::size_t k,
                     const std::function<void(const std::vector<double>&)>& fn) {
    std::vector<double> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            fn(cur);
            return;
        }
        for (std::size_t i = start; i + (k - cur.size()) <= pool.size(); ++i) {
            cur.push_back(pool[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

std::vector<ScanSolution> scan_quantum_numbers(const ModelParams& params, const SolverConfig& cfg,
                                               const ScanOptions& opts) {
    params.validate();
    cfg.validate();
    const int n = params.n_sites;
    const int m = n - 1;
    const double bound = n / 2.0 + opts.window;
    std::vector<ScanSolution> found;

    for (int s = 0; 2 * s <= m; ++s) {
        if (opts.max_strings >= 0 && s > opts.max_strings) break;
        for (int h = 0; h + 2 * s <= m; ++h) {
            if (opts.max_half_line >= 0 && h > opts.max_half_line) break;
            const int r = m - h - 2 * s;
            const auto pool_r = admissible(bulk_numbers_are_integers(n, r, s), bound);
            const auto pool_h = admissible(half_line_numbers_are_integers(h), bound);
            const auto pool_s = admissible(string_numbers_are_integers(r, s), bound);
            for_each_subset(pool_r, r, [&](const std::vector<double>& qr) {
                for_each_subset(pool_h, h, [&](const std::vector<double>& qh) {
                    for_each_subset(pool_s, s, [&](const std::vector<double>& qs) {
                        QuantumNumbers qn{qr, qh, qs};
                        const auto res = solve_quantum_numbers(qn, params, cfg);
                        if (!res.ok()) return;
                        for (const auto& l : res.roots.shifted(params.eta))
                            if (std::abs(l.real()) > opts.max_rapidity) return;
                        const cplx e = complex_energy_from_zeros(res.roots, params);
                        if (!(std::abs(e.imag()) < 1e-8) || !std::isfinite(e.real())) return;
                        for (const auto& f : found)
                            if (same_roots(f.roots, res.roots, 1e-6, params.eta)) return;
                        found.push_back({qn, res.roots, e.real(), classify_roots(res.roots, params.eta)});
                    });
                });
            });
        }
    }
    std::sort(found.begin(), found.end(),
              [](const ScanSolution& a, const ScanSolution& b) { return a.energy < b.energy; });
    return found;
}

}  // namespace twistxxz
