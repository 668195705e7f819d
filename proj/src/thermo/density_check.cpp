#include <algorithm>
#include <cmath>

#include "twistxxz/error.hpp"
#include "twistxxz/thermo.hpp"

namespace twistxxz {

std::vector<double> real_rapidities(const ZeroPointSet& zeros, cplx eta) {
    std::vector<double> out;
    for (const auto& l : zeros.shifted(eta)) {
        const cplx c = canonical_root(l);
        if (std::abs(c.imag()) > 1e-8) fail(ErrorKind::precondition, "density check needs real roots");
        out.push_back(c.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

DensityCheckReport finite_size_density_check(std::span<const ZeroPointSet> sets, const DensityProfile& profile,
                                             double window, cplx eta) {
    if (!profile.smooth) fail(ErrorKind::invalid_argument, "profile has no smooth part");
    DensityCheckReport rep;
    for (const auto& s : sets) {
        std::vector<double> lam;
        for (const auto& l : s.shifted(eta)) {
            const cplx c = canonical_root(l);
            if (std::abs(c.imag()) > 1e-8) fail(ErrorKind::precondition, "density check needs real roots");
            lam.push_back(c.real());
        }
        if (!std::is_sorted(lam.begin(), lam.end())) fail(ErrorKind::precondition, "roots must be sorted");
        for (std::size_t j = 0; j + 1 < lam.size(); ++j)
            if (!(lam[j + 1] > lam[j])) fail(ErrorKind::precondition, "roots must be distinct");
        const int n = static_cast<int>(s.size()) + 1;
        DensityCheckEntry e;
        e.n_sites = n;
        e.filling = static_cast<double>(lam.size()) / n;
        for (std::size_t j = 0; j + 1 < lam.size(); ++j) {
            const double mid = 0.5 * (lam[j] + lam[j + 1]);
            if (std::abs(mid) > window) continue;
            const double emp = 1.0 / (n * (lam[j + 1] - lam[j]));
            e.max_deviation = std::max(e.max_deviation, std::abs(emp - profile.smooth(mid)));
            ++e.samples;
        }
        if (!rep.entries.empty() && e.max_deviation > rep.entries.back().max_deviation) rep.nonincreasing = false;
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace twistxxz
