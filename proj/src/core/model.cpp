#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "twistxxz/error.hpp"
#include "twistxxz/types.hpp"

namespace twistxxz {

ModelParams ModelParams::homogeneous(int n_sites, cplx eta) {
    ModelParams p;
    p.n_sites = n_sites;
    p.eta = eta;
    p.thetas.assign(static_cast<std::size_t>(std::max(n_sites, 0)), cplx{0.0, 0.0});
    p.validate();
    return p;
}

ModelParams ModelParams::random_inhomogeneous(int n_sites, std::uint64_t seed, double spread,
                                              cplx eta) {
    ModelParams p = homogeneous(n_sites, eta);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-spread, spread);
    // Rejection keeps the identity points well separated.
    const double min_gap = spread / (8.0 * n_sites);
    for (std::size_t j = 0; j < p.thetas.size(); ++j) {
        double x = 0.0;
        bool ok = false;
        while (!ok) {
            x = dist(rng);
            ok = std::none_of(p.thetas.begin(), p.thetas.begin() + static_cast<std::ptrdiff_t>(j),
                              [&](cplx t) { return std::abs(t.real() - x) < min_gap; });
        }
        p.thetas[j] = x;
    }
    return p;
}

void ModelParams::validate() const {
    if (n_sites < 2) {
        fail(ErrorKind::invalid_argument, "n_sites must be >= 2, got " + std::to_string(n_sites));
    }
    if (thetas.size() != static_cast<std::size_t>(n_sites)) {
        fail(ErrorKind::invalid_argument, "thetas must have exactly n_sites entries");
    }
    if (std::abs(std::sinh(eta)) < 1e-14) {
        fail(ErrorKind::degenerate_anisotropy, "sinh(eta) vanishes");
    }
}

bool ModelParams::is_homogeneous(double tol) const {
    return std::all_of(thetas.begin(), thetas.end(), [&](cplx t) { return std::abs(t) <= tol; });
}

bool ModelParams::thetas_distinct(double tol) const {
    for (std::size_t i = 0; i < thetas.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(thetas[i] - thetas[j]) <= tol) return false;
    return true;
}

}  // namespace twistxxz
