#include "twistxxz/kernels.hpp"

#include <cmath>
#include <complex>

#include "twistxxz/error.hpp"
#include "twistxxz/types.hpp"

namespace twistxxz {
namespace {

void check_order(int m) {
    if (m != 1 && m != 2 && m != 4) fail(ErrorKind::invalid_argument, "kernel order must be 1, 2 or 4");
}

}  // namespace

double theta_m(double lambda, int m) {
    check_order(m);
    // |theta_m| < pi on the real line, so the principal branch is the continuous one.
    if (std::abs(lambda) > 30.0) return 2.0 * std::atan(std::tanh(lambda) / std::tan(m * pi / 6.0));
    const cplx a{0.0, m * pi / 6.0};
    return (-I * std::log(std::sinh(a - lambda) / std::sinh(a + lambda))).real();
}

double a_m(double lambda, int m) {
    check_order(m);
    const double g = m * pi / 3.0;
    return std::sin(g) / (pi * (std::cosh(2.0 * lambda) - std::cos(g)));
}

double a_m_fourier(double w, int m) {
    check_order(m);
    const double delta = m / 6.0;
    if (std::abs(w) < 1e-8) return 1.0 - 2.0 * delta;
    return std::sinh(pi * w / 2.0 - delta * pi * w) / std::sinh(pi * w / 2.0);
}

}  // namespace twistxxz
