#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twistxxz/thermo.hpp"

namespace twistxxz {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks, double tol) {
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    QuadratureResult r;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] <= 0.0) continue;
        double err = 0.0;
        r.value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 15, tol, &err);
        r.error += err;
    }
    return r;
}

QuadratureResult integrate_line(const std::function<double(double)>& f, std::span<const double> breaks,
                                double half_width) {
    std::vector<double> pts(breaks.begin(), breaks.end());
    pts.push_back(0.0);
    auto r = integrate(f, -half_width, half_width, pts);
    r.error += (std::abs(f(half_width)) + std::abs(f(-half_width))) / 1.5;
    return r;
}

cplx integrate_line_complex(const std::function<cplx(double)>& f, std::span<const double> breaks) {
    const auto re = integrate_line([&](double x) { return f(x).real(); }, breaks);
    const auto im = integrate_line([&](double x) { return f(x).imag(); }, breaks);
    return {re.value, im.value};
}

}  // namespace twistxxz
