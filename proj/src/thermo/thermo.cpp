#include "twistxxz/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twistxxz/error.hpp"

namespace twistxxz {
namespace {

const cplx sinh_eta = std::sinh(eta_third);
const double sqrt3 = std::sqrt(3.0);
const double sqrt2 = std::sqrt(2.0);

cplx csch(cplx x) { return 1.0 / std::sinh(x); }
cplx sech(cplx x) { return 1.0 / std::cosh(x); }
double sech(double x) { return std::abs(x) > 700.0 ? 0.0 : 1.0 / std::cosh(x); }

// (3/4pi) sech(3x/2); integrates to 1/2.
double half_sech(double x) { return 3.0 / (4.0 * pi) * sech(1.5 * x); }

void check_size(int n) {
    if (n < 1) fail(ErrorKind::invalid_argument, "system size must be positive");
}

}  // namespace

double DensityProfile::smooth_integral() const {
    std::vector<double> br = features;
    return integrate_line(smooth, br).value;
}

double DensityProfile::total_integral() const {
    double s = smooth_integral();
    for (const auto& a : atoms) s += a.weight;
    return s;
}

cplx DensityProfile::integrate_against(const std::function<cplx(double)>& g) const {
    cplx s = integrate_line_complex([&](double x) { return g(x) * smooth(x); }, features);
    for (const auto& a : atoms) s += a.weight * g(a.position);
    return s;
}

double rho_infinite(double lambda) {
    if (std::abs(lambda) > 400.0) return 0.0;
    const cplx x{1.5 * lambda, 0.0};
    const cplx q{0.0, pi / 4.0};
    return (3.0 * I / (4.0 * pi) * (csch(x + q) - csch(x - q))).real();
}

double rho_ground(double lambda, double hole_pos, std::optional<int> n) {
    double r = rho_infinite(lambda);
    if (n) {
        check_size(*n);
        r -= (half_sech(lambda - hole_pos) + half_sech(lambda + hole_pos)) / (3.0 * *n);
    }
    return r;
}

DensityProfile ground_profile(std::optional<int> n, double hole_pos) {
    DensityProfile p;
    p.system_size = n;
    p.smooth = [hole_pos, n](double x) { return rho_ground(x, hole_pos, n); };
    p.features = {0.0};
    if (n) {
        check_size(*n);
        p.atoms = {{hole_pos, -1.0 / (3.0 * *n)}, {-hole_pos, -1.0 / (3.0 * *n)}};
        p.features.push_back(hole_pos);
        p.features.push_back(-hole_pos);
    }
    return p;
}

cplx hole_delta(double lambda) {
    const cplx x{1.5 * lambda, 0.0};
    const cplx q{0.0, pi / 4.0};
    return sqrt3 / 4.0 * (sech(x + q) + sech(x - q)) + sqrt3 / 2.0 * I * std::tanh(3.0 * lambda);
}

double hole_pair_delta(double lambda) {
    const cplx s = hole_delta(lambda) + hole_delta(-lambda);
    if (std::abs(s.imag()) > 1e-12) fail(ErrorKind::consistency, "hole contribution is not real");
    return s.real();
}

cplx bare_root_energy(cplx lambda) {
    const cplx x = lambda - I * (pi / 6.0);
    return 2.0 * sinh_eta * std::cosh(x) / std::sinh(x);
}

cplx profile_energy(const DensityProfile& p) {
    return p.integrate_against([](double x) { return bare_root_energy(x); });
}

GroundEnergyDensity ground_energy_density(double tol) {
    GroundEnergyDensity g;
    g.closed_form = (3.0 - 3.0 * sqrt3) / 2.0;
    const cplx e = profile_energy(ground_profile(std::nullopt, 0.0)) + std::cosh(eta_third);
    g.quadrature = e.real();
    if (!(std::abs(g.quadrature - g.closed_form) <= tol) || std::abs(e.imag()) > tol) {
        std::ostringstream os;
        os << "ground energy quadrature " << g.quadrature << " disagrees with " << g.closed_form;
        fail(ErrorKind::consistency, os.str());
    }
    return g;
}

void ExcitationSpec::validate() const {
    if (!std::isfinite(alpha) || (hole && !std::isfinite(*hole)))
        fail(ErrorKind::invalid_argument, "excitation rapidities must be finite");
    if (kind == ExcitationKind::type_one && hole)
        fail(ErrorKind::invalid_argument, "type-I excitations carry no hole");
}

double excitation_energy(const ExcitationSpec& s) {
    s.validate();
    if (s.kind == ExcitationKind::type_one) return 1.5 * sqrt3 * sech(1.5 * s.alpha);
    if (std::abs(s.alpha) > 200.0) return 0.0;
    return 3.0 * sqrt3 * sqrt2 * std::cosh(1.5 * s.alpha) / std::cosh(3.0 * s.alpha);
}

double delta_rho(const ExcitationSpec& s, double lambda, int n) {
    s.validate();
    check_size(n);
    if (s.kind == ExcitationKind::type_one) return -rho_infinite(lambda - s.alpha) / n;
    return -(half_sech(lambda - s.alpha) + half_sech(lambda - s.hole_position())) / n;
}

DensityProfile delta_rho_profile(const ExcitationSpec& s, int n) {
    s.validate();
    check_size(n);
    DensityProfile p;
    p.system_size = n;
    p.smooth = [s, n](double x) { return delta_rho(s, x, n); };
    p.features = {s.alpha};
    if (s.kind == ExcitationKind::type_two) {
        p.atoms = {{s.hole_position(), -1.0 / n}};
        p.features.push_back(s.hole_position());
    }
    return p;
}

DensityProfile excited_profile(std::span<const ExcitationSpec> specs, int n, double hole_pos) {
    DensityProfile p = ground_profile(n, hole_pos);
    std::vector<DensityProfile> parts;
    for (const auto& s : specs) {
        auto d = delta_rho_profile(s, n);
        p.atoms.insert(p.atoms.end(), d.atoms.begin(), d.atoms.end());
        p.features.insert(p.features.end(), d.features.begin(), d.features.end());
        parts.push_back(std::move(d));
    }
    auto base = p.smooth;
    p.smooth = [base, parts](double x) {
        double v = base(x);
        for (const auto& d : parts) v += d.smooth(x);
        return v;
    };
    return p;
}

double excitation_energy_quadrature(const ExcitationSpec& s) {
    s.validate();
    cplx e = profile_energy(delta_rho_profile(s, 1));
    if (s.kind == ExcitationKind::type_one) {
        e += bare_root_energy({s.alpha, -pi / 2.0});
    } else {
        e += bare_root_energy({s.alpha, pi / 3.0}) + bare_root_energy({s.alpha, -pi / 3.0});
    }
    return e.real();
}

const char* to_string(Process p) noexcept {
    switch (p) {
        case Process::I_I: return "I_I";
        case Process::II_II: return "II_II";
        case Process::I_II: return "I_II";
    }
    return "unknown";
}

std::optional<Process> parse_process(const std::string& s) {
    if (s == "I_I") return Process::I_I;
    if (s == "II_II") return Process::II_II;
    if (s == "I_II") return Process::I_II;
    return std::nullopt;
}

ScatteringAmplitude smatrix(Process process, double a1, double a2) {
    if (!std::isfinite(a1) || !std::isfinite(a2)) fail(ErrorKind::invalid_argument, "rapidities must be finite");
    ScatteringAmplitude s{process, a1, a2, {}};
    if (process == Process::I_II) {
        const double x = sqrt2 * std::sinh(1.5 * (a2 - a1));
        s.value = -(x - I) / (x + I);
    } else {
        const double x = std::sinh(1.5 * (a1 - a2));
        s.value = -(x - I) / (x + I);
    }
    return s;
}

cplx smatrix_quadrature(Process process, double a1, double a2) {
    double phase = 0.0;
    switch (process) {
        case Process::I_I: {
            const double x = a1 - a2;
            const double br[] = {x};
            phase = integrate_line([x](double m) { return theta_m(x - m, 1) * rho_infinite(m); }, br).value +
                    theta_m(x, 2);
            break;
        }
        case Process::II_II: {
            const double x = a1 - a2;
            const double br[] = {x};
            phase = -2.0 * integrate_line([x](double m) { return theta_m(x - m, 4) * half_sech(m); }, br).value -
                    theta_m(x, 4) + theta_m(x, 2);
            break;
        }
        case Process::I_II: {
            const double y = a2 - a1;
            const double br[] = {y};
            phase = -integrate_line([y](double m) { return theta_m(y - m, 4) * rho_infinite(m); }, br).value +
                    theta_m(y, 1);
            break;
        }
    }
    return std::exp(I * phase);
}

double DensityGrid::sup_distance(const std::function<double(double)>& f) const {
    double m = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) m = std::max(m, std::abs(values[i] - f(lambda[i])));
    return m;
}

DensityGrid solve_density_equation(const std::function<double(double)>& driving, double half_width, int points,
                                   double tol, int max_iter) {
    if (points < 3 || !(half_width > 0.0)) fail(ErrorKind::invalid_argument, "grid needs >= 3 points and L > 0");
    const std::size_t p = static_cast<std::size_t>(points);
    const double h = 2.0 * half_width / (points - 1);
    DensityGrid g;
    g.lambda.resize(p);
    std::vector<double> f(p);
    for (std::size_t i = 0; i < p; ++i) {
        g.lambda[i] = -half_width + h * i;
        f[i] = driving(g.lambda[i]);
    }
    // Toeplitz kernel a_2((i - j) h) times trapezoid weights.
    std::vector<double> k(2 * p - 1);
    for (std::size_t d = 0; d < 2 * p - 1; ++d) k[d] = a_m((static_cast<double>(d) - (p - 1.0)) * h, 2) * h;
    g.values = f;
    std::vector<double> next(p), wrho(p);
    for (g.iterations = 1; g.iterations <= max_iter; ++g.iterations) {
        for (std::size_t j = 0; j < p; ++j) wrho[j] = g.values[j] * ((j == 0 || j == p - 1) ? 0.5 : 1.0);
        double change = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double* row = k.data() + (p - 1 + i);
            double s = 0.0;
            for (std::size_t j = 0; j < p; ++j) s += *(row - j) * wrho[j];
            next[i] = f[i] + s;
            change = std::max(change, std::abs(next[i] - g.values[i]));
        }
        g.values.swap(next);
        if (change < tol) return g;
    }
    fail(ErrorKind::consistency, "integral equation iteration did not converge");
}

}  // namespace twistxxz
