#pragma once

namespace twistxxz {

/// Branch of -i ln[sinh(i m pi/6 - x) / sinh(i m pi/6 + x)] continuous on the
/// real line with theta_m(0) = 0. Valid for m in {1, 2, 4}.
double theta_m(double lambda, int m);

/// (1/2pi) d theta_m / d lambda = (1/pi) sin(m gamma) / (cosh 2 lambda - cos m gamma), gamma = pi/3.
double a_m(double lambda, int m);

/// Fourier transform of a_m: sinh(pi w/2 - delta_m pi w) / sinh(pi w/2), delta_m = m gamma / 2pi.
double a_m_fourier(double w, int m);

}  // namespace twistxxz
