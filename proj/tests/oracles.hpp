#pragma once

// Independent reference computations for the test suites. Nothing here
// calls the convolution, crossing or calibration code it is used to check.

#include "ngd/amplifier.hpp"
#include "ngd/signal.hpp"

#include <complex>
#include <functional>

namespace ngd::oracle {

/// G'(t) in 80-bit long double arithmetic.
long double green_prime_extended(long double t, long double g0, long double gamma, long double omega_r);

/// Adaptive quadrature (GSL QAGS) of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

/// Adaptive quadrature of f over [a, inf).
double integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol = 1e-12);

/// -d arg H / dw from the symbolic derivative of the closed form H.
double group_delay_symbolic(double omega, const AmplifierParams& p);

/// Output of the amplifier computed in the frequency domain: FFT of the
/// zero-padded input, multiply by the closed-form H, inverse FFT.
SampledSignal spectral_output(const SampledSignal& v_in, const AmplifierParams& p);

/// Continuous Fourier transform of the cos^2 pulse with no carrier.
double pulse_spectrum(double omega, double tf);

/// RMS bandwidth of the cos^2 pulse from quadrature of its analytic power
/// spectrum over [0, omega_cut].
double pulse_rms_bandwidth(double tf, double omega_cut);

/// First time the no-carrier cos^2 pulse reaches level s (0 < s <= v0).
double pulse_first_reach(double s, double v0, double tf);

}  // namespace ngd::oracle
