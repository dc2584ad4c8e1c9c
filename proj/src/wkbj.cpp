#include "tfe/wkbj.hpp"

#include <cmath>
#include <stdexcept>

#include "tfe/linear_spectrum.hpp"

namespace tfe {

namespace {
constexpr double kFourThirds = 4.0 / 3.0;
}

std::complex<double> inner_eval(const WkbjInner& inner, double y,
                                double log_offset) {
  const double w = std::pow(y, kFourThirds);
  const double lg = -(2.0 / 3.0) * (inner.N + 2.0 * inner.alpha) * std::log(y) -
                    log_offset;
  // k exp(a w) evaluated as exp(Re(a) w + lg) * (cos, sin) to keep the
  // exponent in one place
  auto term = [&](std::complex<double> k, std::complex<double> a) {
    const double mag = std::exp(a.real() * w + lg);
    const double ph = a.imag() * w;
    return k * std::complex<double>(mag * std::cos(ph), mag * std::sin(ph));
  };
  return term(inner.k1, inner.a1) + term(inner.k2, inner.a2);
}

double inner_log_envelope(int N, double alpha, double y) {
  const double c0 = char_roots(Sign::focusing).c0;
  return c0 * std::pow(y, kFourThirds) -
         (2.0 / 3.0) * (N + 2.0 * alpha) * std::log(y);
}

InnerCheck wkbj_amplitude_ode_check(std::complex<double> a, int N, double alpha,
                                    double y, double k) {
  InnerCheck out;
  const std::complex<double> dphase = a * kFourThirds * std::pow(y, 1.0 / 3.0);
  const std::complex<double> d2phase =
      a * (kFourThirds / 3.0) * std::pow(y, -2.0 / 3.0);
  out.eikonal_consistent = dphase * dphase * dphase + 0.25 * y;
  out.eikonal_printed = dphase * dphase * dphase - 0.25 * y;
  const double p = (2.0 / 3.0) * (N + 2.0 * alpha);
  const double A = k * std::pow(y, -p);
  const double dA = -p * A / y;
  out.transport =
      3.0 * y * dA + 2.0 * (N + 2.0 * alpha - 1.0 - 12.0 * dphase * dphase * d2phase) * A;
  return out;
}

std::complex<double> outer_b(double Y, std::complex<double> a, double c0) {
  if (!(Y > 0.0)) throw std::invalid_argument("outer coordinate Y must be positive");
  return a * (3.0 / c0) * std::log(1.0 + (c0 / 3.0) * std::pow(Y, kFourThirds));
}

double outer_eikonal_residual(double Y, std::complex<double> a, double c0) {
  const double Q = (c0 / 3.0) * std::pow(Y, kFourThirds);
  const std::complex<double> db =
      a * kFourThirds * std::pow(Y, 1.0 / 3.0) / (1.0 + Q);
  const double abs_eb = std::exp(outer_b(Y, a, c0).real());
  const std::complex<double> r = abs_eb * db * db * db + 0.25 * Y;
  // the cube of any characteristic root is real, so the residual is real
  return r.real();
}

double outer_amplitude(double Y, int N, double alpha, double k_const, double c0) {
  if (!(Y > 0.0)) throw std::invalid_argument("outer coordinate Y must be positive");
  const double Q = (c0 / 3.0) * std::pow(Y, kFourThirds);
  return (k_const - (2.0 / 3.0) * (N + 2.0 * alpha) * std::log(Y) -
          (c0 / 12.0) * (2.0 * N + 3.0 * alpha - 4.0) * std::pow(Y, kFourThirds)) /
         (1.0 + Q);
}

double outer_transport_residual(double Y, int N, double alpha, double k_const,
                                double c0) {
  const std::complex<double> a = char_roots(Sign::focusing).a1;
  const double Q = (c0 / 3.0) * std::pow(Y, kFourThirds);
  const double dQ = c0 * (4.0 / 9.0) * std::pow(Y, 1.0 / 3.0);

  // L = T / (1+Q) with T the bracket of outer_amplitude
  const double T = k_const - (2.0 / 3.0) * (N + 2.0 * alpha) * std::log(Y) -
                   (c0 / 12.0) * (2.0 * N + 3.0 * alpha - 4.0) *
                       std::pow(Y, kFourThirds);
  const double dT = -(2.0 / 3.0) * (N + 2.0 * alpha) / Y -
                    (c0 / 12.0) * (2.0 * N + 3.0 * alpha - 4.0) * kFourThirds *
                        std::pow(Y, 1.0 / 3.0);
  const double L = T / (1.0 + Q);
  const double dL = (dT * (1.0 + Q) - T * dQ) / ((1.0 + Q) * (1.0 + Q));

  const std::complex<double> db = a * kFourThirds * std::pow(Y, 1.0 / 3.0) / (1.0 + Q);
  // b''/b' = d/dY ln b' = 1/(3Y) - Q'/(1+Q)
  const double re_db2_over_db = 1.0 / (3.0 * Y) - dQ / (1.0 + Q);

  return 3.0 * dL + ((1.0 - alpha / 4.0 + L) * db).real() +
         6.0 * re_db2_over_db + 2.0 * ((N - 1.0) + 2.0 * alpha) / Y;
}

double outer_coordinate(double y, double n, OuterScaling scaling) {
  return scaling == OuterScaling::n_three_quarters ? std::pow(n, 0.75) * y
                                                   : std::pow(n, -0.75) * y;
}

MatchReport match_inner_outer(double n, int N, double alpha, OuterScaling scaling,
                              int band_points) {
  if (!(n > 0.0) || n > 0.05)
    throw std::invalid_argument("inner/outer matching is a small-n construction "
                                "(n in (0, 0.05])");
  const CharRoots cr = char_roots(Sign::focusing);
  MatchReport rep;
  rep.n = n;
  rep.N = N;
  rep.alpha = alpha;
  rep.scaling = scaling;

  // the lnY vs lny offset is a constant absorbed into the matching constant
  const double k_const = 0.5 * (N + 2.0 * alpha) * std::log(n);

  const double scale = scaling == OuterScaling::n_three_quarters
                           ? std::pow(n, -0.75)
                           : std::pow(n, 0.75);
  double amp = 0.0, phase = 0.0;
  for (int i = 0; i < band_points; ++i) {
    const double Y = 0.25 + 0.5 * double(i) / double(band_points - 1);
    const double y = Y * scale;
    MatchSample ms;
    ms.y = y;
    ms.Y = Y;
    ms.inner_log_amp = inner_log_envelope(N, alpha, y);
    ms.inner_phase = cr.c1 * std::pow(y, kFourThirds);
    const std::complex<double> b = outer_b(Y, cr.a1, cr.c0);
    ms.outer_log_amp = b.real() / n + outer_amplitude(Y, N, alpha, k_const, cr.c0);
    ms.outer_phase = b.imag() / n;
    amp += std::abs(ms.inner_log_amp - ms.outer_log_amp);
    phase += std::abs(ms.inner_phase - ms.outer_phase);
    rep.band.push_back(ms);
  }
  rep.amp_mismatch = amp / band_points;
  rep.phase_mismatch = phase / band_points;
  return rep;
}

}  // namespace tfe
