#ifndef TFE_WKBJ_HPP
#define TFE_WKBJ_HPP

#include <complex>
#include <vector>

namespace tfe {

// Inner-region representation of the small-n maximal bundle:
//   f0(y) = y^{-(2/3)(N+2 alpha)} (k1 exp(a1 y^{4/3}) + k2 exp(a2 y^{4/3})).
struct WkbjInner {
  std::complex<double> a1;
  std::complex<double> a2;
  std::complex<double> k1;
  std::complex<double> k2;
  int N;
  double alpha;
};

// Evaluates f0 with an optional log-space offset (the returned value is
// f0 exp(-log_offset), so large exponents stay representable).
std::complex<double> inner_eval(const WkbjInner& inner, double y,
                                double log_offset = 0.0);

// ln of the envelope magnitude c0 y^{4/3} - (2/3)(N+2 alpha) ln y.
double inner_log_envelope(int N, double alpha, double y);

// Residuals of the phase/amplitude equations on the closed forms
// phase = a y^{4/3}, A = k y^{-(2/3)(N+2 alpha)}:
//   eikonal_consistent: (phase')^3 + y/4      (zero for the focusing roots)
//   eikonal_printed:    (phase')^3 - y/4      (the sign-flipped variant, kept
//                                              for comparison; off by -y/2)
//   transport:          3 y A' + 2(N+2 alpha-1-12 (phase')^2 phase'') A
struct InnerCheck {
  std::complex<double> eikonal_consistent;
  std::complex<double> eikonal_printed;
  std::complex<double> transport;
};
InnerCheck wkbj_amplitude_ode_check(std::complex<double> a, int N, double alpha,
                                    double y, double k = 1.0);

// Outer-region phase b(Y) = a (3/c0) ln(1 + (c0/3) Y^{4/3}); reduces to
// a Y^{4/3} as Y -> 0, matching the inner phase.
std::complex<double> outer_b(double Y, std::complex<double> a, double c0);

// |e^b| (b')^3 + Y/4, identically zero for the conjugate-pair roots.
double outer_eikonal_residual(double Y, std::complex<double> a, double c0);

// ln|B|(Y) = (|k| - (2/3)(N+2a) ln Y - (c0/12)(2N+3a-4) Y^{4/3}) / (1+(c0/3)Y^{4/3})
double outer_amplitude(double Y, int N, double alpha, double k_const, double c0);

// Real part of the outer transport relation evaluated on the closed forms:
//   3 L' + Re[(1 - alpha/4 + L) b'] + 6 Re[b''/b'] + 2((N-1)+2 alpha)/Y.
double outer_transport_residual(double Y, int N, double alpha, double k_const,
                                double c0);

// Outer coordinate convention.  The breakdown criterion ln|f0| = O(1/n) fixes
// Y = n^{3/4} y (the default); the sign-flipped exponent variant is kept for
// comparison.
enum class OuterScaling { n_three_quarters, inverse };

double outer_coordinate(double y, double n, OuterScaling scaling);

struct MatchSample {
  double y;
  double Y;
  double inner_log_amp;
  double outer_log_amp;
  double inner_phase;
  double outer_phase;
};

struct MatchReport {
  double n;
  int N;
  double alpha;
  double amp_mismatch;    // mean |inner - outer| log-amplitude over the band
  double phase_mismatch;  // mean |inner - outer| phase over the band
  OuterScaling scaling;
  std::vector<MatchSample> band;
};

// Compares the inner and outer representations over the overlap band
// Y in [0.25, 0.75]; the mismatch must shrink as n decreases.
MatchReport match_inner_outer(double n, int N, double alpha,
                              OuterScaling scaling = OuterScaling::n_three_quarters,
                              int band_points = 33);

}  // namespace tfe

#endif
