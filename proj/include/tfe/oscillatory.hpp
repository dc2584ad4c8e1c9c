#ifndef TFE_OSCILLATORY_HPP
#define TFE_OSCILLATORY_HPP

#include <array>
#include <vector>

#include "tfe/similarity.hpp"

namespace tfe {

// Parameters of the oscillatory component phi(s) of maximal solutions,
// f(y) = y^mu phi(ln y) with mu = 4/n.
struct OscParams {
  double n;
  int N;
  double alpha;
  double mu;  // 4/n exactly
};

OscParams derive_osc_params(double n, int N, double alpha);

// phi and its first three s-derivatives.
struct OscState {
  double s;
  double phi;
  double dphi;
  double d2phi;
  double d3phi;
};

// Coefficient polynomials of the fourth-order phi equation, as functions of mu
// and N.  c* multiply the non-mobility blocks, b* the bracket multiplied by
// n (dphi/phi + mu).
struct PhiCoeffs {
  double c3, c2, c1, c0;
  double b2, b1, b0;
};
PhiCoeffs phi_coefficients(double mu, int N);

// Full left-hand side of the phi equation evaluated on arbitrary derivative
// data (zero exactly on solutions).
double phi_equation_residual(const OscParams& p, double phi, double dphi,
                             double d2phi, double d3phi, double d4phi);

// d/ds of the state; requires |phi| above the sign-change floor, else throws
// Error(phi_floor).
OscState phi_rhs(const OscParams& p, const OscState& st, double phi_floor = 1e-12);

// Sign-preserving log display transform: ln(phi)+1 above 1, identity on
// [-1, 1], -ln(-phi)-1 below -1.  Continuous, odd, strictly increasing.
double transform_phi(double phi);
// Same, from sign and ln|phi| (for amplitudes outside double range).
double transform_phi_log(int sign, double log_abs_phi);

struct OscSample {
  double s;
  double phi;           // 0 when it underflows; see log_abs_phi
  double tphi;          // transform_phi(phi), computed from the log form
  double psi;           // internally scaled amplitude, O(1) on the orbit
  double log_abs_phi;   // ln|phi|, valid whenever sign != 0
  int sign;             // sign of phi (0 only for exact zero)
};

struct OscOrbit {
  std::vector<OscSample> samples;
  std::vector<double> sign_changes;  // s locations of phi sign flips
  double log_amp_offset;             // ln(phi/psi) internal amplitude scale
  OscParams params;
};

struct OscIntegrateOptions {
  double s_end = 0.0;        // 0 -> auto: ~30 oscillation periods
  int n_samples = 4000;
  double rel_tol = 1e-10;
  double abs_tol = 1e-60;    // near-pure relative control for decaying orbits
  double phi_floor = 1e-12;  // sign-change event floor (scaled units)
  std::array<double, 4> initial{1.0, 0.0, 0.0, 0.0};  // in scaled units
};

// Integrates the phi equation in an internally amplitude-scaled variable
// (exact transformation; the natural orbit amplitude (4 mu^3)^{-1/n}
// underflows for small n).  Sign changes are handled in event-crossing mode:
// the singular 1/phi and |phi|^{-n} factors are evaluated through the floor
// mollification phi/(phi^2+eps^2) and (phi^2+eps^2)^{-n/2}, and each crossing
// is logged.
OscOrbit integrate_oscillatory(const OscParams& p,
                               const OscIntegrateOptions& opts = {});

// Coordinate/amplitude rescaling phi = mu^{-3/n} phihat(s mu), performed in
// log-amplitude space since mu^{3/n} overflows for small n.
struct RescaledSample {
  double s_hat;
  double phi_hat;       // may overflow to inf; log form is authoritative
  double log_abs_phi_hat;
  int sign;
};
std::vector<RescaledSample> rescale_small_n(const std::vector<OscSample>& series,
                                            double mu);
std::vector<OscSample> invert_rescale(const std::vector<RescaledSample>& series,
                                      double mu);

// Left-hand side of the rescaled limit equation
//   phihat'''' + 4 phihat''' + 6 phihat'' + 4 phihat' + phihat
//     + (1/4)(phihat' + phihat)|phihat|^{-n} = 0,
// which is linear at n = 0.
double phihat_equation_residual(double n, double phi, double dphi, double d2phi,
                                double d3phi, double d4phi);
std::array<double, 4> phihat_rhs(double n, double s,
                                 const std::array<double, 4>& state,
                                 double phi_floor = 1e-12);

// Integrates the rescaled equation from the given state.
struct PhihatOrbit {
  std::vector<double> s;
  std::vector<double> phi;
};
PhihatOrbit integrate_phihat(double n, double s_end, int n_samples = 4000,
                             const std::array<double, 4>& initial = {1, 0, 0, 0},
                             double rel_tol = 1e-10, double phi_floor = 1e-12);

// Log-slope of the oscillation envelope over [s_from, s_to], fitted through
// the local maxima of |x|.
double envelope_log_slope(const std::vector<double>& s,
                          const std::vector<double>& x, double s_from,
                          double s_to);

enum class PeriodicityOutcome { periodic, lost, undetermined };

struct PeriodicityReport {
  PeriodicityOutcome outcome = PeriodicityOutcome::undetermined;
  double period = 0.0;      // in the series coordinate
  double confidence = 0.0;  // shift-match score in [0, 1]
};

// Autocorrelation period estimate on a uniformly sampled series.  Requires
// enough data for at least five putative periods; "lost" and "undetermined"
// are valid outcomes, never errors.
PeriodicityReport detect_periodicity(const std::vector<double>& s,
                                     const std::vector<double>& values,
                                     double periodic_confidence = 0.9,
                                     double lost_confidence = 0.5);

}  // namespace tfe

#endif
