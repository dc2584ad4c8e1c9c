#ifndef TFE_LINEAR_SPECTRUM_HPP
#define TFE_LINEAR_SPECTRUM_HPP

#include <complex>
#include <string>
#include <vector>

#include "tfe/radial_ode.hpp"
#include "tfe/similarity.hpp"

namespace tfe {

// Characteristic roots of the far-field exponential bundle f ~ exp(a y^{4/3}):
// a^3 = -(1/4)(3/4)^3 for focusing, +(1/4)(3/4)^3 for defocusing.  a1, a2 are
// the conjugate pair; a3 the real root (negative for focusing).
struct CharRoots {
  std::complex<double> a1;
  std::complex<double> a2;
  double a3;
  double c0;     // Re a1
  double c1;     // Im a1 (> 0)
  double gamma;  // growth exponent 4/3
};

CharRoots char_roots(Sign sign);

// One point of the scaled far-field profile f(y) y^{(2/3)(N+2 alpha)}
// exp(-c0 y^{4/3}), which is bounded and converges to the pure oscillation
// C1 cos(c1 y^{4/3}) + C2 sin(c1 y^{4/3}).
struct ScaledSample {
  double y;
  double value;
};

// Applies the scaling pointwise to an n = 0 focusing trajectory, honouring the
// accumulated log-scale.
std::vector<ScaledSample> scaled_profile(const Trajectory& traj);

struct FitWindow {
  double lo = 250.0;
  double hi = 300.0;
};

struct FitResult {
  double C1 = 0.0;
  double C2 = 0.0;
  FitWindow window;
  double residual = 0.0;          // rms misfit over the window
  double alpha = 0.0;             // alpha at which the shot was taken
  double log_scale_applied = 0.0; // rescaling exponent folded back in
};

// Linear least squares of the scaled profile against
// {cos(c1 y^{4/3}), sin(c1 y^{4/3})} over the window.  Needs at least 50
// samples inside; throws Error(ill_conditioned_fit) when the window is too
// short to resolve one oscillation period.
FitResult fit_far_field(const std::vector<ScaledSample>& series, FitWindow window,
                        double alpha = 0.0, double log_scale_applied = 0.0);

struct LinearShotConfig {
  double y_start = 1e-3;
  FitWindow window;
  int window_samples = 512;
  double coarse_dy = 1.0;           // sampling density below the window
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  double rescale_threshold = 1e100;
  double alpha_max = 3.0;           // scan guard: constants grow rapidly with alpha
};

// Integrate one n = 0 shot and extract the far-field constants.
FitResult shoot_and_fit(int N, OriginKind kind, double alpha,
                        const LinearShotConfig& cfg = {});

struct ScanPoint {
  double alpha = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double residual = 0.0;
  bool ok = false;
  std::string error;
};

// One shot per grid point; points are independent.  scan_alpha runs the grid
// with OpenMP; scan_alpha_serial is the plain-loop reference used for testing
// and benchmarking.  Per-point failures become gaps (ok = false).
std::vector<ScanPoint> scan_alpha(int N, OriginKind kind,
                                  const std::vector<double>& grid,
                                  const LinearShotConfig& cfg = {});
std::vector<ScanPoint> scan_alpha_serial(int N, OriginKind kind,
                                         const std::vector<double>& grid,
                                         const LinearShotConfig& cfg = {});

struct EigenvalueHit {
  int k = 0;          // round(2 alpha)
  double alpha = 0.0; // accepted eigenvalue (midpoint of the paired zeros)
  double z1 = 0.0;    // refined zero of C1(alpha)
  double z2 = 0.0;    // refined zero of C2(alpha)
  bool coincident = false;
  double C1_mag = 0.0;  // |C1| at alpha
  double C2_mag = 0.0;
  OriginKind kind = OriginKind::sh1;
};

// Scans both origin kinds (odd branches from sh2, even from sh1), refines the
// zeros of C1 and C2 by safeguarded secant, and pairs them.  Zeros that do not
// coincide within coincide_tol are reported with coincident = false rather
// than dropped.
std::vector<EigenvalueHit> find_linear_eigenvalues(int N, int k_max,
                                                   const LinearShotConfig& cfg = {},
                                                   double coincide_tol = 1e-6,
                                                   double scan_step = 0.05);

// First k_max coincident eigenvalues from the hit list.
std::vector<double> coincident_eigenvalues(const std::vector<EigenvalueHit>& hits,
                                           int k_max);

// Closed-form eigen-polynomial at alpha = k/2: the quartic origin recurrence
// terminates exactly, so the profile is the polynomial sum c_m y^m.
struct EigenPolynomial {
  int k;
  std::vector<double> coeff;  // coeff[m] multiplies y^m (odd entries zero)
  double eval(double y) const;
  double derivative(double y) const;
};
EigenPolynomial eigenfunction_oracle(int k, int N);

// Two-parameter shooting for n = 0: Newton iteration on
// (C1, C2)(alpha, nu) = 0 where nu is the free origin value (f''(0) for sh1
// starts, f(0) for sh2 starts).
struct TwoParamResult {
  double alpha = 0.0;
  double nu = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  int iterations = 0;
  bool converged = false;
};
TwoParamResult solve_c1c2_system(int N, OriginKind kind, double alpha0, double nu0,
                                 const LinearShotConfig& cfg = {});

}  // namespace tfe

#endif
