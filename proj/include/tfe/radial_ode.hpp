#ifndef TFE_RADIAL_ODE_HPP
#define TFE_RADIAL_ODE_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfe/similarity.hpp"

namespace tfe {

// First-order flux formulation of the fourth-order radial profile equation.
// The conserved flux g = y^{N-1} m(f) (Delta_y f)' is integrated directly, so
// the y^{N-1} origin factor and the mobility m(f) = (f^2 + delta^2)^{n/2}
// never have to be differentiated.
struct RadialState {
  double y;     // radial similarity coordinate, > 0
  double f;     // profile value
  double df;    // f'
  double lap;   // radial Laplacian w = f'' + (N-1) f'/y
  double flux;  // g = y^{N-1} m(f) w'
};

struct RadialDerivs {
  double df;     // f'
  double ddf;    // f''  = lap - (N-1) df / y
  double dlap;   // w'   = flux / (y^{N-1} m(f))
  double dflux;  // g'   = +- y^{N-1} (alpha f - beta y f')
};

// Right-hand side of the flux system. Throws Error(singular_mobility) when
// y^{N-1} m(f) underflows.
RadialDerivs rhs(const SimilarityParams& p, const RadialState& s,
                 double mobility_floor);

enum class OriginKind { sh1, sh2 };

std::string to_string(OriginKind k);

// Regular origin expansion f = c0 + c2 y^2 + c4 y^4 + c6 y^6 (odd powers vanish
// by symmetry).  sh1 normalises f(0)=1, f''(0)=0; sh2 normalises f(0)=0,
// f''(0)=1.
struct OriginStart {
  OriginKind kind;
  double f0;                     // f(0)
  double f2;                     // f''(0)
  std::array<double, 4> series;  // c0, c2, c4, c6
  double y_start;

  // Series and exact flux integral evaluated at y_start.
  RadialState state(const SimilarityParams& p) const;
};

// Coefficients follow the quartic recurrence
//   c_{m+4} (m+4)(m+2)(m+N+2)(m+N) m0 = s (alpha - m beta) c_m,
// with s = +1 focusing / -1 defocusing and m0 the mobility frozen at the
// origin value (identically 1 for n = 0).  For n > 0 with an sh2 start the
// mobility degenerates at y = 0; that case requires mobility_floor > 0 and
// otherwise throws Error(degenerate_origin).
OriginStart origin_series(const SimilarityParams& p, OriginKind kind,
                          double mobility_floor, double y_start = 1e-3);

// Extended even coefficients c_0 .. c_{max_m} of the same recurrence.
// Exact for n = 0 only (the frozen-mobility start is a leading-order
// approximation above degree six), hence restricted to n = 0.
std::vector<double> origin_series_coefficients(const SimilarityParams& p,
                                               OriginKind kind, int max_m);

struct TrajectorySample {
  RadialState state;
  double log_scale;  // ln(true f / stored f) at this sample
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // strictly increasing in y
  double log_scale = 0.0;                 // final accumulated rescaling exponent
  SimilarityParams params;

  // ln |true f| at sample i (stored value recombined with the rescaling).
  double unscaled_log_abs_f(std::size_t i) const;
  // Nearest sample to y; throws std::out_of_range when off by more than tol.
  const TrajectorySample& near(double y, double tol = 1e-6) const;
};

struct IntegrateOptions {
  double rel_tol = 1e-13;             // in (0, 1e-6]
  double abs_tol = 1e-13;             // in (0, 1e-6]
  double rescale_threshold = 1e100;   // renormalisation trigger on max |component|
  double mobility_floor = 0.0;        // delta in m(f); callers use 1e-8 for n > 0
  double sample_dy = 0.1;             // uniform sampling when sample_points empty
  std::vector<double> sample_points;  // explicit output radii (ascending)
};

// Adaptive embedded-pair integration of the flux system from the series
// handoff point to y_end.  For n = 0 the state is renormalised (log-scale
// tracked) whenever a component exceeds rescale_threshold; the equation is
// linear so the rescaling is exact.  For n > 0 rescaling is invalid and
// exceeding the threshold raises Error(overflow_rescaling_disabled).
Trajectory integrate(const SimilarityParams& p, const OriginStart& start,
                     double y_end, const IntegrateOptions& opts = {});

// CSV columns y, f, df, lap, flux, log_scale at full precision, with
// '#'-prefixed comment lines on top.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& comments = {});

}  // namespace tfe

#endif
