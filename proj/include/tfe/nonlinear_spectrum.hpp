#ifndef TFE_NONLINEAR_SPECTRUM_HPP
#define TFE_NONLINEAR_SPECTRUM_HPP

#include <string>
#include <vector>

#include "tfe/radial_ode.hpp"
#include "tfe/similarity.hpp"

namespace tfe {

// Normalised minimal-growth residual (beta y f' - alpha f) / max(|f|, floor),
// which vanishes identically on f = C y^mu.  literal_mu_form switches to the
// alternative objective (mu y f' - alpha f) / max(|f|, floor), kept for
// comparison; it equals (mu^2 - alpha) on f = C y^mu instead of zero.
double minimal_growth_residual_at(const SimilarityParams& p, const RadialState& s,
                                  bool literal_mu_form = false,
                                  double f_floor = 1e-30);

// Same, evaluated at the trajectory sample nearest y_star.  Throws
// Error(indeterminate_residual) when both f and f' are below the floor there.
double minimal_growth_residual(const SimilarityParams& p, const Trajectory& traj,
                               double y_star, bool literal_mu_form = false,
                               double f_floor = 1e-30);

struct BranchPointConfig {
  double delta = 1e-8;        // mobility floor, reported in all outputs
  double y_star = 40.0;       // top of the matching-radius band
  double alpha_tol = 1e-8;    // convergence width in alpha
  double residual_accept = 1e-6;
  double scan_spread = 0.2;   // relative half-width of the bracketing scan
  int scan_points = 25;
  int band_radii = 7;         // matching radii y_star e^{-s}, s in [0, span]
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  double rescale_threshold = 1e100;
  double y_start = 1e-3;
  bool literal_mu_form = false;
  double deep_dip = 1e-3;     // band rms below this marks a true eigenvalue dip
  bool allow_past_limit = false;  // permit n beyond 1/alpha_k(0) in traces
};

struct BranchPoint {
  double n = 0.0;
  double alpha = 0.0;
  OriginKind kind = OriginKind::sh2;
  double delta = 0.0;
  double y_star = 0.0;    // matching radius at which the residual was zeroed
  double residual = 0.0;  // |minimal-growth residual| achieved there
  bool accepted = false;  // residual <= residual_accept
  bool bracketed = false; // located by sign change (vs objective minimum)
  double band_rms = 0.0;  // rms residual over the whole matching band
  double band_top = 0.0;  // top band radius actually used (auto-reduced on overflow)
};

// Locates alpha_k(n) by shooting with the parity-matched origin kind (odd k
// from sh2, even k from sh1).  The signed residual is root-found at each
// matching radius of the band; candidates are ranked by the band rms, with the
// sign-change root nearest the guess used when no deep dip exists.  The band
// top is reduced automatically when the maximal growth y^{4/n} threatens
// overflow before y_star.
BranchPoint solve_branch_point(double n, int N, int k, double alpha_guess,
                               const BranchPointConfig& cfg = {});

struct Branch {
  int k = 0;
  int N = 0;
  std::vector<BranchPoint> points;  // ordered by n
  double slope_estimate = 0.0;      // NaN when too few small-n points
  std::string termination;          // empty, or why the trace stopped early
};

// Continuation over the n grid; each guess is the previous alpha extrapolated
// through alpha -> alpha/(1 - alpha dn).  The first failed point terminates
// the branch with partial results.
Branch trace_branch(int N, int k, const std::vector<double>& n_grid,
                    const BranchPointConfig& cfg = {});

// Least-squares slope of (n, alpha) through the anchor (0, k/2), using points
// with n <= 0.05.  Throws Error(insufficient_samples) with fewer than three.
double branch_slope(const Branch& branch);

// Re-solves the point with delta halved; true when the converged alpha moved
// by more than 10x the convergence tolerance (the point is delta-sensitive).
bool delta_sensitive(const BranchPoint& pt, int N, int k,
                     const BranchPointConfig& cfg = {});

// Local log-slope y f'/f of the profile at the matching radius, which should
// track mu(alpha, n) on a converged point.
double fitted_local_exponent(const BranchPoint& pt, int N,
                             const BranchPointConfig& cfg = {});

}  // namespace tfe

#endif
