#include "tfe/linear_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tfe/errors.hpp"
#include "tfe/rootfind.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tfe {

namespace {

constexpr double kFourThirds = 4.0 / 3.0;

// |a| = (3/4) 4^{-1/3}, the modulus shared by all three characteristic roots.
double root_modulus() { return 0.75 * std::pow(4.0, -1.0 / 3.0); }

std::vector<double> shot_sample_points(const LinearShotConfig& cfg) {
  std::vector<double> pts;
  for (double y = cfg.y_start; y < cfg.window.lo; y += cfg.coarse_dy)
    pts.push_back(y);
  const int m = std::max(2, cfg.window_samples);
  for (int i = 0; i < m; ++i)
    pts.push_back(cfg.window.lo +
                  (cfg.window.hi - cfg.window.lo) * double(i) / double(m - 1));
  return pts;
}

}  // namespace

CharRoots char_roots(Sign sign) {
  const double r = root_modulus();
  CharRoots cr;
  cr.gamma = kFourThirds;
  const double half = 0.5, rt3h = std::sqrt(3.0) / 2.0;
  if (sign == Sign::focusing) {
    cr.a1 = {r * half, r * rt3h};
    cr.a3 = -r;
  } else {
    cr.a1 = {-r * half, r * rt3h};
    cr.a3 = r;
  }
  cr.a2 = std::conj(cr.a1);
  cr.c0 = cr.a1.real();
  cr.c1 = cr.a1.imag();
  return cr;
}

std::vector<ScaledSample> scaled_profile(const Trajectory& traj) {
  if (traj.params.n != 0.0)
    throw std::invalid_argument("scaled profile is defined for n = 0 trajectories");
  if (traj.params.sign != Sign::focusing)
    throw std::invalid_argument("scaled profile uses the focusing growth rate");
  const double c0 = char_roots(Sign::focusing).c0;
  const double p = (2.0 / 3.0) * (traj.params.N + 2.0 * traj.params.alpha);
  std::vector<ScaledSample> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double y = s.state.y;
    double v = 0.0;
    if (s.state.f != 0.0) {
      const double lg = std::log(std::abs(s.state.f)) + s.log_scale +
                        p * std::log(y) - c0 * std::pow(y, kFourThirds);
      v = std::copysign(std::exp(lg), s.state.f);
    }
    out.push_back({y, v});
  }
  return out;
}

FitResult fit_far_field(const std::vector<ScaledSample>& series, FitWindow window,
                        double alpha, double log_scale_applied) {
  const double c1 = char_roots(Sign::focusing).c1;
  double scc = 0, scs = 0, sss = 0, svc = 0, svs = 0;
  std::size_t m = 0;
  for (const auto& s : series) {
    if (s.y < window.lo || s.y > window.hi) continue;
    const double ph = c1 * std::pow(s.y, kFourThirds);
    const double c = std::cos(ph), sn = std::sin(ph);
    scc += c * c;
    scs += c * sn;
    sss += sn * sn;
    svc += s.value * c;
    svs += s.value * sn;
    ++m;
  }
  if (m < 50)
    throw Error(ErrorCode::insufficient_samples,
                "far-field fit needs at least 50 samples in the window, got " +
                    std::to_string(m));
  const double det = scc * sss - scs * scs;
  if (!(std::abs(det) > 1e-9 * scc * sss))
    throw Error(ErrorCode::ill_conditioned_fit,
                "normal equations ill-conditioned: window too short to resolve "
                "one oscillation period");
  FitResult r;
  r.C1 = (svc * sss - svs * scs) / det;
  r.C2 = (svs * scc - svc * scs) / det;
  r.window = window;
  r.alpha = alpha;
  r.log_scale_applied = log_scale_applied;
  double rss = 0.0;
  for (const auto& s : series) {
    if (s.y < window.lo || s.y > window.hi) continue;
    const double ph = c1 * std::pow(s.y, kFourThirds);
    const double e = s.value - r.C1 * std::cos(ph) - r.C2 * std::sin(ph);
    rss += e * e;
  }
  r.residual = std::sqrt(rss / double(m));
  return r;
}

FitResult shoot_and_fit(int N, OriginKind kind, double alpha,
                        const LinearShotConfig& cfg) {
  const SimilarityParams p = derive_params(0.0, N, alpha, Sign::focusing);
  const OriginStart start = origin_series(p, kind, 0.0, cfg.y_start);
  IntegrateOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.rescale_threshold = cfg.rescale_threshold;
  opts.sample_points = shot_sample_points(cfg);
  const Trajectory traj = integrate(p, start, cfg.window.hi, opts);
  FitResult r = fit_far_field(scaled_profile(traj), cfg.window, alpha,
                              traj.log_scale);
  return r;
}

static std::vector<ScanPoint> scan_impl(int N, OriginKind kind,
                                        const std::vector<double>& grid,
                                        const LinearShotConfig& cfg,
                                        bool parallel) {
  if (grid.empty()) throw std::invalid_argument("empty alpha grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("alpha grid must be strictly increasing");
  std::vector<ScanPoint> out(grid.size());

  auto one = [&](std::size_t i) {
    ScanPoint& pt = out[i];
    pt.alpha = grid[i];
    try {
      const FitResult f = shoot_and_fit(N, kind, grid[i], cfg);
      pt.C1 = f.C1;
      pt.C2 = f.C2;
      pt.residual = f.residual;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(grid.size()); ++i) one(std::size_t(i));
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) one(i);
  }
  return out;
}

std::vector<ScanPoint> scan_alpha(int N, OriginKind kind,
                                  const std::vector<double>& grid,
                                  const LinearShotConfig& cfg) {
  return scan_impl(N, kind, grid, cfg, true);
}

std::vector<ScanPoint> scan_alpha_serial(int N, OriginKind kind,
                                         const std::vector<double>& grid,
                                         const LinearShotConfig& cfg) {
  return scan_impl(N, kind, grid, cfg, false);
}

namespace {

// Refines every sign change of component `comp` (0 -> C1, 1 -> C2) on the
// scan table by safeguarded secant on fresh shots.
std::vector<double> refine_zeros(int N, OriginKind kind,
                                 const std::vector<ScanPoint>& scan, int comp,
                                 const LinearShotConfig& cfg, double xtol) {
  auto value = [&](double a) {
    const FitResult f = shoot_and_fit(N, kind, a, cfg);
    return comp == 0 ? f.C1 : f.C2;
  };
  std::vector<double> zeros;
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    if (!scan[i].ok || !scan[i + 1].ok) continue;
    const double f0 = comp == 0 ? scan[i].C1 : scan[i].C2;
    const double f1 = comp == 0 ? scan[i + 1].C1 : scan[i + 1].C2;
    if (f0 == 0.0) {
      zeros.push_back(scan[i].alpha);
      continue;
    }
    if (f0 * f1 < 0.0)
      zeros.push_back(
          find_root(value, scan[i].alpha, scan[i + 1].alpha, f0, f1, xtol));
  }
  return zeros;
}

}  // namespace

std::vector<EigenvalueHit> find_linear_eigenvalues(int N, int k_max,
                                                   const LinearShotConfig& cfg,
                                                   double coincide_tol,
                                                   double scan_step) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  const double alpha_hi =
      std::min(cfg.alpha_max, 0.5 * k_max + 4.0 * scan_step);
  std::vector<EigenvalueHit> hits;

  for (OriginKind kind : {OriginKind::sh2, OriginKind::sh1}) {
    std::vector<double> grid;
    for (double a = 2.0 * scan_step; a < alpha_hi + 0.5 * scan_step;
         a += scan_step)
      grid.push_back(a);
    const auto scan = scan_alpha(N, kind, grid, cfg);
    const double xtol = 1e-10;
    const auto z1 = refine_zeros(N, kind, scan, 0, cfg, xtol);
    const auto z2 = refine_zeros(N, kind, scan, 1, cfg, xtol);

    std::vector<bool> used(z2.size(), false);
    for (double a1 : z1) {
      // nearest unused C2 zero
      std::size_t best = z2.size();
      double dist = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < z2.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(z2[j] - a1);
        if (d < dist) {
          dist = d;
          best = j;
        }
      }
      EigenvalueHit h;
      h.kind = kind;
      h.z1 = a1;
      if (best < z2.size() && dist <= std::max(coincide_tol, 10 * xtol) * 50) {
        used[best] = true;
        h.z2 = z2[best];
        h.alpha = 0.5 * (a1 + z2[best]);
        h.coincident = std::abs(a1 - z2[best]) <= coincide_tol;
      } else {
        h.z2 = std::numeric_limits<double>::quiet_NaN();
        h.alpha = a1;
        h.coincident = false;
      }
      h.k = int(std::lround(2.0 * h.alpha));
      const FitResult at = shoot_and_fit(N, kind, h.alpha, cfg);
      h.C1_mag = std::abs(at.C1);
      h.C2_mag = std::abs(at.C2);
      hits.push_back(h);
    }
    // leftover C2 zeros with no C1 partner are reported, not skipped
    for (std::size_t j = 0; j < z2.size(); ++j) {
      if (used[j]) continue;
      EigenvalueHit h;
      h.kind = kind;
      h.z1 = std::numeric_limits<double>::quiet_NaN();
      h.z2 = z2[j];
      h.alpha = z2[j];
      h.coincident = false;
      h.k = int(std::lround(2.0 * h.alpha));
      hits.push_back(h);
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const EigenvalueHit& a, const EigenvalueHit& b) {
              return a.alpha < b.alpha;
            });
  return hits;
}

std::vector<double> coincident_eigenvalues(const std::vector<EigenvalueHit>& hits,
                                           int k_max) {
  std::vector<double> out;
  for (const auto& h : hits) {
    if (!h.coincident) continue;
    out.push_back(h.alpha);
    if (int(out.size()) >= k_max) break;
  }
  return out;
}

double EigenPolynomial::eval(double y) const {
  double v = 0.0;
  for (int m = int(coeff.size()) - 1; m >= 0; --m) v = v * y + coeff[m];
  return v;
}

double EigenPolynomial::derivative(double y) const {
  double v = 0.0;
  for (int m = int(coeff.size()) - 1; m >= 1; --m)
    v = v * y + m * coeff[m];
  return v;
}

EigenPolynomial eigenfunction_oracle(int k, int N) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  EigenPolynomial pol;
  pol.k = k;
  pol.coeff.assign(2 * k + 1, 0.0);
  const double dN = N;
  if (k == 1) {
    pol.coeff[2] = 0.5;
  } else if (k == 2) {
    pol.coeff[0] = 1.0;
    pol.coeff[4] = 1.0 / (8.0 * dN * (dN + 2));
  } else if (k == 3) {
    pol.coeff[2] = 0.5;
    pol.coeff[6] = 1.0 / (48.0 * (dN + 2) * (dN + 4));
  } else if (k == 4) {
    pol.coeff[0] = 1.0;
    pol.coeff[4] = 1.0 / (4.0 * dN * (dN + 2));
    pol.coeff[8] = 1.0 / (192.0 * dN * (dN + 2) * (dN + 4) * (dN + 6));
  } else {
    // the recurrence terminates exactly at m = 2k since alpha - m/4 = 0 there
    const SimilarityParams p = derive_params(0.0, N, 0.5 * k, Sign::focusing);
    const OriginKind kind = (k % 2 == 1) ? OriginKind::sh2 : OriginKind::sh1;
    pol.coeff = origin_series_coefficients(p, kind, 2 * k);
  }
  return pol;
}

namespace {

// Origin start with a free second parameter nu: sh1 keeps f(0) = 1 and frees
// f''(0) = nu; sh2 keeps f''(0) = 1 and frees f(0) = nu.
OriginStart two_param_start(const SimilarityParams& p, OriginKind kind,
                            double nu, double y_start) {
  OriginStart st;
  st.kind = kind;
  st.y_start = y_start;
  double c0, c2;
  if (kind == OriginKind::sh1) {
    c0 = 1.0;
    c2 = 0.5 * nu;
  } else {
    c0 = nu;
    c2 = 0.5;
  }
  st.f0 = c0;
  st.f2 = 2.0 * c2;
  auto next = [&](int m, double cm) {
    const double den =
        double(m + 4) * double(m + 2) * double(m + p.N + 2) * double(m + p.N);
    return (p.alpha - m * p.beta) * cm / den;
  };
  st.series = {c0, c2, next(0, c0), next(2, c2)};
  return st;
}

}  // namespace

TwoParamResult solve_c1c2_system(int N, OriginKind kind, double alpha0, double nu0,
                                 const LinearShotConfig& cfg) {
  auto F = [&](double a, double nu, double& C1, double& C2) {
    const SimilarityParams p = derive_params(0.0, N, a, Sign::focusing);
    const OriginStart start = two_param_start(p, kind, nu, cfg.y_start);
    IntegrateOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.rescale_threshold = cfg.rescale_threshold;
    opts.sample_points = shot_sample_points(cfg);
    const Trajectory traj = integrate(p, start, cfg.window.hi, opts);
    const FitResult r = fit_far_field(scaled_profile(traj), cfg.window, a,
                                      traj.log_scale);
    C1 = r.C1;
    C2 = r.C2;
  };

  TwoParamResult res;
  res.alpha = alpha0;
  res.nu = nu0;
  double C1, C2;
  F(res.alpha, res.nu, C1, C2);
  for (int it = 0; it < 40; ++it) {
    res.iterations = it;
    const double norm0 = std::hypot(C1, C2);
    if (norm0 < 1e-11) {
      res.converged = true;
      break;
    }
    const double ha = 1e-7 * std::max(1.0, std::abs(res.alpha));
    const double hn = 1e-7 * std::max(1.0, std::abs(res.nu));
    double C1a, C2a, C1n, C2n;
    F(res.alpha + ha, res.nu, C1a, C2a);
    F(res.alpha, res.nu + hn, C1n, C2n);
    const double j11 = (C1a - C1) / ha, j12 = (C1n - C1) / hn;
    const double j21 = (C2a - C2) / ha, j22 = (C2n - C2) / hn;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    const double da = (-C1 * j22 + C2 * j12) / det;
    const double dn = (-C2 * j11 + C1 * j21) / det;
    double lambda = 1.0;
    double nC1 = C1, nC2 = C2;
    for (int h = 0; h < 8; ++h) {
      const double at = res.alpha + lambda * da;
      const double nt = res.nu + lambda * dn;
      if (at > 0.0) {
        F(at, nt, nC1, nC2);
        if (std::hypot(nC1, nC2) < norm0) break;
      }
      lambda *= 0.5;
    }
    res.alpha += lambda * da;
    res.nu += lambda * dn;
    C1 = nC1;
    C2 = nC2;
    if (std::abs(lambda * da) < 1e-12 && std::abs(lambda * dn) < 1e-12) {
      res.converged = std::hypot(C1, C2) < 1e-8;
      break;
    }
  }
  res.C1 = C1;
  res.C2 = C2;
  if (!res.converged) res.converged = std::hypot(C1, C2) < 1e-10;
  return res;
}

}  // namespace tfe
