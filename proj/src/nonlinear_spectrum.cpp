#include "tfe/nonlinear_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "tfe/errors.hpp"
#include "tfe/rootfind.hpp"

namespace tfe {

double minimal_growth_residual_at(const SimilarityParams& p, const RadialState& s,
                                  bool literal_mu_form, double f_floor) {
  if (std::abs(s.f) < f_floor && std::abs(s.df) < f_floor)
    throw Error(ErrorCode::indeterminate_residual,
                "profile and slope both below floor at y = " + std::to_string(s.y),
                s.y);
  const double growth = literal_mu_form ? p.mu : p.beta;
  return (growth * s.y * s.df - p.alpha * s.f) / std::max(std::abs(s.f), f_floor);
}

double minimal_growth_residual(const SimilarityParams& p, const Trajectory& traj,
                               double y_star, bool literal_mu_form,
                               double f_floor) {
  const TrajectorySample& s = traj.near(y_star, 1e-6 * std::max(1.0, y_star));
  return minimal_growth_residual_at(p, s.state, literal_mu_form, f_floor);
}

namespace {

OriginKind parity_kind(int k) {
  return (k % 2 == 1) ? OriginKind::sh2 : OriginKind::sh1;
}

struct ShotResiduals {
  std::vector<double> r;  // residual per band radius, ascending radii
  bool ok = false;
  double overflow_y = 0.0;  // > 0 when the shot overflowed before the band top
};

std::vector<double> band_radii(double y_top, double n, int count) {
  const double span = 0.7 + 2.0 * n;
  std::vector<double> radii(count);
  for (int j = 0; j < count; ++j)
    radii[j] = y_top * std::exp(-span * double(count - 1 - j) / double(count - 1));
  return radii;
}

ShotResiduals shoot_band(double n, int N, double alpha, OriginKind kind,
                         const std::vector<double>& radii,
                         const BranchPointConfig& cfg) {
  ShotResiduals out;
  try {
    const SimilarityParams p = derive_params(n, N, alpha, Sign::focusing);
    const OriginStart start = origin_series(p, kind, cfg.delta, cfg.y_start);
    IntegrateOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.rescale_threshold = cfg.rescale_threshold;
    opts.mobility_floor = cfg.delta;
    opts.sample_points = radii;
    const Trajectory traj = integrate(p, start, radii.back(), opts);
    out.r.reserve(radii.size());
    for (double y : radii)
      out.r.push_back(minimal_growth_residual(p, traj, y, cfg.literal_mu_form));
    out.ok = true;
  } catch (const Error& e) {
    if (e.code == ErrorCode::overflow_rescaling_disabled) out.overflow_y = e.where;
  } catch (const std::exception&) {
  }
  return out;
}

double band_rms(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return std::sqrt(s / double(r.size()));
}

}  // namespace

BranchPoint solve_branch_point(double n, int N, int k, double alpha_guess,
                               const BranchPointConfig& cfg) {
  if (k < 1) throw std::invalid_argument("branch index k must be >= 1");
  if (!(alpha_guess > 0.0)) throw std::invalid_argument("alpha_guess must be positive");
  const OriginKind kind = parity_kind(k);

  // Establish a band top that integrates without overflow near the guess.
  double y_top = cfg.y_star;
  std::vector<double> radii;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 8 || y_top < 5.0)
      throw Error(ErrorCode::oscillatory_loss,
                  "could not find an overflow-free matching band below y_star");
    radii = band_radii(y_top, n, cfg.band_radii);
    const ShotResiduals probe = shoot_band(n, N, alpha_guess, kind, radii, cfg);
    if (probe.ok) break;
    if (probe.overflow_y > 0.0)
      y_top = std::min(0.95 * probe.overflow_y, 0.8 * y_top);
    else
      throw Error(ErrorCode::no_bracket,
                  "probe shot failed at the initial guess for reasons other "
                  "than overflow");
  }

  // Bracketing scan over the guess window, residual vector per grid point.
  const int m = std::max(5, cfg.scan_points);
  std::vector<double> grid(m);
  for (int i = 0; i < m; ++i)
    grid[i] = alpha_guess * (1.0 - cfg.scan_spread) +
              alpha_guess * 2.0 * cfg.scan_spread * double(i) / double(m - 1);
  std::vector<ShotResiduals> rows(m);
  for (int i = 0; i < m; ++i) rows[i] = shoot_band(n, N, grid[i], kind, radii, cfg);

  struct Candidate {
    double alpha;
    double rms;
    double radius;   // 0 for the objective-minimum fallback
    double residual; // single-point value at `radius`
    bool bracketed;
  };
  std::vector<Candidate> cands;

  auto residual_at = [&](double a, double y) {
    const ShotResiduals sr = shoot_band(n, N, a, kind, {y}, cfg);
    return sr.ok ? sr.r[0] : std::numeric_limits<double>::quiet_NaN();
  };
  auto rms_at = [&](double a) {
    const ShotResiduals sr = shoot_band(n, N, a, kind, radii, cfg);
    return sr.ok ? band_rms(sr.r) : std::numeric_limits<double>::infinity();
  };

  for (std::size_t j = 0; j < radii.size(); ++j) {
    // nearest sign-change bracket to the guess in radius j
    std::optional<std::pair<int, double>> best;
    for (int i = 0; i + 1 < m; ++i) {
      if (!rows[i].ok || !rows[i + 1].ok) continue;
      if (rows[i].r[j] * rows[i + 1].r[j] < 0.0) {
        const double d = std::abs(0.5 * (grid[i] + grid[i + 1]) - alpha_guess);
        if (!best || d < best->second) best = {i, d};
      }
    }
    if (!best) continue;
    const int i = best->first;
    auto f = [&](double a) { return residual_at(a, radii[j]); };
    const double z = find_root(f, grid[i], grid[i + 1], rows[i].r[j],
                               rows[i + 1].r[j], cfg.alpha_tol * 0.01);
    cands.push_back({z, rms_at(z), radii[j], std::abs(residual_at(z, radii[j])),
                     true});
  }

  // Objective-minimum fallback over the scanned window.
  {
    int imin = -1;
    double jmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (!rows[i].ok) continue;
      const double v = band_rms(rows[i].r);
      if (v < jmin) {
        jmin = v;
        imin = i;
      }
    }
    if (imin > 0 && imin < m - 1) {
      const auto [za, jz] =
          golden_min(rms_at, grid[imin - 1], grid[imin + 1], cfg.alpha_tol);
      const double mid = radii[radii.size() / 2];
      cands.push_back({za, jz, mid, std::abs(residual_at(za, mid)), false});
    }
  }

  if (cands.empty())
    throw Error(ErrorCode::no_bracket,
                "no sign change or interior objective minimum in the scan "
                "window around alpha = " + std::to_string(alpha_guess));

  // Deep dips (true eigenvalues) win outright; otherwise prefer the bracketed
  // candidate nearest the continuation guess.
  const Candidate* chosen = nullptr;
  double best_rms = std::numeric_limits<double>::infinity();
  for (const auto& c : cands)
    if (c.rms <= cfg.deep_dip && c.rms < best_rms) {
      best_rms = c.rms;
      chosen = &c;
    }
  if (!chosen) {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) {
      if (!c.bracketed) continue;
      const double d = std::abs(c.alpha - alpha_guess);
      if (d < dist) {
        dist = d;
        chosen = &c;
      }
    }
  }
  if (!chosen) chosen = &cands.front();

  BranchPoint pt;
  pt.n = n;
  pt.alpha = chosen->alpha;
  pt.kind = kind;
  pt.delta = cfg.delta;
  pt.y_star = chosen->radius;
  pt.residual = chosen->residual;
  pt.accepted = chosen->residual <= cfg.residual_accept;
  pt.bracketed = chosen->bracketed;
  pt.band_rms = chosen->rms;
  pt.band_top = y_top;
  return pt;
}

Branch trace_branch(int N, int k, const std::vector<double>& n_grid,
                    const BranchPointConfig& cfg) {
  if (n_grid.empty()) throw std::invalid_argument("empty n grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()))
    throw std::invalid_argument("n grid must be increasing");
  if (n_grid.front() > 1e-3 + 1e-12)
    throw std::invalid_argument("branch tracing must start from n <= 1e-3");
  const double alpha0 = 0.5 * k;
  const double n_limit = 1.0 / alpha0;
  if (!cfg.allow_past_limit && n_grid.back() >= n_limit)
    throw std::invalid_argument(
        "n grid exceeds the 1/alpha_k(0) validity window; set allow_past_limit "
        "to explore beyond it");

  Branch br;
  br.k = k;
  br.N = N;
  double guess = alpha0;
  double prev_n = 0.0;
  for (double n : n_grid) {
    const double dn = n - prev_n;
    const double denom = 1.0 - guess * dn;
    const double extrap = denom > 0.1 ? guess / denom : guess;
    try {
      BranchPoint pt = solve_branch_point(n, N, k, extrap, cfg);
      br.points.push_back(pt);
      guess = pt.alpha;
      prev_n = n;
    } catch (const std::exception& e) {
      br.termination = "stopped at n = " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  try {
    br.slope_estimate = branch_slope(br);
  } catch (const std::exception&) {
    br.slope_estimate = std::numeric_limits<double>::quiet_NaN();
  }
  return br;
}

double branch_slope(const Branch& branch) {
  const double anchor = 0.5 * branch.k;
  double sn2 = 0.0, sna = 0.0;
  int count = 0;
  for (const auto& pt : branch.points) {
    if (pt.n > 0.05) continue;
    sn2 += pt.n * pt.n;
    sna += pt.n * (pt.alpha - anchor);
    ++count;
  }
  if (count < 3)
    throw Error(ErrorCode::insufficient_samples,
                "slope fit needs at least 3 points with n <= 0.05, got " +
                    std::to_string(count));
  return sna / sn2;
}

bool delta_sensitive(const BranchPoint& pt, int N, int k,
                     const BranchPointConfig& cfg) {
  BranchPointConfig halved = cfg;
  halved.delta = 0.5 * pt.delta;
  halved.scan_spread = std::max(1e-4, 0.01);
  const BranchPoint again = solve_branch_point(pt.n, N, k, pt.alpha, halved);
  return std::abs(again.alpha - pt.alpha) > 10.0 * cfg.alpha_tol;
}

double fitted_local_exponent(const BranchPoint& pt, int N,
                             const BranchPointConfig& cfg) {
  const SimilarityParams p = derive_params(pt.n, N, pt.alpha, Sign::focusing);
  const OriginStart start = origin_series(p, pt.kind, pt.delta, cfg.y_start);
  IntegrateOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.mobility_floor = pt.delta;
  opts.sample_points = {pt.y_star};
  const Trajectory traj = integrate(p, start, pt.y_star, opts);
  const RadialState& s = traj.samples.back().state;
  return s.y * s.df / s.f;
}

}  // namespace tfe
