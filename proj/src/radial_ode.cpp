#include "tfe/radial_ode.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "tfe/errors.hpp"
#include "tfe/output.hpp"

namespace tfe {

namespace {

// y^{N-1} without pow() for the small integer dimensions in use.
double radial_weight(double y, int N) {
  double w = 1.0;
  for (int i = 1; i < N; ++i) w *= y;
  return w;
}

double linear_sign(Sign s) { return s == Sign::focusing ? 1.0 : -1.0; }

}  // namespace

std::string to_string(OriginKind k) { return k == OriginKind::sh1 ? "sh1" : "sh2"; }

RadialDerivs rhs(const SimilarityParams& p, const RadialState& s,
                 double mobility_floor) {
  const double w = radial_weight(s.y, p.N);
  const double mob = regularized_mobility(s.f, p.n, mobility_floor);
  const double denom = w * mob;
  if (!(denom > 1e-300) || !std::isfinite(denom))
    throw Error(ErrorCode::singular_mobility,
                "mobility weight y^{N-1} m(f) underflowed at y = " +
                    std::to_string(s.y),
                s.y);
  const double sgn = linear_sign(p.sign);
  RadialDerivs d;
  d.df = s.df;
  d.ddf = s.lap - (p.N - 1) * s.df / s.y;
  d.dlap = s.flux / denom;
  d.dflux = sgn * w * (p.alpha * s.f - p.beta * s.y * s.df);
  return d;
}

OriginStart origin_series(const SimilarityParams& p, OriginKind kind,
                          double mobility_floor, double y_start) {
  if (!(y_start > 0.0)) throw std::invalid_argument("y_start must be positive");

  OriginStart st;
  st.kind = kind;
  st.y_start = y_start;
  double c0, c2;
  if (kind == OriginKind::sh1) {
    c0 = 1.0;
    c2 = 0.0;
  } else {
    c0 = 0.0;
    c2 = 0.5;  // f''(0) = 1
    if (p.n > 0.0 && mobility_floor <= 0.0)
      throw Error(ErrorCode::degenerate_origin,
                  "sh2 start with n > 0: mobility vanishes at the origin; "
                  "a positive mobility floor is required");
  }
  st.f0 = c0;
  st.f2 = 2.0 * c2;

  const double m0 = regularized_mobility(c0, p.n, mobility_floor);
  const double sgn = linear_sign(p.sign);
  auto next = [&](int m, double cm) {
    const double den =
        double(m + 4) * double(m + 2) * double(m + p.N + 2) * double(m + p.N);
    return sgn * (p.alpha - m * p.beta) * cm / (den * m0);
  };
  st.series = {c0, c2, next(0, c0), next(2, c2)};
  return st;
}

std::vector<double> origin_series_coefficients(const SimilarityParams& p,
                                               OriginKind kind, int max_m) {
  if (p.n != 0.0)
    throw std::invalid_argument(
        "extended origin coefficients are exact only for n = 0");
  if (max_m < 0) throw std::invalid_argument("max_m must be non-negative");

  std::vector<double> c(static_cast<std::size_t>(max_m) + 1, 0.0);
  if (kind == OriginKind::sh1)
    c[0] = 1.0;
  else if (max_m >= 2)
    c[2] = 0.5;
  const double sgn = linear_sign(p.sign);
  for (int m = 0; m + 4 <= max_m; m += 2) {
    const double den =
        double(m + 4) * double(m + 2) * double(m + p.N + 2) * double(m + p.N);
    c[m + 4] = sgn * (p.alpha - m * p.beta) * c[m] / den;
  }
  return c;
}

RadialState OriginStart::state(const SimilarityParams& p) const {
  const double y = y_start;
  RadialState s{y, 0.0, 0.0, 0.0, 0.0};
  const double sgn = linear_sign(p.sign);
  for (int j = 0; j < 4; ++j) {
    const int m = 2 * j;
    const double c = series[j];
    const double ym = std::pow(y, m);
    s.f += c * ym;
    if (m > 0) {
      s.df += c * m * ym / y;
      s.lap += c * m * (m + p.N - 2) * ym / (y * y);
    }
    // Exact flux integral of g' = s y^{N-1} (alpha f - beta y f') on the series.
    s.flux += sgn * c * (p.alpha - m * p.beta) * std::pow(y, m + p.N) / (m + p.N);
  }
  return s;
}

double Trajectory::unscaled_log_abs_f(std::size_t i) const {
  const auto& s = samples.at(i);
  return std::log(std::abs(s.state.f)) + s.log_scale;
}

const TrajectorySample& Trajectory::near(double y, double tol) const {
  if (samples.empty()) throw std::out_of_range("empty trajectory");
  auto cmp = [](const TrajectorySample& a, double v) { return a.state.y < v; };
  auto it = std::lower_bound(samples.begin(), samples.end(), y, cmp);
  if (it == samples.end()) --it;
  if (it != samples.begin()) {
    auto prev = std::prev(it);
    if (std::abs(prev->state.y - y) < std::abs(it->state.y - y)) it = prev;
  }
  if (std::abs(it->state.y - y) > tol)
    throw std::out_of_range("no trajectory sample within tol of requested y");
  return *it;
}

Trajectory integrate(const SimilarityParams& p, const OriginStart& start,
                     double y_end, const IntegrateOptions& opts) {
  if (!(opts.rel_tol > 0.0) || opts.rel_tol > 1e-6 || !(opts.abs_tol > 0.0) ||
      opts.abs_tol > 1e-6)
    throw std::invalid_argument("tolerances must lie in (0, 1e-6]");
  if (!(y_end > start.y_start))
    throw std::invalid_argument("y_end must exceed the series handoff radius");

  const bool rescaling_allowed = (p.n == 0.0);

  std::vector<double> targets;
  if (!opts.sample_points.empty()) {
    targets = opts.sample_points;
    if (!std::is_sorted(targets.begin(), targets.end()))
      throw std::invalid_argument("sample_points must be ascending");
  } else {
    for (double y = start.y_start; y < y_end; y += opts.sample_dy)
      targets.push_back(y);
    targets.push_back(y_end);
  }

  using state_t = std::array<double, 4>;
  namespace od = boost::numeric::odeint;

  auto system = [&](const state_t& x, state_t& dxdy, double y) {
    RadialDerivs d = rhs(p, {y, x[0], x[1], x[2], x[3]}, opts.mobility_floor);
    dxdy = {d.df, d.ddf, d.dlap, d.dflux};
  };

  auto stepper = od::make_controlled(opts.abs_tol, opts.rel_tol,
                                     od::runge_kutta_fehlberg78<state_t>());

  Trajectory traj;
  traj.params = p;

  RadialState s0 = start.state(p);
  state_t x{s0.f, s0.df, s0.lap, s0.flux};
  double y = start.y_start;
  double log_scale = 0.0;
  double dy = std::min(1e-4, (y_end - y) / 10.0);

  auto record = [&](double yy) {
    traj.samples.push_back({{yy, x[0], x[1], x[2], x[3]}, log_scale});
  };
  auto rescale_if_needed = [&](double yy) {
    double amax = 0.0;
    for (double v : x) amax = std::max(amax, std::abs(v));
    if (!std::isfinite(amax) || amax > opts.rescale_threshold) {
      if (!rescaling_allowed)
        throw Error(ErrorCode::overflow_rescaling_disabled,
                    "profile exceeded the overflow threshold at y = " +
                        std::to_string(yy) + " with rescaling disabled (n > 0)",
                    yy);
      const double k = std::floor(std::log(amax));
      const double fac = std::exp(-k);
      for (double& v : x) v *= fac;
      log_scale += k;
    }
  };

  std::size_t steps = 0;
  constexpr std::size_t max_steps = 50'000'000;
  for (double target : targets) {
    if (target < y + 1e-15 * std::max(1.0, y)) {
      if (traj.samples.empty()) record(y);
      continue;
    }
    if (target > y_end * (1.0 + 1e-15)) break;
    while (y < target) {
      dy = std::min(dy, target - y);
      if (!(dy > 1e-14 * std::max(1.0, y)))
        throw Error(ErrorCode::step_size_collapse,
                    "step size collapsed at y = " + std::to_string(y), y);
      od::controlled_step_result res = stepper.try_step(system, x, y, dy);
      if (res == od::success) {
        rescale_if_needed(y);
        if (++steps > max_steps)
          throw Error(ErrorCode::step_size_collapse,
                      "step budget exhausted at y = " + std::to_string(y), y);
      }
    }
    record(y);
  }
  traj.log_scale = log_scale;
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << "\n";
  os << "y,f,df,lap,flux,log_scale\n";
  for (const auto& s : traj.samples) {
    os << format_full(s.state.y) << ',' << format_full(s.state.f) << ','
       << format_full(s.state.df) << ',' << format_full(s.state.lap) << ','
       << format_full(s.state.flux) << ',' << format_full(s.log_scale) << "\n";
  }
}

}  // namespace tfe
