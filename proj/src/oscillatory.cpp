#include "tfe/oscillatory.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tfe/errors.hpp"

namespace tfe {

OscParams derive_osc_params(double n, int N, double alpha) {
  if (!(n > 0.0) || n >= 2.0)
    throw std::invalid_argument("oscillatory component requires n in (0,2)");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return {n, N, alpha, 4.0 / n};
}

PhiCoeffs phi_coefficients(double mu, int N) {
  const double dN = N;
  PhiCoeffs c;
  c.c3 = 2.0 * (dN - 4.0 + 2.0 * mu);
  c.c2 = 6.0 * mu * mu + 6.0 * (dN - 4.0) * mu + 11.0 + (dN - 1.0) * (dN - 9.0);
  c.c1 = 2.0 * (2.0 * mu + dN - 4.0) * (mu * mu + (dN - 4.0) * mu + 2.0 - dN);
  c.c0 = mu * (mu - 2.0) *
         (mu * mu + 2.0 * (dN - 3.0) * mu + 3.0 + (dN - 1.0) * (dN - 5.0));
  c.b2 = dN - 4.0 + 3.0 * mu;
  c.b1 = 3.0 * mu * mu + 2.0 * (dN - 4.0) * mu + 4.0 - 2.0 * dN;
  c.b0 = mu * (mu - 2.0) * (dN - 2.0 + mu);
  return c;
}

double phi_equation_residual(const OscParams& p, double phi, double dphi,
                             double d2phi, double d3phi, double d4phi) {
  const PhiCoeffs c = phi_coefficients(p.mu, p.N);
  const double bracket = d3phi + c.b2 * d2phi + c.b1 * dphi + c.b0 * phi;
  return d4phi + c.c3 * d3phi + c.c2 * d2phi + c.c1 * dphi + c.c0 * phi +
         p.n * (dphi / phi + p.mu) * bracket +
         (0.25 * (1.0 + p.n * p.alpha) * (dphi + p.mu * phi) - p.alpha * phi) *
             std::pow(std::abs(phi), -p.n);
}

OscState phi_rhs(const OscParams& p, const OscState& st, double phi_floor) {
  if (std::abs(st.phi) < phi_floor)
    throw Error(ErrorCode::phi_floor,
                "phi inside the sign-change floor at s = " + std::to_string(st.s),
                st.s);
  const PhiCoeffs c = phi_coefficients(p.mu, p.N);
  const double bracket =
      st.d3phi + c.b2 * st.d2phi + c.b1 * st.dphi + c.b0 * st.phi;
  const double d4 =
      -(c.c3 * st.d3phi + c.c2 * st.d2phi + c.c1 * st.dphi + c.c0 * st.phi +
        p.n * (st.dphi / st.phi + p.mu) * bracket +
        (0.25 * (1.0 + p.n * p.alpha) * (st.dphi + p.mu * st.phi) -
         p.alpha * st.phi) *
            std::pow(std::abs(st.phi), -p.n));
  return {st.s, st.dphi, st.d2phi, st.d3phi, d4};
}

double transform_phi(double phi) {
  if (phi > 1.0) return std::log(phi) + 1.0;
  if (phi < -1.0) return -std::log(-phi) - 1.0;
  return phi;
}

double transform_phi_log(int sign, double log_abs_phi) {
  if (sign == 0) return 0.0;
  if (log_abs_phi > 0.0) return sign * (log_abs_phi + 1.0);
  return sign * std::exp(log_abs_phi);
}

OscOrbit integrate_oscillatory(const OscParams& p,
                               const OscIntegrateOptions& opts) {
  namespace od = boost::numeric::odeint;
  using state_t = std::array<double, 4>;

  const PhiCoeffs c = phi_coefficients(p.mu, p.N);
  // exact amplitude scaling phi = e^{offset} psi: the |phi|^{-n} block gains
  // the factor e^{-n offset} = 4 mu^3 at the natural orbit scale
  const double offset = -std::log(4.0 * p.mu * p.mu * p.mu) / p.n;
  const double rho = 4.0 * p.mu * p.mu * p.mu;
  const double eps = opts.phi_floor;

  auto system = [&](const state_t& x, state_t& dx, double) {
    const double phi = x[0];
    const double denom = phi * phi + eps * eps;
    const double inv_phi = phi / denom;                    // mollified 1/phi
    const double mob = std::pow(denom, -0.5 * p.n) * rho;  // scaled |phi|^{-n}
    const double bracket = x[3] + c.b2 * x[2] + c.b1 * x[1] + c.b0 * x[0];
    dx[0] = x[1];
    dx[1] = x[2];
    dx[2] = x[3];
    dx[3] = -(c.c3 * x[3] + c.c2 * x[2] + c.c1 * x[1] + c.c0 * x[0] +
              p.n * (x[1] * inv_phi + p.mu) * bracket +
              (0.25 * (1.0 + p.n * p.alpha) * (x[1] + p.mu * x[0]) -
               p.alpha * x[0]) *
                  mob);
  };

  const double period_estimate = 11.52 / p.mu;  // linear-limit oscillation scale
  const double s_end = opts.s_end > 0.0 ? opts.s_end : 30.0 * period_estimate;

  auto stepper = od::make_controlled(opts.abs_tol, opts.rel_tol,
                                     od::runge_kutta_fehlberg78<state_t>());
  state_t x = opts.initial;
  double s = 0.0, ds = 1e-4 * period_estimate;

  OscOrbit orbit;
  orbit.params = p;
  orbit.log_amp_offset = offset;
  orbit.samples.reserve(opts.n_samples);

  auto record = [&](double ss) {
    OscSample smp;
    smp.s = ss;
    smp.psi = x[0];
    smp.sign = (x[0] > 0.0) - (x[0] < 0.0);
    smp.log_abs_phi = smp.sign != 0
                          ? std::log(std::abs(x[0])) + offset
                          : -std::numeric_limits<double>::infinity();
    smp.phi = smp.sign != 0 ? smp.sign * std::exp(smp.log_abs_phi) : 0.0;
    smp.tphi = transform_phi_log(smp.sign, smp.log_abs_phi);
    orbit.samples.push_back(smp);
  };

  record(0.0);
  double prev_sign = (x[0] > 0.0) - (x[0] < 0.0);
  std::size_t steps = 0;
  constexpr std::size_t max_steps = 20'000'000;
  for (int i = 1; i < opts.n_samples; ++i) {
    const double target = s_end * double(i) / double(opts.n_samples - 1);
    while (s < target) {
      ds = std::min(ds, target - s);
      if (!(ds > 1e-15 * std::max(1.0, s)))
        throw Error(ErrorCode::step_size_collapse,
                    "oscillatory step collapsed at s = " + std::to_string(s), s);
      if (stepper.try_step(system, x, s, ds) == od::success) {
        const double sign = (x[0] > 0.0) - (x[0] < 0.0);
        if (sign != 0.0 && prev_sign != 0.0 && sign != prev_sign)
          orbit.sign_changes.push_back(s);
        if (sign != 0.0) prev_sign = sign;
        if (++steps > max_steps)
          throw Error(ErrorCode::step_size_collapse,
                      "oscillatory step budget exhausted at s = " +
                          std::to_string(s),
                      s);
      }
    }
    record(s);
  }
  return orbit;
}

std::vector<RescaledSample> rescale_small_n(const std::vector<OscSample>& series,
                                            double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  const double n = 4.0 / mu;
  const double log_gain = (3.0 / n) * std::log(mu);  // ln mu^{3/n}
  std::vector<RescaledSample> out;
  out.reserve(series.size());
  for (const auto& s : series) {
    RescaledSample r;
    r.s_hat = mu * s.s;
    r.sign = s.sign;
    r.log_abs_phi_hat = s.log_abs_phi + log_gain;
    r.phi_hat = s.sign != 0 ? s.sign * std::exp(r.log_abs_phi_hat) : 0.0;
    out.push_back(r);
  }
  return out;
}

std::vector<OscSample> invert_rescale(const std::vector<RescaledSample>& series,
                                      double mu) {
  const double n = 4.0 / mu;
  const double log_gain = (3.0 / n) * std::log(mu);
  std::vector<OscSample> out;
  out.reserve(series.size());
  for (const auto& r : series) {
    OscSample s{};
    s.s = r.s_hat / mu;
    s.sign = r.sign;
    s.log_abs_phi = r.log_abs_phi_hat - log_gain;
    s.phi = r.sign != 0 ? r.sign * std::exp(s.log_abs_phi) : 0.0;
    s.tphi = transform_phi_log(s.sign, s.log_abs_phi);
    s.psi = 0.0;
    out.push_back(s);
  }
  return out;
}

double phihat_equation_residual(double n, double phi, double dphi, double d2phi,
                                double d3phi, double d4phi) {
  const double mob = n == 0.0 ? 1.0 : std::pow(std::abs(phi), -n);
  return d4phi + 4.0 * d3phi + 6.0 * d2phi + 4.0 * dphi + phi +
         0.25 * (dphi + phi) * mob;
}

std::array<double, 4> phihat_rhs(double n, double /*s*/,
                                 const std::array<double, 4>& x,
                                 double phi_floor) {
  if (n > 0.0 && std::abs(x[0]) < phi_floor)
    throw Error(ErrorCode::phi_floor, "phihat inside the sign-change floor");
  const double mob = n == 0.0 ? 1.0 : std::pow(std::abs(x[0]), -n);
  return {x[1], x[2], x[3],
          -(4.0 * x[3] + 6.0 * x[2] + 4.0 * x[1] + x[0] +
            0.25 * (x[1] + x[0]) * mob)};
}

PhihatOrbit integrate_phihat(double n, double s_end, int n_samples,
                             const std::array<double, 4>& initial,
                             double rel_tol, double phi_floor) {
  namespace od = boost::numeric::odeint;
  using state_t = std::array<double, 4>;
  const double eps = phi_floor;
  auto system = [&](const state_t& x, state_t& dx, double) {
    const double mob =
        n == 0.0 ? 1.0 : std::pow(x[0] * x[0] + eps * eps, -0.5 * n);
    dx[0] = x[1];
    dx[1] = x[2];
    dx[2] = x[3];
    dx[3] = -(4.0 * x[3] + 6.0 * x[2] + 4.0 * x[1] + x[0] +
              0.25 * (x[1] + x[0]) * mob);
  };
  auto stepper = od::make_controlled(1e-60, rel_tol,
                                     od::runge_kutta_fehlberg78<state_t>());
  state_t x = initial;
  double s = 0.0, ds = 1e-3;
  PhihatOrbit orbit;
  orbit.s.reserve(n_samples);
  orbit.phi.reserve(n_samples);
  orbit.s.push_back(0.0);
  orbit.phi.push_back(x[0]);
  for (int i = 1; i < n_samples; ++i) {
    const double target = s_end * double(i) / double(n_samples - 1);
    while (s < target) {
      ds = std::min(ds, target - s);
      if (!(ds > 1e-15 * std::max(1.0, s)))
        throw Error(ErrorCode::step_size_collapse,
                    "rescaled-orbit step collapsed at s = " + std::to_string(s),
                    s);
      stepper.try_step(system, x, s, ds);
    }
    orbit.s.push_back(s);
    orbit.phi.push_back(x[0]);
  }
  return orbit;
}

double envelope_log_slope(const std::vector<double>& s,
                          const std::vector<double>& x, double s_from,
                          double s_to) {
  // local maxima of |x| by parabolic refinement of sample triples
  std::vector<double> ps, pv;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] < s_from || s[i] > s_to) continue;
    const double a = std::abs(x[i - 1]), b = std::abs(x[i]), c = std::abs(x[i + 1]);
    if (b >= a && b >= c && b > 0.0) {
      const double denom = a - 2.0 * b + c;
      double dt = 0.0, peak = b;
      if (denom < 0.0) {
        dt = 0.5 * (a - c) / denom;
        peak = b - 0.25 * (a - c) * dt;
      }
      ps.push_back(s[i] + dt * (s[i + 1] - s[i]));
      pv.push_back(std::log(peak));
    }
  }
  if (ps.size() < 3)
    throw Error(ErrorCode::insufficient_samples,
                "fewer than 3 envelope peaks in the fit range");
  const double m = ps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    sx += ps[i];
    sy += pv[i];
    sxx += ps[i] * ps[i];
    sxy += ps[i] * pv[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

PeriodicityReport detect_periodicity(const std::vector<double>& s,
                                     const std::vector<double>& values,
                                     double periodic_confidence,
                                     double lost_confidence) {
  PeriodicityReport rep;
  if (s.size() != values.size() || s.size() < 64) return rep;
  const double ds = s[1] - s[0];

  // detrend
  const std::size_t m = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= double(m);
  std::vector<double> x(m);
  double var = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = values[i] - mean;
    var += x[i] * x[i];
  }
  if (var <= 0.0) return rep;

  // normalized autocorrelation, first positive peak past the first zero dip
  const std::size_t max_lag = m * 3 / 4;
  std::vector<double> ac(max_lag, 0.0);
  for (std::size_t lag = 0; lag < max_lag; ++lag) {
    double num = 0.0;
    for (std::size_t i = 0; i + lag < m; ++i) num += x[i] * x[i + lag];
    ac[lag] = num / var;
  }
  std::size_t i0 = 1;
  while (i0 < max_lag && ac[i0] > 0.0) ++i0;
  if (i0 + 2 >= max_lag) return rep;
  std::size_t peak = i0;
  for (std::size_t i = i0; i < max_lag; ++i)
    if (ac[i] > ac[peak]) peak = i;
  if (peak == 0 || peak + 1 >= max_lag) return rep;

  // parabolic lag refinement
  const double a = ac[peak - 1], b = ac[peak], c = ac[peak + 1];
  double shift = 0.0;
  const double denom = a - 2.0 * b + c;
  if (denom < 0.0) shift = 0.5 * (a - c) / denom;
  const double period = (double(peak) + shift) * ds;

  // needs room for at least five putative periods
  if (period <= 0.0 || (s.back() - s.front()) < 5.0 * period) return rep;

  // shift-match confidence: 1 - rms(x(t) - x(t+T)) / (sqrt(2) rms(x))
  const std::size_t lag = peak;
  double diff = 0.0, norm = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i + lag < m; ++i) {
    const double d = x[i] - x[i + lag];
    diff += d * d;
    norm += x[i] * x[i] + x[i + lag] * x[i + lag];
    ++cnt;
  }
  if (cnt == 0 || norm <= 0.0) return rep;
  rep.confidence = std::max(0.0, 1.0 - std::sqrt(diff / norm));
  rep.period = period;
  if (rep.confidence >= periodic_confidence)
    rep.outcome = PeriodicityOutcome::periodic;
  else if (rep.confidence < lost_confidence)
    rep.outcome = PeriodicityOutcome::lost;
  else
    rep.outcome = PeriodicityOutcome::undetermined;
  return rep;
}

}  // namespace tfe
