#ifndef TFE_ROOTFIND_HPP
#define TFE_ROOTFIND_HPP

#include <cmath>
#include <stdexcept>
#include <utility>

namespace tfe {

// Safeguarded secant on a sign-change bracket; bisects whenever the secant
// proposal leaves the interval or stalls.
template <class F>
double find_root(F&& f, double lo, double hi, double flo, double fhi,
                 double xtol, int max_iter = 100) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::invalid_argument("find_root: not a bracket");
  for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    double mid = lo + 0.5 * (hi - lo);
    if (fhi != flo) {
      const double sec = lo - flo * (hi - lo) / (fhi - flo);
      if (sec > lo + 0.1 * xtol && sec < hi - 0.1 * xtol) mid = sec;
    }
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Golden-section minimum of f on [lo, hi] to interval width xtol.
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double xtol,
                                     int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace tfe

#endif
