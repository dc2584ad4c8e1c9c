#include "tfe/similarity.hpp"

#include <cmath>
#include <stdexcept>

namespace tfe {

std::string to_string(Sign s) {
  return s == Sign::focusing ? "focusing" : "defocusing";
}

SimilarityParams derive_params(double n, int N, double alpha, Sign sign) {
  if (!(n >= 0.0) || n >= 2.0)
    throw std::invalid_argument("mobility exponent n must lie in [0,2); for n >= 2 "
                                "solutions stay strictly positive and no focusing occurs");
  if (N < 1) throw std::invalid_argument("spatial dimension N must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

  SimilarityParams p;
  p.n = n;
  p.N = N;
  p.alpha = alpha;
  p.beta = (1.0 + alpha * n) / 4.0;
  p.mu = alpha / p.beta;  // = 4 alpha / (1 + alpha n), always below 4/n for n > 0
  p.sign = sign;
  return p;
}

double regularized_mobility(double f, double n, double delta) {
  if (n == 0.0) return 1.0;
  return std::pow(f * f + delta * delta, 0.5 * n);
}

AnsatzPoint reconstruct_solution(const SimilarityParams& p, double f_value,
                                 double y, double t) {
  if (t == 0.0)
    throw std::invalid_argument("t = 0 is the focusing instant; use focusing_trace");
  const double T = (p.sign == Sign::focusing) ? -t : t;
  if (T <= 0.0)
    throw std::invalid_argument("time sign does not match the similarity branch");
  return {y * std::pow(T, p.beta), std::pow(T, p.alpha) * f_value};
}

double focusing_trace(double C, double mu, double r) {
  return C * std::pow(r, mu);
}

}  // namespace tfe
