#ifndef TFE_SIMILARITY_HPP
#define TFE_SIMILARITY_HPP

#include <string>

namespace tfe {

enum class Sign { focusing, defocusing };

std::string to_string(Sign s);

// Exponent tuple of the radial self-similar ansatz
//   u(r,t) = (-t)^alpha f(y),  y = r (-t)^{-beta}   (focusing, t < 0)
//   u(r,t) = (+t)^alpha f(y),  y = r (+t)^{-beta}   (defocusing, t > 0)
// The single source of truth for all scalings:
//   beta = (1 + alpha n)/4,  mu = alpha/beta = 4 alpha/(1 + alpha n).
struct SimilarityParams {
  double n;      // mobility exponent, 0 <= n < 2
  int N;         // spatial dimension, >= 1
  double alpha;  // eigenvalue candidate, > 0
  double beta;   // (1 + alpha n)/4
  double mu;     // minimal-growth exponent alpha/beta
  Sign sign;
};

// Validates the inputs and fills the derived exponents.
// Throws std::invalid_argument for n outside [0,2), alpha <= 0, N < 1.
SimilarityParams derive_params(double n, int N, double alpha, Sign sign);

// (f^2 + delta^2)^{n/2}; equals |f|^n at delta = 0.
double regularized_mobility(double f, double n, double delta);

// Self-similar ansatz evaluated at one profile point: given f(y) = f_value,
// returns the physical radius r = y |t|^beta and value u = |t|^alpha f(y).
// t must be negative for focusing parameters and positive for defocusing.
struct AnsatzPoint {
  double r;
  double u;
};
AnsatzPoint reconstruct_solution(const SimilarityParams& p, double f_value,
                                 double y, double t);

// Focusing trace u(r, 0^-) = C r^mu left behind by a minimal-growth profile.
double focusing_trace(double C, double mu, double r);

}  // namespace tfe

#endif
