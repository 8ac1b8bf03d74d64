#pragma once

// Schlomilch-type sums
//
//   S(a,b) = Lambda * sum_{m>=1} J_mu(a m) J_nu(b m) / m^alpha,
//   Lambda = 2^(mu+nu) / (a^mu b^nu),
//
// in the logarithmic case alpha - mu - nu = 2n + 1, by brute force and by
// the two convergent small-argument expansions (equal and unequal
// arguments), together with their coefficient machinery.

#include <stop_token>
#include <utility>

#include "hypsum/closed_form.hpp"

namespace hypsum {

struct BesselSumParams {
  double mu = 0.0;
  double nu = 0.0;
  double a = 1.0;
  double b = 1.0;
  int n = 0;

  double alpha() const { return mu + nu + 2.0 * n + 1.0; }
  double chi() const { return (b * b) / (a * a); }

  void validate() const;

  /// Builds parameters from an explicit alpha; alpha - mu - nu must be an
  /// odd positive integer 2n+1, anything else is refused with DomainError.
  static BesselSumParams from_alpha(double mu, double nu, double a, double b, double alpha);
};

struct ExpansionResult {
  double value = 0.0;
  long terms_used = 0;
  double truncation_est = 0.0;
  // Set when the argument lies within 1e-9 of the closed region's edge
  // (a = pi for equal arguments, a + b = 2 pi otherwise).
  bool near_boundary = false;
};

/// Brute-force partial sum over m = 1..M plus the smooth (non-oscillating)
/// asymptotic tail, averaged over the final dyadic block (M/2, M].
/// truncation_est is the spread of the corrected partial sums over that
/// block. Checks the stop token every 10^4 terms and throws Cancelled.
ExpansionResult s_direct(const BesselSumParams& params, long terms,
                         std::stop_token stop = {});

/// A_m of the equal-argument expansion (m != n).
double a_coeff(const BesselSumParams& params, int m);

/// F_m(mu, chi) = 2F1(-m, -m-mu; 1+nu; chi), by terminating summation.
double f_poly(const BesselSumParams& params, int m, double chi);

/// B_m of the unequal-argument expansion (m != n), at the given chi.
double b_coeff(const BesselSumParams& params, int m, double chi);

double upsilon(const BesselSumParams& params);
double upsilon_hat(const BesselSumParams& params);

/// D_k(n) + k! (psi(n+1+mu) - psi(n+1+mu-k)), 1 <= k <= n.
double cal_d_coeff(int n, int k, double mu);

enum class DeltaRoute {
  series,           // 3F2(chi) by direct summation
  theorem1,         // at chi = 1 the 3F2 from the closed form with c=1-mu, d=n+nu+2
  closed_form_at_1  // whole of Delta_n(1) from its gamma/psi closed form
};

/// Delta_n(chi): finite k-sum plus the 3F2(1,1,1-mu; n+nu+2, n+2; chi) term.
EvalResult delta_n(const BesselSumParams& params, double chi, const SeriesConfig& cfg = {},
                   DeltaRoute route = DeltaRoute::series);

/// Delta_n(1) = Gamma(alpha) Gamma(1+nu) / (Gamma(1+nu+n) Gamma(1+mu+nu+n))
///              * {2 psi(alpha) - psi(1+nu+n) - psi(1+mu+nu+n)}
double delta_n_at_1_closed(const BesselSumParams& params);

/// Equal-argument expansion, 0 < a <= pi.
ExpansionResult expansion_equal(const BesselSumParams& params, const SeriesConfig& cfg = {});

/// Unequal-argument expansion, a >= b > 0 and a + b <= 2 pi. b = a is
/// accepted as the chi = 1 limit.
ExpansionResult expansion_unequal(const BesselSumParams& params, const SeriesConfig& cfg = {},
                                  DeltaRoute route = DeltaRoute::series);

/// Closed form for 3F2(1,1,1-mu; n+nu+2, n+2; 1). mu = 0 is a removable
/// singularity handled by the limit policy.
double eq24_3f2(const BesselSumParams& params, const LimitPolicy& policy = {});

/// Both sides of
///   sum_k C(n,k) C(n+1-c,k) k! {psi(n+2-c) - psi(n+2-c-k)} / Gamma(d-n-1+k)
///     = (d-c)_n / Gamma(d-1) {psi(d-c+n) - psi(d-c)}.
std::pair<Complex, Complex> psi_removal_identity(Complex c, Complex d, int n);

/// As above with c = 1 - mu, d = n + nu + 2.
std::pair<Complex, Complex> psi_removal_identity(const BesselSumParams& params);

} // namespace hypsum
