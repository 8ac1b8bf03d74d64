#pragma once

// Closed-form evaluation of 3F2(1,1,c; d,n+2; 1) and the finite-sum
// identities it is assembled from.

#include <span>

#include "hypsum/hypergeom.hpp"

namespace hypsum {

struct Theorem1Params {
  Complex c{};
  Complex d{};
  int n = 0;

  // Re(d - c + n) > 0
  bool in_domain() const { return (d - c + static_cast<double>(n)).real() > 0.0; }
  // c = d collapses the series to 2F1(1,1;n+2;1).
  bool c_equals_d() const { return std::abs(c - d) <= kPoleTolerance; }
};

enum class LimitMode { error, epsilon_limit };

// How to treat parameters where (1-c)_{n+1} vanishes.
struct LimitPolicy {
  LimitMode mode = LimitMode::error;
  double epsilon = 1e-5;

  void validate() const;
};

/// D_k(n) = k! (psi(n+1) - psi(n+1-k)) = k! (1/(n+1-k) + ... + 1/n), 1 <= k <= n.
double d_coeff(int n, int k);

/// The closed form for 3F2(1,1,c; d,n+2; 1):
///
///   (n+1) Gamma(d) / (1-c)_{n+1} * { (d-c)_n / Gamma(d-1) [psi(d-c+n) - psi(d-1)]
///       - sum_{k=1}^{n} C(n,k) C(n+1-c,k) D_k(n) / Gamma(d-n-1+k) }
///
/// Gamma(d)/Gamma(d-j) is evaluated as the rising factorial (d-j)_j, which
/// vanishes wherever 1/Gamma(d-j) does. For c in {1, ..., n+1} the result is
/// either a RemovableSingularity or, under LimitMode::epsilon_limit, the
/// average of the values at c +/- epsilon with their spread as err_est.
EvalResult theorem1(const Theorem1Params& params, const LimitPolicy& policy = {});

/// Reduced forms for n = 0 and n = 1:
///   n = 0: (d-1)/(1-c) {psi(d-c) - psi(d-1)}
///   n = 1: 2(d-1)(d-c)/(1-c)_2 {psi(d-c+1) - psi(d-1)} + 2(d-1)/(c-1)
Complex special_case(const Theorem1Params& params, const LimitPolicy& policy = {});

/// Two-finite-sum closed form for 3F2(a,c,m; d,m+p; 1), positive integers m, p.
Complex miller_paris(Complex a, Complex c, Complex d, int m, int p);

/// sum_{k=0}^{p-1} (-1)^k C(p-1,k) (1-d)_{k+1} / (1-c)_{k+1}
Complex eval_identity_lhs(Complex c, Complex d, int p);

/// -Gamma(d) Gamma(d-c+p-1) / (Gamma(d-1) Gamma(d-c) (1-c)_p)
Complex eval_identity_rhs(Complex c, Complex d, int p);

struct LimitEstimate {
  Complex value{};
  double err_est = 0.0;
};

/// Polynomial (Richardson/Neville) extrapolation to epsilon = 0 of
/// miller_paris(1 - epsilon, c, d, 1, n + 1) over the given epsilons.
LimitEstimate miller_paris_unit_limit(Complex c, Complex d, int n,
                                      std::span<const double> epsilons);

} // namespace hypsum
