#pragma once

// Scalar special-function kernels: complex gamma family, digamma,
// Pochhammer symbols, generalized binomials, Riemann zeta and Bessel J.
//
// All functions are pure and reentrant.

#include <complex>
#include <optional>

namespace hypsum {

using Complex = std::complex<double>;

namespace constants {
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double log2 = 0.69314718055994530942;
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

// Arguments closer than this to a non-positive integer are treated as
// sitting on the pole.
inline constexpr double kPoleTolerance = 1e-12;

// Returns -N when z is within kPoleTolerance of the non-positive integer -N.
std::optional<long> nonpositive_integer_near(Complex z, double tol = kPoleTolerance);

// Returns N when z is within tol of the integer N (any sign).
std::optional<long> integer_near(Complex z, double tol = kPoleTolerance);

/// Gamma function. Lanczos (g=7, 9 terms) for Re z >= 1/2, reflection below.
/// Throws PoleError at non-positive integers.
Complex cgamma(Complex z);

/// log Gamma(z) on a branch that is only meaningful up to multiples of 2*pi*i
/// in the imaginary part; intended for exp() of sums and differences.
Complex clgamma(Complex z);

/// 1/Gamma(z); entire, exactly 0 at the poles of Gamma.
Complex rgamma(Complex z);

/// Digamma psi(z) = Gamma'(z)/Gamma(z).
///
/// Upward recurrence psi(z) = psi(z+1) - 1/z until Re z > 8, then the
/// asymptotic series with Bernoulli terms through B14. Far left of the
/// imaginary axis the reflection formula is used instead of the recurrence.
Complex digamma(Complex z);

using ComplexLD = std::complex<long double>;

/// Digamma in long double for closed forms whose brackets cancel.
/// Recurrence to Re z > 16, asymptotic series through B14.
ComplexLD digamma_extended(ComplexLD z);

/// psi(z)/Gamma(z) = -(1/Gamma)'(z); entire, equal to (-1)^(m+1) m! at z = -m.
Complex digamma_over_gamma(Complex z);

/// Rising factorial (a)_k by direct product.
Complex pochhammer(Complex a, long k);

/// Generalized binomial coefficient x(x-1)...(x-k+1)/k!.
Complex gen_binomial(Complex x, long k);

/// Riemann zeta for real s != 1.
///
/// s > 1/2: Borwein's accelerated alternating (eta) series.
/// Negative odd integers down to -31: exact Bernoulli table.
/// Other s < 1/2: functional equation. Throws PoleError at s = 1 and
/// RangeError for negative odd integers below -31.
double zeta(double s);

// Sign and log-magnitude of a real value; used for quantities that
// overflow double precision before they are combined.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1; // 0 when the value is exactly zero
};

/// zeta(s) for odd integer s != 1 as a signed logarithm. Valid for
/// arbitrarily negative s (functional equation in log space).
SignedLog zeta_odd_signed_log(long s);

/// Bernoulli number B_{2k} for 1 <= k <= 16.
double bernoulli_even(int k);

/// Bessel function of the first kind, real order >= 0, real x >= 0.
///
/// Ascending series for x <= 12, Hankel asymptotic expansion (8 terms each
/// of P and Q) above. Orders above 5 on the asymptotic side are reached by
/// three-term recurrence from the fractional base order.
double bessel_j(double order, double x);

namespace detail {
double bessel_j_series(double order, double x);
double bessel_j_hankel(double order, double x);
} // namespace detail

} // namespace hypsum
