#include "hypsum/special_fns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hypsum/errors.hpp"

namespace hypsum {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * constants::pi);

// B_{2k}, k = 1..16.
constexpr std::array<double, 16> kBernoulliEven = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0};

std::string describe(Complex z) {
  return "(" + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
         std::to_string(z.imag()) + "i)";
}

// sin(pi z) with the integer part removed before scaling, so zeros land
// exactly on the integers.
Complex sinpi(Complex z) {
  const double n = std::round(z.real());
  const Complex s = std::sin(constants::pi * (z - n));
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

Complex cospi(Complex z) {
  const double n = std::round(z.real());
  const Complex c = std::cos(constants::pi * (z - n));
  return std::fmod(n, 2.0) == 0.0 ? c : -c;
}

// Lanczos sum for Gamma(z + 1), Re z >= -1/2.
Complex lanczos_sum(Complex zm1) {
  Complex x = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i)
    x += kLanczosCoeff[i] / (zm1 + static_cast<double>(i));
  return x;
}

double eta_borwein(double s) {
  constexpr int n = 40;
  std::array<double, n + 1> d{};
  double term = 1.0;
  double acc = 1.0;
  d[0] = acc;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i) * (2.0 * i - 1));
    acc += term;
    d[i] = acc;
  }
  double sum = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double w = (d[k] - d[n]) / d[n];
    const double t = w * std::pow(k + 1.0, -s);
    sum += (k % 2 == 0) ? t : -t;
  }
  return -sum;
}

} // namespace

std::optional<long> integer_near(Complex z, double tol) {
  const double n = std::round(z.real());
  if (std::abs(z - n) <= tol)
    return static_cast<long>(n);
  return std::nullopt;
}

std::optional<long> nonpositive_integer_near(Complex z, double tol) {
  auto n = integer_near(z, tol);
  if (n && *n <= 0)
    return n;
  return std::nullopt;
}

Complex cgamma(Complex z) {
  if (nonpositive_integer_near(z))
    throw PoleError("gamma: pole at " + describe(z));
  if (z.real() < 0.5)
    return constants::pi / (sinpi(z) * cgamma(1.0 - z));
  const Complex zm1 = z - 1.0;
  const Complex t = zm1 + kLanczosG + 0.5;
  return std::exp(kLogSqrt2Pi + (zm1 + 0.5) * std::log(t) - t) * lanczos_sum(zm1);
}

Complex clgamma(Complex z) {
  if (nonpositive_integer_near(z))
    throw PoleError("log-gamma: pole at " + describe(z));
  if (z.real() < 0.5)
    return std::log(constants::pi) - std::log(sinpi(z)) - clgamma(1.0 - z);
  const Complex zm1 = z - 1.0;
  const Complex t = zm1 + kLanczosG + 0.5;
  return kLogSqrt2Pi + (zm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(zm1));
}

Complex rgamma(Complex z) {
  if (nonpositive_integer_near(z))
    return 0.0;
  if (z.real() < 0.5)
    return sinpi(z) * cgamma(1.0 - z) / constants::pi;
  return 1.0 / cgamma(z);
}

Complex digamma(Complex z) {
  if (nonpositive_integer_near(z))
    throw PoleError("digamma: pole at " + describe(z));
  if (z.real() < -64.0)
    return digamma(1.0 - z) - constants::pi * cospi(z) / sinpi(z);

  Complex shift = 0.0;
  while (z.real() <= 8.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  // sum_{k=1}^{7} B_{2k} / (2k z^{2k}), Horner in w = 1/z^2.
  const Complex w = 1.0 / (z * z);
  Complex tail = 0.0;
  for (int k = 7; k >= 1; --k)
    tail = (tail + kBernoulliEven[k - 1] / (2.0 * k)) * w;
  return std::log(z) - 0.5 / z - tail + shift;
}

ComplexLD digamma_extended(ComplexLD z) {
  if (nonpositive_integer_near(Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()))))
    throw PoleError("digamma: pole");
  constexpr long double pi = 3.141592653589793238462643383279502884L;
  if (z.real() < -64.0L)
    return digamma_extended(1.0L - z) - pi * std::cos(pi * z) / std::sin(pi * z);

  // B_{2k} as exact ratios so the table carries long double precision.
  constexpr std::array<long double, 7> bernoulli = {
      1.0L / 6.0L, -1.0L / 30.0L, 1.0L / 42.0L, -1.0L / 30.0L,
      5.0L / 66.0L, -691.0L / 2730.0L, 7.0L / 6.0L};
  ComplexLD shift = 0.0L;
  while (z.real() <= 16.0L) {
    shift -= 1.0L / z;
    z += 1.0L;
  }
  const ComplexLD w = 1.0L / (z * z);
  ComplexLD tail = 0.0L;
  for (int k = 7; k >= 1; --k)
    tail = (tail + bernoulli[k - 1] / (2.0L * k)) * w;
  return std::log(z) - 0.5L / z - tail + shift;
}

Complex digamma_over_gamma(Complex z) {
  if (auto m = nonpositive_integer_near(z)) {
    const long mm = -*m;
    const double fact = std::tgamma(static_cast<double>(mm) + 1.0);
    return (mm % 2 == 0) ? -fact : fact;
  }
  return digamma(z) * rgamma(z);
}

Complex pochhammer(Complex a, long k) {
  if (k < 0)
    throw RangeError("pochhammer: negative index");
  Complex p = 1.0;
  for (long j = 0; j < k; ++j)
    p *= a + static_cast<double>(j);
  return p;
}

Complex gen_binomial(Complex x, long k) {
  if (k < 0)
    throw RangeError("binomial: negative index");
  if (auto n = integer_near(x); n && *n >= 0 && *n < k)
    return 0.0;
  Complex p = 1.0;
  for (long j = 0; j < k; ++j)
    p *= (x - static_cast<double>(j)) / static_cast<double>(j + 1);
  return p;
}

double bernoulli_even(int k) {
  if (k < 1 || k > static_cast<int>(kBernoulliEven.size()))
    throw RangeError("bernoulli: index outside table");
  return kBernoulliEven[k - 1];
}

double zeta(double s) {
  if (std::abs(s - 1.0) <= kPoleTolerance)
    throw PoleError("zeta: pole at s=1");
  const double rs = std::round(s);
  if (rs == s && s <= 0.0) {
    if (s == 0.0)
      return -0.5;
    const long is = static_cast<long>(rs);
    if (is % 2 == 0)
      return 0.0;
    const int k = static_cast<int>((1 - is) / 2);
    if (k > static_cast<int>(kBernoulliEven.size()))
      throw RangeError("zeta: negative odd argument below the Bernoulli table");
    return -kBernoulliEven[k - 1] / (2.0 * k);
  }
  if (s >= 0.5)
    return eta_borwein(s) / (1.0 - std::pow(2.0, 1.0 - s));
  // zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
  return std::pow(2.0, s) * std::pow(constants::pi, s - 1.0) *
         std::sin(0.5 * constants::pi * s) * std::tgamma(1.0 - s) * zeta(1.0 - s);
}

SignedLog zeta_odd_signed_log(long s) {
  if (s % 2 == 0)
    throw RangeError("zeta_odd_signed_log: even argument");
  if (s == 1)
    throw PoleError("zeta: pole at s=1");
  if (s >= 3)
    return {std::log(zeta(static_cast<double>(s))), 1};
  // zeta(1-2k) = (-1)^k 2 (2k-1)! zeta(2k) / (2 pi)^(2k)
  const long k = (1 - s) / 2;
  const double two_k = 2.0 * static_cast<double>(k);
  const double log_abs = std::log(2.0) + std::lgamma(two_k) + std::log(zeta(two_k)) -
                         two_k * std::log(2.0 * constants::pi);
  return {log_abs, (k % 2 == 0) ? 1 : -1};
}

namespace detail {

double bessel_j_series(double order, double x) {
  if (x == 0.0)
    return order == 0.0 ? 1.0 : 0.0;
  const double lead = std::exp(order * std::log(0.5 * x) - std::lgamma(order + 1.0));
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (k * (order + k));
    sum += term;
    if (k > 0.5 * x && std::abs(term) < 1e-17 * std::abs(sum))
      break;
  }
  return lead * sum;
}

double bessel_j_hankel(double order, double x) {
  const double mu4 = 4.0 * order * order;
  double p = 0.0;
  double q = 0.0;
  double term = 1.0; // a_j(order) / x^j
  for (int j = 0; j < 16; ++j) {
    const bool flip = ((j / 2) % 2) == 1;
    if (j % 2 == 0)
      p += flip ? -term : term;
    else
      q += flip ? -term : term;
    term *= (mu4 - (2.0 * j + 1) * (2.0 * j + 1)) / (8.0 * (j + 1) * x);
    if (std::abs(term) < 1e-18)
      break;
  }
  const double chi = x - (0.5 * order + 0.25) * constants::pi;
  return std::sqrt(2.0 / (constants::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace detail

double bessel_j(double order, double x) {
  if (!(order >= 0.0) || !(x >= 0.0))
    throw DomainError("bessel_j: order and argument must be non-negative");
  if (x <= 12.0)
    return detail::bessel_j_series(order, x);
  if (order <= 5.0)
    return detail::bessel_j_hankel(order, x);

  const double base = order - std::floor(order);
  const long steps = static_cast<long>(std::floor(order));
  // Forward recurrence is stable while the order stays below x.
  const long forward_steps = std::min(steps, static_cast<long>(std::floor(x)));
  double prev = detail::bessel_j_hankel(base, x);
  double cur = detail::bessel_j_hankel(base + 1.0, x);
  if (steps == 0)
    return prev;
  for (long j = 1; j < forward_steps; ++j) {
    const double next = 2.0 * (base + j) / x * cur - prev;
    prev = cur;
    cur = next;
  }
  if (forward_steps == steps)
    return cur;

  // Miller backward recurrence from well above the target order, scaled to
  // the forward values at orders base+forward_steps-1 and base+forward_steps.
  const long top = steps + 40 + static_cast<long>(x);
  double upper = 0.0;
  double lower = 1e-200;
  double at_target = 0.0;
  double at_fwd = 0.0;
  double at_fwd_minus = 0.0;
  for (long j = top; j >= forward_steps; --j) {
    // lower holds the order base+j value.
    if (j == steps)
      at_target = lower;
    if (j == forward_steps)
      at_fwd = lower;
    const double next = 2.0 * (base + j) / x * lower - upper;
    upper = lower;
    lower = next;
    if (j - 1 == forward_steps - 1)
      at_fwd_minus = lower;
    if (std::abs(lower) > 1e200) {
      upper *= 1e-200;
      lower *= 1e-200;
      at_target *= 1e-200;
      at_fwd *= 1e-200;
      at_fwd_minus *= 1e-200;
    }
  }
  const double scale =
      (cur * at_fwd + prev * at_fwd_minus) / (at_fwd * at_fwd + at_fwd_minus * at_fwd_minus);
  return scale * at_target;
}

} // namespace hypsum
