#include "hypsum/bessel_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hypsum/errors.hpp"

namespace hypsum {

namespace {

constexpr int kMaxExpansionTerms = 200;
constexpr long kCancelStride = 10'000;
constexpr double kBoundaryFlag = 1e-9;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double psi(double x) { return digamma(x).real(); }

// Sign and log-magnitude of A_m.
SignedLog a_coeff_log(const BesselSumParams& p, int m) {
  const long zeta_arg = 2L * p.n + 1 - 2L * m;
  const SignedLog z = zeta_odd_signed_log(zeta_arg);
  const double s = p.mu + p.nu;
  const double log_abs = std::lgamma(1.0 + s + 2.0 * m) + z.log_abs - std::lgamma(m + 1.0) -
                         std::lgamma(1.0 + p.mu + m) - std::lgamma(1.0 + p.nu + m) -
                         std::lgamma(1.0 + s + m);
  return {log_abs, (m % 2 == 0 ? 1 : -1) * z.sign};
}

// Sign and log-magnitude of B_m, F_m included.
SignedLog b_coeff_log(const BesselSumParams& p, int m, double chi) {
  const long zeta_arg = 2L * p.n + 1 - 2L * m;
  const SignedLog z = zeta_odd_signed_log(zeta_arg);
  const double f = f_poly(p, m, chi);
  const double log_abs =
      z.log_abs - std::lgamma(m + 1.0) - std::lgamma(1.0 + p.mu + m) + std::log(std::abs(f));
  int sign = (m % 2 == 0 ? 1 : -1) * z.sign;
  if (f < 0)
    sign = -sign;
  return {log_abs, f == 0.0 ? 0 : sign};
}

double to_value(const SignedLog& v, double extra_log = 0.0) {
  return v.sign == 0 ? 0.0 : v.sign * std::exp(v.log_abs + extra_log);
}

// Sums special + sum_{m != n} terms(m) with the three-consecutive-small-terms
// stopping rule and a geometric estimate of what was left out.
template <class TermFn>
ExpansionResult sum_expansion(int n, double special, double rel_tol, TermFn&& term_at) {
  ExpansionResult r;
  double acc = special;
  int small_run = 0;
  double last = 0.0;
  double before_last = 0.0;
  int m = 0;
  for (; m < kMaxExpansionTerms; ++m) {
    if (m == n)
      continue;
    const double t = term_at(m);
    acc += t;
    ++r.terms_used;
    before_last = last;
    last = t;
    small_run = (std::abs(t) < rel_tol * std::abs(acc)) ? small_run + 1 : 0;
    if (small_run >= 3)
      break;
  }
  const double rho = before_last != 0.0 ? std::abs(last / before_last) : 0.0;
  if (rho < 1.0)
    r.truncation_est = std::abs(last) * rho / (1.0 - rho);
  else
    r.truncation_est = std::abs(last) * kMaxExpansionTerms;
  r.value = acc;
  return r;
}

double log_gamma_ratio_n_terms(const BesselSumParams& p) {
  // log of Gamma(alpha) / (Gamma(n+1+mu) Gamma(n+1+nu) Gamma(n+1+mu+nu) n!)
  return std::lgamma(p.alpha()) - std::lgamma(p.n + 1.0 + p.mu) - std::lgamma(p.n + 1.0 + p.nu) -
         std::lgamma(p.n + 1.0 + p.mu + p.nu) - std::lgamma(p.n + 1.0);
}

long double psi_ld(long double x) { return digamma_extended(x).real(); }

long double rising_ld(long double x, int j) {
  long double p = 1.0L;
  for (int i = 0; i < j; ++i)
    p *= x + i;
  return p;
}

long double binomial_ld(long double x, int k) {
  long double p = 1.0L;
  for (int i = 0; i < k; ++i)
    p *= (x - i) / (i + 1);
  return p;
}

// k! (H_n - H_{n-k}) + k! (psi(n+1+mu) - psi(n+1+mu-k)) in long double.
long double cal_d_coeff_ld(int n, int k, long double mu) {
  long double harmonic = 0.0L, shifted = 0.0L, factorial = 1.0L;
  for (int j = n + 1 - k; j <= n; ++j)
    harmonic += 1.0L / j;
  for (int j = 0; j < k; ++j)
    shifted += 1.0L / (n + 1 + mu - k + j);
  for (int j = 2; j <= k; ++j)
    factorial *= j;
  return factorial * (harmonic + shifted);
}

// The bracket cancels to O((mu)_{n+1}) as mu -> 0, so it is formed in long double.
double eq24_raw(double mu_in, double nu_in, int n) {
  const long double mu = mu_in, nu = nu_in, nd = n;
  const long double alpha = mu + nu + 2.0L * nd + 1.0L;
  const long double brace = 2.0L * psi_ld(alpha) - psi_ld(1.0L + nu + nd) - psi_ld(1.0L + mu + nu + nd);
  const long double head = rising_ld(1.0L + mu + nu + nd, n) / rising_ld(1.0L + nu, n) * brace;
  long double finite = 0.0L;
  for (int k = 1; k <= n; ++k)
    finite += binomial_ld(nd, k) * binomial_ld(nd + mu, k) * cal_d_coeff_ld(n, k, mu) /
              rising_ld(1.0L + nu, k);
  const long double prefactor = (nd + 1.0L) * rising_ld(1.0L + nu, n + 1) / rising_ld(mu, n + 1);
  return static_cast<double>(prefactor * (head - finite));
}

} // namespace

void BesselSumParams::validate() const {
  if (!(mu >= 0.0) || !(nu >= 0.0))
    throw DomainError("Bessel sum: mu and nu must be >= 0");
  if (!(a > 0.0) || !(b > 0.0))
    throw DomainError("Bessel sum: a and b must be > 0");
  if (n < 0)
    throw DomainError("Bessel sum: n must be >= 0");
}

BesselSumParams BesselSumParams::from_alpha(double mu, double nu, double a, double b,
                                            double alpha) {
  const double theta = alpha - mu - nu;
  const auto odd = integer_near(theta);
  if (!odd || *odd < 1 || *odd % 2 == 0)
    throw DomainError("Bessel sum: alpha - mu - nu must be an odd positive integer");
  BesselSumParams p{mu, nu, a, b, static_cast<int>((*odd - 1) / 2)};
  p.validate();
  return p;
}

ExpansionResult s_direct(const BesselSumParams& params, long terms, std::stop_token stop) {
  params.validate();
  if (terms < 1000)
    throw RangeError("s_direct: at least 1000 terms required");
  const double alpha = params.alpha();
  const bool equal = params.a == params.b;
  const double smooth =
      equal ? std::cos(0.5 * (params.mu - params.nu) * constants::pi) / (constants::pi * params.a)
            : 0.0;

  double sum = 0.0;
  double comp = 0.0;
  const long block_start = terms / 2;
  // Block values are accumulated relative to the first one in the block so
  // the mean does not pick up O(terms * eps) rounding.
  double anchor = 0.0;
  double block_sum = 0.0;
  double block_min = std::numeric_limits<double>::infinity();
  double block_max = -std::numeric_limits<double>::infinity();

  for (long m = 1; m <= terms; ++m) {
    if (m % kCancelStride == 0 && stop.stop_requested())
      throw Cancelled("s_direct: cancelled");
    const double md = static_cast<double>(m);
    const double ju = bessel_j(params.mu, params.a * md);
    const double jv = (equal && params.mu == params.nu) ? ju : bessel_j(params.nu, params.b * md);
    const double t = ju * jv * std::pow(md, -alpha);
    const double s = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
    sum = s;
    if (m > block_start) {
      const double corrected = sum + comp + smooth * std::pow(md + 0.5, -alpha) / alpha;
      if (m == block_start + 1)
        anchor = corrected;
      block_sum += corrected - anchor;
      block_min = std::min(block_min, corrected);
      block_max = std::max(block_max, corrected);
    }
  }

  const double lambda =
      std::pow(2.0, params.mu + params.nu) / (std::pow(params.a, params.mu) * std::pow(params.b, params.nu));
  ExpansionResult r;
  r.value = lambda * (anchor + block_sum / static_cast<double>(terms - block_start));
  r.truncation_est = lambda * (block_max - block_min);
  r.terms_used = terms;
  return r;
}

double a_coeff(const BesselSumParams& params, int m) {
  params.validate();
  if (m < 0 || m == params.n)
    throw RangeError("A_m: m must be >= 0 and differ from n");
  return to_value(a_coeff_log(params, m));
}

double f_poly(const BesselSumParams& params, int m, double chi) {
  if (m < 0)
    throw RangeError("F_m: m must be >= 0");
  const EvalResult r =
      sum_2f1(-static_cast<double>(m), -m - params.mu, 1.0 + params.nu, chi);
  return r.value.real();
}

double b_coeff(const BesselSumParams& params, int m, double chi) {
  params.validate();
  if (m < 0 || m == params.n)
    throw RangeError("B_m: m must be >= 0 and differ from n");
  return to_value(b_coeff_log(params, m, chi));
}

double upsilon(const BesselSumParams& p) {
  p.validate();
  const double n1 = p.n + 1.0;
  return constants::euler_gamma - std::log(0.5 * p.a) - psi(p.alpha()) +
         0.5 * (psi(n1) + psi(n1 + p.mu) + psi(n1 + p.nu) + psi(n1 + p.mu + p.nu));
}

double upsilon_hat(const BesselSumParams& p) {
  p.validate();
  const double n1 = p.n + 1.0;
  return constants::euler_gamma - std::log(0.5 * p.a) + 0.5 * psi(n1 + p.mu) + 0.5 * psi(n1);
}

double cal_d_coeff(int n, int k, double mu) {
  if (k < 1 || k > n)
    throw RangeError("cal_D_k(n, mu): k outside [1, n]");
  const double base = n + 1.0 + mu - k;
  if (nonpositive_integer_near(base))
    throw PoleError("cal_D_k(n, mu): psi pole");
  // psi(base + k) - psi(base) as a finite harmonic sum
  double shifted = 0.0;
  for (int j = 0; j < k; ++j)
    shifted += 1.0 / (base + j);
  return d_coeff(n, k) + std::tgamma(k + 1.0) * shifted;
}

EvalResult delta_n(const BesselSumParams& params, double chi, const SeriesConfig& cfg,
                   DeltaRoute route) {
  params.validate();
  if (!(chi > 0.0 && chi <= 1.0))
    throw DomainError("Delta_n: chi must lie in (0, 1]");
  if (route != DeltaRoute::series && chi != 1.0)
    throw DomainError("Delta_n: closed-form routes need chi = 1");

  const int n = params.n;
  const double mu = params.mu;
  const double nu = params.nu;

  if (route == DeltaRoute::closed_form_at_1) {
    EvalResult r;
    r.value = delta_n_at_1_closed(params);
    r.err_est = 64.0 * kEps * std::abs(r.value);
    r.converged = true;
    return r;
  }

  double finite = 0.0;
  double magnitude = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double t = gen_binomial(n, k).real() * gen_binomial(n + mu, k).real() *
                     cal_d_coeff(n, k, mu) * std::pow(chi, k) / pochhammer(1.0 + nu, k).real();
    finite += t;
    magnitude += std::abs(t);
  }

  const double prefactor = pochhammer(mu, n + 1).real() * std::pow(chi, n + 1) /
                           (pochhammer(1.0 + nu, n + 1).real() * (n + 1.0));
  EvalResult r;
  r.converged = true;
  Complex hyper = 0.0;
  if (prefactor != 0.0) {
    EvalResult h;
    if (route == DeltaRoute::theorem1)
      h = theorem1({1.0 - mu, n + nu + 2.0, n});
    else
      h = sum_3f2(1.0, 1.0, 1.0 - mu, n + nu + 2.0, n + 2.0, chi, cfg);
    hyper = h.value;
    r.err_est = std::abs(prefactor) * h.err_est;
    r.converged = h.converged;
    r.terms_used = h.terms_used;
  }
  r.value = finite + prefactor * hyper.real();
  r.err_est += 16.0 * kEps * (magnitude + std::abs(prefactor * hyper));
  r.terms_used += n;
  return r;
}

double delta_n_at_1_closed(const BesselSumParams& p) {
  p.validate();
  const double n = p.n;
  const double alpha = p.alpha();
  const double ratio = std::exp(std::lgamma(alpha) + std::lgamma(1.0 + p.nu) -
                                std::lgamma(1.0 + p.nu + n) - std::lgamma(1.0 + p.mu + p.nu + n));
  return ratio * (2.0 * psi(alpha) - psi(1.0 + p.nu + n) - psi(1.0 + p.mu + p.nu + n));
}

ExpansionResult expansion_equal(const BesselSumParams& params, const SeriesConfig& cfg) {
  params.validate();
  cfg.validate();
  if (params.a != params.b)
    throw DomainError("expansion_equal: requires a = b");
  if (params.a > constants::pi)
    throw DomainError("expansion_equal: requires 0 < a <= pi");

  const int n = params.n;
  const double log_half_a = std::log(0.5 * params.a);
  const double special = (n % 2 == 0 ? 1.0 : -1.0) *
                         std::exp(2.0 * n * log_half_a + log_gamma_ratio_n_terms(params)) *
                         upsilon(params);
  ExpansionResult r = sum_expansion(n, special, cfg.rel_tol, [&](int m) {
    return to_value(a_coeff_log(params, m), 2.0 * m * log_half_a);
  });
  r.near_boundary = std::abs(params.a - constants::pi) <= kBoundaryFlag;
  return r;
}

ExpansionResult expansion_unequal(const BesselSumParams& params, const SeriesConfig& cfg,
                                  DeltaRoute route) {
  params.validate();
  cfg.validate();
  if (params.b > params.a)
    throw DomainError("expansion_unequal: requires a >= b");
  if (params.a + params.b > 2.0 * constants::pi)
    throw DomainError("expansion_unequal: requires a + b <= 2 pi");

  const int n = params.n;
  const double chi = params.chi();
  const double log_half_a = std::log(0.5 * params.a);
  const double log_gamma_nu = std::lgamma(1.0 + params.nu);

  const double delta = delta_n(params, chi, cfg, route).value.real();
  const double bracket = upsilon_hat(params) * f_poly(params, n, chi) - 0.5 * delta;
  const double special = (n % 2 == 0 ? 1.0 : -1.0) *
                         std::exp(2.0 * n * log_half_a - log_gamma_nu -
                                  std::lgamma(n + 1.0 + params.mu) - std::lgamma(n + 1.0)) *
                         bracket;
  ExpansionResult r = sum_expansion(n, special, cfg.rel_tol, [&](int m) {
    return to_value(b_coeff_log(params, m, chi), 2.0 * m * log_half_a - log_gamma_nu);
  });
  r.near_boundary = std::abs(params.a + params.b - 2.0 * constants::pi) <= kBoundaryFlag;
  return r;
}

double eq24_3f2(const BesselSumParams& params, const LimitPolicy& policy) {
  policy.validate();
  if (!(params.nu >= 0.0) || params.n < 0)
    throw DomainError("eq24: nu >= 0 and n >= 0 required");
  const double mu = params.mu;
  if (std::abs(mu) <= kPoleTolerance) {
    if (policy.mode == LimitMode::error)
      throw RemovableSingularity("eq24: (mu)_{n+1} = 0; use the epsilon limit policy");
    return 0.5 * (eq24_raw(mu + policy.epsilon, params.nu, params.n) +
                  eq24_raw(mu - policy.epsilon, params.nu, params.n));
  }
  if (mu < 0.0)
    throw DomainError("eq24: mu must be >= 0");
  return eq24_raw(mu, params.nu, params.n);
}

std::pair<Complex, Complex> psi_removal_identity(Complex c, Complex d, int n) {
  if (n < 0)
    throw RangeError("psi removal identity: n must be >= 0");
  const double nd = n;
  Complex lhs = 0.0;
  for (int k = 1; k <= n; ++k) {
    lhs += gen_binomial(nd, k) * gen_binomial(nd + 1.0 - c, k) * std::tgamma(k + 1.0) *
           (digamma(nd + 2.0 - c) - digamma(nd + 2.0 - c - static_cast<double>(k))) *
           rgamma(d - nd - 1.0 + static_cast<double>(k));
  }
  const Complex rhs =
      pochhammer(d - c, n) * rgamma(d - 1.0) * (digamma(d - c + nd) - digamma(d - c));
  return {lhs, rhs};
}

std::pair<Complex, Complex> psi_removal_identity(const BesselSumParams& params) {
  params.validate();
  return psi_removal_identity(1.0 - params.mu, params.n + params.nu + 2.0, params.n);
}

} // namespace hypsum
