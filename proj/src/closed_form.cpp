#include "hypsum/closed_form.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hypsum/errors.hpp"

namespace hypsum {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// (x)_j, refusing the case where one of its factors is a zero.
Complex nonzero_pochhammer(Complex x, long j, const char* what) {
  if (auto n = nonpositive_integer_near(x); n && -*n < j)
    throw PoleError(std::string(what) + ": vanishing Pochhammer denominator");
  return pochhammer(x, j);
}

// (d-1) psi(d-1), continuous through d = 1 where it equals -1.
Complex shifted_digamma_product(Complex d) {
  const Complex q = d - 1.0;
  if (std::abs(q) <= kPoleTolerance)
    return -1.0;
  return q * digamma(q);
}

bool removable_point(Complex c, int n) {
  // (1-c)_{n+1} = 0  <=>  c in {1, ..., n+1}
  auto k = integer_near(c);
  return k && *k >= 1 && *k <= n + 1;
}

void check_theorem1_domain(const Theorem1Params& p) {
  if (p.n < 0)
    throw RangeError("n must be >= 0");
  if (!p.in_domain())
    throw DomainError("Re(d-c+n) <= 0");
  if (nonpositive_integer_near(p.d))
    throw PoleError("d is a non-positive integer");
}

ComplexLD widen(Complex z) { return {z.real(), z.imag()}; }

Complex narrow(ComplexLD z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

ComplexLD rising_ld(ComplexLD x, long j) {
  ComplexLD p = 1.0L;
  for (long i = 0; i < j; ++i)
    p *= x + static_cast<long double>(i);
  return p;
}

ComplexLD binomial_ld(ComplexLD x, long k) {
  ComplexLD p = 1.0L;
  for (long i = 0; i < k; ++i)
    p *= (x - static_cast<long double>(i)) / static_cast<long double>(i + 1);
  return p;
}

long double d_coeff_ld(int n, int k) {
  long double harmonic = 0.0L, factorial = 1.0L;
  for (int j = n + 1 - k; j <= n; ++j)
    harmonic += 1.0L / j;
  for (int j = 2; j <= k; ++j)
    factorial *= j;
  return factorial * harmonic;
}

// The bracket cancels to O((1-c)_{n+1}) near c in {1..n+1}; it is formed in
// long double so the division by the prefactor keeps double accuracy.
EvalResult theorem1_raw(Complex c_in, Complex d_in, int n) {
  constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();
  const ComplexLD c = widen(c_in), d = widen(d_in);
  const long double nd = n;
  const ComplexLD prefactor = (nd + 1.0L) / rising_ld(1.0L - c, n + 1);

  const ComplexLD rise = rising_ld(d - c, n);
  const ComplexLD head_a = rise * (d - 1.0L) * digamma_extended(d - c + nd);
  const ComplexLD q = d - 1.0L;
  const ComplexLD head_b =
      rise * (std::abs(d_in - 1.0) <= kPoleTolerance ? ComplexLD(-1.0L) : q * digamma_extended(q));
  ComplexLD brace = head_a - head_b;
  long double magnitude = std::abs(head_a) + std::abs(head_b);

  for (int k = 1; k <= n; ++k) {
    const ComplexLD term = binomial_ld(nd, k) * binomial_ld(nd + 1.0L - c, k) * d_coeff_ld(n, k) *
                           rising_ld(d - nd - 1.0L + static_cast<long double>(k), n + 1 - k);
    brace -= term;
    magnitude += std::abs(term);
  }

  EvalResult r;
  r.value = narrow(prefactor * brace);
  r.err_est = static_cast<double>(16.0L * eps_ld * (n + 2) * std::abs(prefactor) * magnitude) +
              kEps * std::abs(r.value);
  r.terms_used = n + 1;
  r.converged = true;
  return r;
}

template <class Fn>
EvalResult epsilon_average(Complex c, const LimitPolicy& policy, Fn&& eval) {
  const Complex up = eval(c + policy.epsilon);
  const Complex down = eval(c - policy.epsilon);
  EvalResult r;
  r.value = 0.5 * (up + down);
  r.err_est = std::abs(up - down);
  r.converged = true;
  return r;
}

Complex special_case_raw(Complex c, Complex d, int n) {
  if (n == 0)
    return ((d - 1.0) * digamma(d - c) - shifted_digamma_product(d)) / (1.0 - c);
  const Complex head = 2.0 * (d - c) / pochhammer(1.0 - c, 2) *
                       ((d - 1.0) * digamma(d - c + 1.0) - shifted_digamma_product(d));
  return head + 2.0 * (d - 1.0) / (c - 1.0);
}

} // namespace

void LimitPolicy::validate() const {
  if (mode == LimitMode::epsilon_limit && !(epsilon >= 1e-8 && epsilon <= 1e-3))
    throw DomainError("limit policy: epsilon must lie in [1e-8, 1e-3]");
}

double d_coeff(int n, int k) {
  if (k < 1 || k > n)
    throw RangeError("D_k(n): k outside [1, n]");
  double harmonic = 0.0;
  for (int j = n + 1 - k; j <= n; ++j)
    harmonic += 1.0 / j;
  return std::tgamma(k + 1.0) * harmonic;
}

EvalResult theorem1(const Theorem1Params& params, const LimitPolicy& policy) {
  policy.validate();
  check_theorem1_domain(params);
  const int n = params.n;

  if (n >= 1 && params.c_equals_d()) {
    // 3F2(1,1,c; c,n+2; 1) = 2F1(1,1; n+2; 1)
    EvalResult r;
    r.value = gauss_sum_2f1_unit(1.0, 1.0, n + 2.0);
    r.err_est = 16.0 * kEps * std::abs(r.value);
    r.converged = true;
    return r;
  }

  if (removable_point(params.c, n)) {
    if (policy.mode == LimitMode::error)
      throw RemovableSingularity("(1-c)_{n+1} = 0; use the epsilon limit policy");
    auto r = epsilon_average(params.c, policy,
                             [&](Complex c) { return theorem1_raw(c, params.d, n).value; });
    r.terms_used = 2 * (n + 1);
    return r;
  }
  return theorem1_raw(params.c, params.d, n);
}

Complex special_case(const Theorem1Params& params, const LimitPolicy& policy) {
  policy.validate();
  if (params.n != 0 && params.n != 1)
    throw RangeError("special_case: n must be 0 or 1");
  check_theorem1_domain(params);
  if (removable_point(params.c, params.n)) {
    if (policy.mode == LimitMode::error)
      throw RemovableSingularity("(1-c)_{n+1} = 0; use the epsilon limit policy");
    return epsilon_average(params.c, policy, [&](Complex c) {
             return special_case_raw(c, params.d, params.n);
           }).value;
  }
  return special_case_raw(params.c, params.d, params.n);
}

Complex miller_paris(Complex a, Complex c, Complex d, int m, int p) {
  if (m < 1 || p < 1)
    throw RangeError("miller_paris: m and p must be positive integers");
  if (std::abs(a - 1.0) <= kPoleTolerance)
    throw PoleError("miller_paris: a = 1 (take the limit through theorem1)");
  const Complex excess = d + static_cast<double>(p) - a - c;
  if (!(excess.real() - m > -1.0))
    throw DomainError("miller_paris: Re(d+p-a-c-m) <= -1");
  if (nonpositive_integer_near(d))
    throw PoleError("miller_paris: d is a non-positive integer");

  Complex first = 0.0;
  for (int k = 0; k < p; ++k) {
    const Complex term = pochhammer(static_cast<double>(m), k) * gen_binomial(p - 1.0, k) *
                         pochhammer(1.0 - d, k + m) /
                         (nonzero_pochhammer(1.0 - a, k + m, "miller_paris") *
                          nonzero_pochhammer(1.0 - c, k + m, "miller_paris"));
    first += (k % 2 == 0) ? term : -term;
  }

  Complex second = 0.0;
  for (int k = 0; k < m; ++k) {
    // Gamma(d-a-c) (d-a-c)_{k+p} folded into Gamma(d-a-c+k+p)
    const Complex num[] = {d, d - a - c + static_cast<double>(k + p)};
    const Complex den[] = {d - a, d - c};
    const Complex term = pochhammer(static_cast<double>(p), k) * gen_binomial(m - 1.0, k) *
                         gamma_ratio(num, den) /
                         (nonzero_pochhammer(1.0 - a, k + p, "miller_paris") *
                          nonzero_pochhammer(1.0 - c, k + p, "miller_paris"));
    second += (k % 2 == 0) ? term : -term;
  }

  return pochhammer(static_cast<double>(p), m) * first +
         pochhammer(static_cast<double>(m), p) * second;
}

Complex eval_identity_lhs(Complex c, Complex d, int p) {
  if (p < 1)
    throw RangeError("evaluation identity: p must be >= 1");
  Complex sum = 0.0;
  for (int k = 0; k < p; ++k) {
    const Complex term = gen_binomial(p - 1.0, k) * pochhammer(1.0 - d, k + 1) /
                         nonzero_pochhammer(1.0 - c, k + 1, "evaluation identity");
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

Complex eval_identity_rhs(Complex c, Complex d, int p) {
  if (p < 1)
    throw RangeError("evaluation identity: p must be >= 1");
  const Complex denom = nonzero_pochhammer(1.0 - c, p, "evaluation identity");
  const Complex num[] = {d, d - c + static_cast<double>(p - 1)};
  const Complex den[] = {d - 1.0, d - c};
  return -gamma_ratio(num, den) / denom;
}

LimitEstimate miller_paris_unit_limit(Complex c, Complex d, int n,
                                      std::span<const double> epsilons) {
  if (epsilons.size() < 2)
    throw RangeError("unit limit: need at least two epsilons");
  // Neville tableau evaluated at epsilon = 0.
  std::vector<Complex> column;
  for (const double e : epsilons)
    column.push_back(miller_paris(1.0 - e, c, d, 1, n + 1));
  const std::size_t count = column.size();
  Complex previous_best = column.back();
  for (std::size_t level = 1; level < count; ++level) {
    previous_best = column[count - level];
    for (std::size_t i = 0; i + level < count; ++i) {
      const double xi = epsilons[i];
      const double xj = epsilons[i + level];
      column[i] = (xi * column[i + 1] - xj * column[i]) / (xi - xj);
    }
  }
  return {column[0], std::abs(column[0] - previous_best)};
}

} // namespace hypsum
