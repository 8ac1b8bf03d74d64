#include "hypsum/hypergeom.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hypsum/errors.hpp"

namespace hypsum {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kAbsFloor = 1e-300;
constexpr double kUnitTol = 1e-14;
constexpr long kFirstCheckpoint = 32;
constexpr int kRichardsonLevels = 4;

// Neumaier compensated sum, one per component.
class CompensatedSum {
public:
  void add(Complex z) {
    add_to(re_, re_c_, z.real());
    add_to(im_, im_c_, z.imag());
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
  static void add_to(double& sum, double& comp, double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

struct Parameters {
  std::vector<Complex> upper;
  std::vector<Complex> lower;
};

Parameters cancel_pairs(std::span<const Complex> upper, std::span<const Complex> lower) {
  Parameters p{{upper.begin(), upper.end()}, {}};
  for (const Complex b : lower) {
    bool cancelled = false;
    for (auto it = p.upper.begin(); it != p.upper.end(); ++it) {
      if (std::abs(*it - b) <= kUnitTol * std::max(1.0, std::abs(b))) {
        p.upper.erase(it);
        cancelled = true;
        break;
      }
    }
    if (!cancelled)
      p.lower.push_back(b);
  }
  return p;
}

// Index of the last non-zero term when an upper parameter is a
// non-positive integer; throws ParameterPole when a lower parameter
// reaches its pole first.
std::optional<long> truncation_index(const Parameters& p) {
  std::optional<long> trunc;
  for (const Complex a : p.upper) {
    if (auto n = nonpositive_integer_near(a)) {
      const long idx = -*n;
      if (!trunc || idx < *trunc)
        trunc = idx;
    }
  }
  for (const Complex b : p.lower) {
    if (auto n = nonpositive_integer_near(b)) {
      const long idx = -*n;
      if (!trunc || idx < *trunc)
        throw ParameterPole("series: lower parameter reaches a pole at term " +
                            std::to_string(idx + 1));
    }
  }
  return trunc;
}

Complex term_ratio(const Parameters& p, Complex x, long k) {
  const double kd = static_cast<double>(k);
  Complex num = x;
  for (const Complex a : p.upper)
    num *= kd + a;
  Complex den = kd + 1.0;
  for (const Complex b : p.lower)
    den *= kd + b;
  return num / den;
}

double max_modulus(const Parameters& p) {
  double m = 0.0;
  for (const Complex a : p.upper)
    m = std::max(m, std::abs(a));
  for (const Complex b : p.lower)
    m = std::max(m, std::abs(b));
  return m;
}

EvalResult sum_terminating(const Parameters& p, Complex x, long last, const SeriesConfig& cfg) {
  CompensatedSum sum;
  Complex t = 1.0;
  double magnitude = 1.0;
  sum.add(t);
  long k = 0;
  for (; k < last && k + 1 < cfg.max_terms; ++k) {
    t *= term_ratio(p, x, k);
    sum.add(t);
    magnitude += std::abs(t);
  }
  EvalResult r;
  r.value = sum.value();
  r.err_est = 4.0 * kEps * magnitude;
  r.terms_used = k + 1;
  r.converged = (k == last);
  return r;
}

EvalResult sum_inside_disk(const Parameters& p, Complex x, const SeriesConfig& cfg) {
  CompensatedSum sum;
  Complex t = 1.0;
  sum.add(t);
  const double ax = std::abs(x);
  const double settle = 2.0 * max_modulus(p) + 2.0;
  EvalResult r;
  r.err_est = std::numeric_limits<double>::infinity();
  long k = 0;
  for (; k + 1 < cfg.max_terms; ++k) {
    const Complex ratio = term_ratio(p, x, k);
    t *= ratio;
    sum.add(t);
    const double rho = std::max(std::abs(ratio), ax);
    if (k + 1 >= settle && rho < 1.0) {
      const double bound = std::abs(t) * rho / (1.0 - rho);
      r.err_est = bound;
      if (bound <= std::max(cfg.rel_tol * std::abs(sum.value()), kAbsFloor)) {
        r.converged = true;
        ++k;
        break;
      }
    }
  }
  r.value = sum.value();
  r.terms_used = k + 1;
  return r;
}

// |x| = 1. For x = 1 the corrected partial sums feed a Richardson table in
// the known exponents s+1, s+2, ...; elsewhere on the circle the geometric
// phase gives the first-order tail t_K x/(1-x).
EvalResult sum_on_circle(const Parameters& p, Complex x, Complex excess, const SeriesConfig& cfg) {
  const bool at_one = std::abs(x - 1.0) <= kUnitTol;
  const double sigma = excess.real();
  long max_terms = cfg.max_terms;
  double widen = 1.0;
  if (sigma < 0.5) {
    max_terms = std::max(max_terms, 1'000'000L);
    widen = 10.0;
  }

  CompensatedSum sum;
  Complex t = 1.0;
  sum.add(t);

  std::vector<std::vector<Complex>> table;
  std::vector<double> diffs;
  long checkpoint = kFirstCheckpoint;
  EvalResult r;
  r.value = 1.0;
  r.err_est = std::numeric_limits<double>::infinity();

  long k = 0; // index of the most recently added term
  while (k + 1 < max_terms) {
    t *= term_ratio(p, x, k);
    ++k;
    sum.add(t);
    if (k != checkpoint)
      continue;
    checkpoint *= 2;

    const Complex partial = sum.value();
    const double kd = static_cast<double>(k);
    double err = 0.0;
    Complex estimate;
    if (cfg.tail_mode == TailMode::none) {
      estimate = partial;
      err = at_one ? std::abs(t * (kd + 1.0) / excess) : std::abs(t) / std::abs(1.0 - x);
    } else if (!at_one) {
      estimate = partial + t * x / (1.0 - x);
      err = std::abs(t) * (std::abs(excess) + 2.0) / (kd * std::norm(1.0 - x));
    } else {
      std::vector<Complex> row{partial + t * (kd + 1.0) / excess};
      const std::size_t j = table.size();
      const std::size_t levels = std::min<std::size_t>(j, kRichardsonLevels);
      for (std::size_t l = 1; l <= levels; ++l) {
        const Complex f = std::pow(Complex(2.0), -(excess + static_cast<double>(l)));
        row.push_back((row[l - 1] - f * table[j - 1][l - 1]) / (1.0 - f));
      }
      estimate = row.back();
      if (j == 0) {
        err = std::numeric_limits<double>::infinity();
      } else {
        const double d = std::abs(estimate - table[j - 1].back());
        const double guard =
            diffs.empty() ? d : diffs.back() * std::pow(2.0, -(sigma + levels + 1.0));
        diffs.push_back(d);
        err = std::max(d, guard);
        if (levels < kRichardsonLevels)
          err = std::max(err, std::abs(row[levels] - row[levels - 1]));
      }
      table.push_back(std::move(row));
    }
    r.value = estimate;
    r.err_est = widen * err;
    r.terms_used = k + 1;
    if (r.err_est <= std::max(cfg.rel_tol * std::abs(estimate), kAbsFloor)) {
      r.converged = true;
      return r;
    }
  }
  if (r.terms_used == 0) {
    // No checkpoint reached.
    const double kd = static_cast<double>(k);
    r.value = sum.value();
    r.err_est = at_one ? std::abs(t * (kd + 1.0) / excess) : std::abs(t) / std::abs(1.0 - x);
    r.terms_used = k + 1;
  }
  return r;
}

} // namespace

void SeriesConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw DomainError("series config: rel_tol must lie in (0, 1)");
  if (max_terms < 1)
    throw DomainError("series config: max_terms must be >= 1");
}

EvalResult sum_pfq(std::span<const Complex> upper, std::span<const Complex> lower, Complex x,
                   const SeriesConfig& cfg) {
  cfg.validate();
  if (upper.size() != lower.size() + 1)
    throw std::invalid_argument("sum_pfq: expects p = q + 1 parameters");
  if (std::abs(x) > 1.0 + kUnitTol)
    throw DomainError("series: |x| > 1");

  const Parameters p = cancel_pairs(upper, lower);
  if (auto last = truncation_index(p))
    return sum_terminating(p, x, *last, cfg);

  if (std::abs(std::abs(x) - 1.0) > kUnitTol)
    return sum_inside_disk(p, x, cfg);

  Complex excess = 0.0;
  for (const Complex b : p.lower)
    excess += b;
  for (const Complex a : p.upper)
    excess -= a;
  if (excess.real() <= 0.0)
    throw DivergentError("series: unit argument with non-positive parametric excess");
  return sum_on_circle(p, x, excess, cfg);
}

EvalResult sum_3f2(Complex a1, Complex a2, Complex a3, Complex b1, Complex b2, Complex x,
                   const SeriesConfig& cfg) {
  const Complex upper[] = {a1, a2, a3};
  const Complex lower[] = {b1, b2};
  return sum_pfq(upper, lower, x, cfg);
}

EvalResult sum_2f1(Complex a, Complex b, Complex c, Complex x, const SeriesConfig& cfg) {
  const Complex upper[] = {a, b};
  const Complex lower[] = {c};
  return sum_pfq(upper, lower, x, cfg);
}

Complex gamma_ratio(std::span<const Complex> num, std::span<const Complex> den) {
  for (const Complex z : den)
    if (nonpositive_integer_near(z))
      return 0.0;
  Complex log_value = 0.0;
  for (const Complex z : num)
    log_value += clgamma(z);
  for (const Complex z : den)
    log_value -= clgamma(z);
  return std::exp(log_value);
}

Complex gauss_sum_2f1_unit(Complex a, Complex b, Complex c) {
  if ((c - a - b).real() <= 0.0)
    throw DomainError("Gauss sum: Re(c-a-b) <= 0");
  if (nonpositive_integer_near(c))
    throw PoleError("Gauss sum: c is a non-positive integer");
  const Complex num[] = {c, c - a - b};
  const Complex den[] = {c - a, c - b};
  return gamma_ratio(num, den);
}

} // namespace hypsum
