#pragma once

// Direct series engines for 2F1 and 3F2 with |x| <= 1.
//
// At x = 1 the terms decay like k^(-1-s) with s the parametric excess
// (sum of lower minus sum of upper parameters). The algebraic tail model
// adds t_K (K+1)/s to the partial sum after term K; the remaining error is
// an expansion in K^(-s-1), K^(-s-2), ... which is removed by Richardson
// extrapolation over dyadic checkpoints K0, 2 K0, 4 K0, ...

#include <span>

#include "hypsum/special_fns.hpp"

namespace hypsum {

enum class TailMode { none, algebraic_correction };

struct SeriesConfig {
  double rel_tol = 1e-12;
  long max_terms = 10'000'000;
  TailMode tail_mode = TailMode::algebraic_correction;

  void validate() const;
};

struct EvalResult {
  Complex value{};
  double err_est = 0.0;
  long terms_used = 0;
  bool converged = false;
};

/// Generic pFq with p = q + 1 at |x| <= 1.
///
/// Matching upper/lower parameter pairs cancel before summation. Throws
/// DomainError for |x| > 1, DivergentError at |x| = 1 with Re s <= 0 and
/// ParameterPole when a lower parameter hits a non-positive integer before
/// an upper one truncates the series (a tie counts as truncation).
EvalResult sum_pfq(std::span<const Complex> upper, std::span<const Complex> lower,
                   Complex x, const SeriesConfig& cfg = {});

EvalResult sum_3f2(Complex a1, Complex a2, Complex a3, Complex b1, Complex b2, Complex x,
                   const SeriesConfig& cfg = {});

EvalResult sum_2f1(Complex a, Complex b, Complex c, Complex x, const SeriesConfig& cfg = {});

/// Gauss: 2F1(a,b;c;1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)),
/// evaluated through log-gamma differences. Requires Re(c-a-b) > 0.
Complex gauss_sum_2f1_unit(Complex a, Complex b, Complex c);

/// prod Gamma(num) / prod Gamma(den) in log space. Zero when any
/// denominator argument is a pole; PoleError when a numerator one is.
Complex gamma_ratio(std::span<const Complex> num, std::span<const Complex> den);

} // namespace hypsum
