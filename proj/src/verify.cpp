#include "hypsum/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "hypsum/bessel_sums.hpp"
#include "hypsum/closed_form.hpp"
#include "hypsum/errors.hpp"
#include "hypsum/report.hpp"

namespace hypsum {

namespace {

constexpr double kClosedFormFloor = 1e-12;
constexpr double kEpsilonLimitTolerance = 1e-6;
constexpr double kUnitLimitTolerance = 1e-7;
constexpr int kEpsilonLimitPoints = 20;
constexpr int kMaxRejections = 100'000;
constexpr std::array<double, 3> kUnitLimitEpsilons = {1e-3, 1e-4, 1e-5};

struct Task {
  VerificationRecord rec;
  std::function<void(VerificationRecord&)> fill;
};

using TaskList = std::vector<Task>;

bool near_integer_between(Complex z, long lo, long hi, double radius) {
  const double k = std::clamp(std::round(z.real()), static_cast<double>(lo), static_cast<double>(hi));
  return std::abs(z - k) < radius;
}

bool near_nonpositive_integer(Complex z, double radius) {
  const double k = std::min(0.0, std::round(z.real()));
  return std::abs(z - k) < radius;
}

template <class Draw, class Accept>
auto draw_until(UniformSampler& rng, Draw&& draw, Accept&& accept) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    auto candidate = draw(rng);
    if (accept(candidate))
      return candidate;
  }
  throw ConfigError("grid: sampling region admits no valid points");
}

VerificationRecord make_record(const GridSpec& g, const char* suite, const char* check,
                               std::vector<std::pair<std::string, Complex>> params,
                               double tolerance, double abs_floor) {
  VerificationRecord r;
  r.suite = suite;
  r.check = check;
  r.params = std::move(params);
  r.tolerance = g.tolerance.value_or(tolerance);
  r.abs_floor = g.tolerance ? std::min(abs_floor, *g.tolerance) : abs_floor;
  return r;
}

Complex as_complex(double v) { return {v, 0.0}; }

// theorem1 suite: closed form vs oracle, n = 0/1 reduced forms, epsilon limit at c = 1.
void add_theorem1_suite(const GridSpec& g, TaskList& tasks) {
  const double r = g.integer_exclusion_radius;
  for (const int n : g.n_values) {
    UniformSampler rng(stream_seed(g.seed, "theorem1", n));
    for (int i = 0; i < g.samples; ++i) {
      const auto [c, d] = draw_until(
          rng, [&](UniformSampler& s) { return std::pair{s.in(g.c_region), s.in(g.d_region)}; },
          [&](const std::pair<Complex, Complex>& cd) {
            const auto& [cc, dd] = cd;
            return std::abs(cc) <= g.max_modulus && std::abs(dd) <= g.max_modulus &&
                   (dd - cc + static_cast<double>(n)).real() >= g.domain_margin &&
                   !near_integer_between(cc, 1, n + 1, r) && !near_nonpositive_integer(dd, r);
          });
      const std::vector<std::pair<std::string, Complex>> params = {
          {"c", c}, {"d", d}, {"n", as_complex(n)}};
      const SeriesConfig cfg = g.series;

      tasks.push_back({make_record(g, "theorem1", "theorem1_vs_series", params,
                                   kClosedFormTolerance, kClosedFormFloor),
                       [=](VerificationRecord& rec) {
                         rec.reference = sum_3f2(1.0, 1.0, c, d, n + 2.0, 1.0, cfg).value;
                         rec.candidate = theorem1({c, d, n}).value;
                       }});
      if (n == 0 || n == 1) {
        tasks.push_back({make_record(g, "theorem1", "special_vs_theorem1", params,
                                     kClosedFormTolerance, kClosedFormFloor),
                         [=](VerificationRecord& rec) {
                           rec.reference = theorem1({c, d, n}).value;
                           rec.candidate = special_case({c, d, n});
                         }});
        tasks.push_back({make_record(g, "theorem1", "special_vs_series", params,
                                     kClosedFormTolerance, kClosedFormFloor),
                         [=](VerificationRecord& rec) {
                           rec.reference = sum_3f2(1.0, 1.0, c, d, n + 2.0, 1.0, cfg).value;
                           rec.candidate = special_case({c, d, n});
                         }});
      }
    }
  }

  UniformSampler rng(stream_seed(g.seed, "epsilon_limit", 0));
  const int points = std::min(g.samples, kEpsilonLimitPoints);
  for (int i = 0; i < points; ++i) {
    const Complex d = draw_until(
        rng, [&](UniformSampler& s) { return s.in(g.d_region); },
        [&](Complex dd) {
          return std::abs(dd) <= g.max_modulus && (dd - 1.0).real() >= g.domain_margin &&
                 !near_nonpositive_integer(dd, r);
        });
    const SeriesConfig cfg = g.series;
    tasks.push_back({make_record(g, "theorem1", "epsilon_limit_c1",
                                 {{"c", 1.0}, {"d", d}, {"n", 0.0}}, kEpsilonLimitTolerance,
                                 kEpsilonLimitTolerance),
                     [=](VerificationRecord& rec) {
                       rec.reference = sum_3f2(1.0, 1.0, 1.0, d, 2.0, 1.0, cfg).value;
                       rec.candidate =
                           theorem1({1.0, d, 0}, {LimitMode::epsilon_limit, 1e-5}).value;
                     }});
  }
}

// miller_paris suite: the two-sum closed form over m, p in {1,2,3} and the
// a -> 1 limit against the closed form for 3F2(1,1,c; d,n+2; 1).
void add_miller_paris_suite(const GridSpec& g, TaskList& tasks) {
  const double r = g.integer_exclusion_radius;
  for (int m = 1; m <= 3; ++m) {
    for (int p = 1; p <= 3; ++p) {
      UniformSampler rng(stream_seed(g.seed, "miller_paris", 10 * m + p));
      for (int i = 0; i < g.samples; ++i) {
        const auto v = draw_until(
            rng,
            [&](UniformSampler& s) {
              return std::array<Complex, 3>{s.in(g.c_region), s.in(g.c_region), s.in(g.d_region)};
            },
            [&](const std::array<Complex, 3>& x) {
              const auto [a, c, d] = x;
              const Complex excess = d + static_cast<double>(p) - a - c;
              return std::abs(a) <= g.max_modulus && std::abs(c) <= g.max_modulus &&
                     std::abs(d) <= g.max_modulus && excess.real() >= g.domain_margin &&
                     excess.real() - m >= -1.0 + g.domain_margin &&
                     !near_integer_between(a, 1, m + p, r) &&
                     !near_integer_between(c, 1, m + p, r) && !near_nonpositive_integer(d, r);
            });
        const auto [a, c, d] = v;
        const SeriesConfig cfg = g.series;
        tasks.push_back({make_record(g, "miller_paris", "miller_paris_vs_series",
                                     {{"a", a}, {"c", c}, {"d", d},
                                      {"m", as_complex(m)}, {"p", as_complex(p)}},
                                     kClosedFormTolerance, kClosedFormFloor),
                         [=](VerificationRecord& rec) {
                           rec.reference = sum_3f2(a, c, static_cast<double>(m), d,
                                                   static_cast<double>(m + p), 1.0, cfg)
                                               .value;
                           rec.candidate = miller_paris(a, c, d, m, p);
                         }});
      }
    }
  }

  // Cancellation in the 1/epsilon terms grows with |c|, |d| and n, so the
  // limit check samples a smaller disc and n <= 4.
  UniformSampler rng(stream_seed(g.seed, "unit_limit", 0));
  const double radius = std::min(g.max_modulus, 3.0);
  for (int i = 0; i < g.samples; ++i) {
    const int n = i % 5;
    const auto [c, d] = draw_until(
        rng, [&](UniformSampler& s) { return std::pair{s.in(g.c_region), s.in(g.d_region)}; },
        [&](const std::pair<Complex, Complex>& cd) {
          const auto& [cc, dd] = cd;
          return std::abs(cc) <= radius && std::abs(dd) <= radius &&
                 (dd - cc + static_cast<double>(n)).real() >= g.domain_margin &&
                 !near_integer_between(cc, 1, n + 2, r) && !near_nonpositive_integer(dd, r);
        });
    tasks.push_back({make_record(g, "miller_paris", "unit_limit_vs_theorem1",
                                 {{"c", c}, {"d", d}, {"n", as_complex(n)}}, kUnitLimitTolerance,
                                 kUnitLimitTolerance),
                     [=](VerificationRecord& rec) {
                       rec.reference = theorem1({c, d, n}).value;
                       rec.candidate = miller_paris_unit_limit(c, d, n, kUnitLimitEpsilons).value;
                     }});
  }
}

struct MuNuN {
  double mu;
  double nu;
  int n;
};

MuNuN draw_mu_nu_n(UniformSampler& rng, int i, double radius) {
  return draw_until(
      rng, [&](UniformSampler& s) { return MuNuN{s.in(0.0, 3.0), s.in(0.0, 3.0), i % 6}; },
      [&](const MuNuN& x) { return x.mu > radius && !integer_near(x.mu, radius); });
}

void add_identities_suite(const GridSpec& g, TaskList& tasks) {
  const double r = g.integer_exclusion_radius;
  {
    UniformSampler rng(stream_seed(g.seed, "eval_identity", 0));
    for (int i = 0; i < g.samples; ++i) {
      const int p = 1 + i % 6;
      const auto [c, d] = draw_until(
          rng, [&](UniformSampler& s) { return std::pair{s.in(g.c_region), s.in(g.d_region)}; },
          [&](const std::pair<Complex, Complex>& cd) {
            const auto& [cc, dd] = cd;
            return std::abs(cc) <= g.max_modulus && std::abs(dd) <= g.max_modulus &&
                   !near_integer_between(cc, 1, p, r) && !near_nonpositive_integer(dd, r) &&
                   !near_nonpositive_integer(dd - cc + static_cast<double>(p - 1), r);
          });
      tasks.push_back({make_record(g, "identities", "eval_identity",
                                   {{"c", c}, {"d", d}, {"p", as_complex(p)}},
                                   kClosedFormTolerance, kClosedFormFloor),
                       [=](VerificationRecord& rec) {
                         rec.reference = eval_identity_lhs(c, d, p);
                         rec.candidate = eval_identity_rhs(c, d, p);
                       }});
    }
  }
  {
    UniformSampler rng(stream_seed(g.seed, "psi_removal", 0));
    for (int i = 0; i < g.samples; ++i) {
      const MuNuN x = draw_mu_nu_n(rng, i, r);
      const BesselSumParams bp{x.mu, x.nu, 1.0, 1.0, x.n};
      tasks.push_back({make_record(g, "identities", "psi_removal",
                                   {{"mu", x.mu}, {"nu", x.nu}, {"n", as_complex(x.n)}},
                                   kClosedFormTolerance, kClosedFormFloor),
                       [=](VerificationRecord& rec) {
                         const auto [lhs, rhs] = psi_removal_identity(bp);
                         rec.reference = lhs;
                         rec.candidate = rhs;
                       }});
    }
  }
  {
    UniformSampler rng(stream_seed(g.seed, "a_b_coefficient", 0));
    for (int i = 0; i < g.samples; ++i) {
      const MuNuN x = draw_mu_nu_n(rng, i, r);
      const BesselSumParams bp{x.mu, x.nu, 1.0, 1.0, x.n};
      for (int m = 0; m <= 2 * x.n + 3; ++m) {
        if (m == x.n)
          continue;
        tasks.push_back({make_record(g, "identities", "a_b_coefficient",
                                     {{"mu", x.mu}, {"nu", x.nu}, {"n", as_complex(x.n)},
                                      {"m", as_complex(m)}},
                                     kClosedFormTolerance, kClosedFormFloor),
                         [=](VerificationRecord& rec) {
                           rec.reference = a_coeff(bp, m);
                           rec.candidate = b_coeff(bp, m, 1.0) / std::tgamma(1.0 + bp.nu);
                         }});
      }
    }
  }
  {
    UniformSampler rng(stream_seed(g.seed, "delta_at_1", 0));
    for (int i = 0; i < g.samples; ++i) {
      const MuNuN x = draw_mu_nu_n(rng, i, r);
      const BesselSumParams bp{x.mu, x.nu, 1.0, 1.0, x.n};
      const SeriesConfig cfg = g.series;
      tasks.push_back({make_record(g, "identities", "delta_at_1_three_way",
                                   {{"mu", x.mu}, {"nu", x.nu}, {"n", as_complex(x.n)}},
                                   kClosedFormTolerance, kClosedFormFloor),
                       [=](VerificationRecord& rec) {
                         rec.reference = delta_n(bp, 1.0, cfg, DeltaRoute::series).value;
                         rec.candidate = delta_n_at_1_closed(bp);
                         rec.alternate = delta_n(bp, 1.0, cfg, DeltaRoute::theorem1).value;
                       }});
    }
  }
  {
    UniformSampler rng(stream_seed(g.seed, "eq24", 0));
    for (int i = 0; i < g.samples; ++i) {
      const MuNuN x = draw_mu_nu_n(rng, i, r);
      const BesselSumParams bp{x.mu, x.nu, 1.0, 1.0, x.n};
      const SeriesConfig cfg = g.series;
      tasks.push_back({make_record(g, "identities", "eq24_three_way",
                                   {{"mu", x.mu}, {"nu", x.nu}, {"n", as_complex(x.n)}},
                                   kClosedFormTolerance, kClosedFormFloor),
                       [=](VerificationRecord& rec) {
                         const double n = bp.n;
                         rec.reference =
                             sum_3f2(1.0, 1.0, 1.0 - bp.mu, n + bp.nu + 2.0, n + 2.0, 1.0, cfg)
                                 .value;
                         rec.candidate = eq24_3f2(bp);
                         rec.alternate = theorem1({1.0 - bp.mu, n + bp.nu + 2.0, bp.n}).value;
                       }});
    }
  }
}

void add_bessel_suite(const GridSpec& g, TaskList& tasks) {
  const std::array<MuNuN, 3> families = {{{0.0, 0.0, 0}, {0.5, 0.5, 1}, {1.0, 0.0, 2}}};
  const std::array<double, 4> args = {0.5, 1.0, 2.0, 3.0};
  const long terms = g.bessel_terms;
  for (const MuNuN& f : families) {
    for (const double a : args) {
      const BesselSumParams bp{f.mu, f.nu, a, a, f.n};
      const SeriesConfig cfg = g.series;
      tasks.push_back({make_record(g, "bessel", "expansion_equal_vs_direct",
                                   {{"mu", f.mu}, {"nu", f.nu}, {"n", as_complex(f.n)},
                                    {"a", a}, {"b", a}},
                                   kBesselTolerance, kBesselTolerance),
                       [=](VerificationRecord& rec) {
                         rec.reference = s_direct(bp, terms).value;
                         rec.candidate = expansion_equal(bp, cfg).value;
                       }});
    }
  }
  const std::array<BesselSumParams, 2> unequal = {{{0.0, 0.0, 2.0, 1.0, 0}, {0.5, 0.5, 2.0, 1.0, 1}}};
  for (const BesselSumParams& bp : unequal) {
    const SeriesConfig cfg = g.series;
    tasks.push_back({make_record(g, "bessel", "expansion_unequal_vs_direct",
                                 {{"mu", bp.mu}, {"nu", bp.nu}, {"n", as_complex(bp.n)},
                                  {"a", bp.a}, {"b", bp.b}},
                                 kBesselTolerance, kBesselTolerance),
                     [=](VerificationRecord& rec) {
                       rec.reference = s_direct(bp, terms).value;
                       rec.candidate = expansion_unequal(bp, cfg).value;
                     }});
  }
}

void execute(Task& task) {
  const auto start = std::chrono::steady_clock::now();
  VerificationRecord& rec = task.rec;
  try {
    task.fill(rec);
    score(rec);
  } catch (const std::exception& e) {
    rec.note = e.what();
    rec.abs_dev = std::numeric_limits<double>::infinity();
    rec.rel_dev = std::numeric_limits<double>::infinity();
    rec.pass = false;
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> sort_key(const VerificationRecord& r) {
  std::vector<double> key;
  key.reserve(2 * r.params.size());
  for (const auto& [name, value] : r.params) {
    key.push_back(value.real());
    key.push_back(value.imag());
  }
  return key;
}

} // namespace

Suite parse_suite(const std::string& name) {
  if (name == "theorem1")
    return Suite::theorem1;
  if (name == "miller_paris" || name == "miller-paris")
    return Suite::miller_paris;
  if (name == "identities")
    return Suite::identities;
  if (name == "bessel")
    return Suite::bessel;
  if (name == "all")
    return Suite::all;
  throw ConfigError("unknown suite '" + name + "'");
}

std::string suite_name(Suite s) {
  switch (s) {
  case Suite::theorem1:
    return "theorem1";
  case Suite::miller_paris:
    return "miller_paris";
  case Suite::identities:
    return "identities";
  case Suite::bessel:
    return "bessel";
  case Suite::all:
    return "all";
  }
  return "unknown";
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& label, long index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h ^ (static_cast<std::uint64_t>(index) * 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void GridSpec::validate() const {
  auto bad_rect = [](const Rect& r) { return !(r.re_min < r.re_max) || !(r.im_min <= r.im_max); };
  if (samples < 1)
    throw ConfigError("grid: samples must be >= 1");
  if (!(domain_margin > 0.0))
    throw ConfigError("grid: domain_margin must be > 0");
  if (!(integer_exclusion_radius >= 0.0 && integer_exclusion_radius < 0.5))
    throw ConfigError("grid: integer_exclusion_radius must lie in [0, 0.5)");
  if (bad_rect(c_region) || bad_rect(d_region))
    throw ConfigError("grid: degenerate sampling region");
  if (!(max_modulus > 0.0))
    throw ConfigError("grid: max_modulus must be > 0");
  for (const int n : n_values)
    if (n < 0)
      throw ConfigError("grid: n values must be >= 0");
  if (bessel_terms < 1000)
    throw ConfigError("grid: bessel_terms must be >= 1000");
  if (tolerance && !(*tolerance > 0.0))
    throw ConfigError("grid: tolerance must be > 0");
  if (threads < 1)
    throw ConfigError("grid: threads must be >= 1");
  try {
    series.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::size_t VerificationReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.pass; }));
}

void score(VerificationRecord& rec) {
  double dev = std::abs(rec.candidate - rec.reference);
  if (rec.alternate) {
    dev = std::max(dev, std::abs(*rec.alternate - rec.reference));
    dev = std::max(dev, std::abs(*rec.alternate - rec.candidate));
  }
  const double scale = std::abs(rec.reference);
  rec.abs_dev = dev;
  if (scale > 0.0)
    rec.rel_dev = dev / scale;
  else
    rec.rel_dev = dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  rec.pass = (rec.rel_dev <= rec.tolerance) || (rec.abs_dev <= rec.abs_floor);
}

VerificationReport run_verification(const GridSpec& grid, Suite suite) {
  grid.validate();
  TaskList tasks;
  const bool all = suite == Suite::all;
  if (all || suite == Suite::theorem1)
    add_theorem1_suite(grid, tasks);
  if (all || suite == Suite::miller_paris)
    add_miller_paris_suite(grid, tasks);
  if (all || suite == Suite::identities)
    add_identities_suite(grid, tasks);
  if (all || suite == Suite::bessel)
    add_bessel_suite(grid, tasks);

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(grid.threads), tasks.size());
  if (workers <= 1) {
    for (Task& t : tasks)
      execute(t);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&tasks, w, workers] {
        for (std::size_t i = w; i < tasks.size(); i += workers)
          execute(tasks[i]);
      });
  }

  VerificationReport report;
  report.records.reserve(tasks.size());
  for (Task& t : tasks)
    report.records.push_back(std::move(t.rec));
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const VerificationRecord& x, const VerificationRecord& y) {
                     if (x.suite != y.suite)
                       return x.suite < y.suite;
                     if (x.check != y.check)
                       return x.check < y.check;
                     return sort_key(x) < sort_key(y);
                   });
  return report;
}

} // namespace hypsum
