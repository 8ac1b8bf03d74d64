#pragma once

// Seeded identity sweeps. Every sampled point yields a VerificationRecord
// comparing an oracle value with one or two closed-form routes.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hypsum/hypergeom.hpp"

namespace hypsum {

enum class Suite { theorem1, miller_paris, identities, bessel, all };

Suite parse_suite(const std::string& name);
std::string suite_name(Suite s);

struct Rect {
  double re_min = -6.0;
  double re_max = 6.0;
  double im_min = -6.0;
  double im_max = 6.0;
};

struct GridSpec {
  std::vector<int> n_values{0, 1, 2, 3, 4, 5, 6, 7, 8};
  Rect c_region;
  Rect d_region;
  // Samples are also rejected outside |z| <= max_modulus.
  double max_modulus = 6.0;
  int samples = 100;
  std::uint64_t seed = 42;
  // Minimum of Re(d - c + n) (or the matching excess of other series).
  double domain_margin = 0.75;
  // Minimum distance from integers at which a closed form or the series
  // is singular.
  double integer_exclusion_radius = 0.05;
  // Brute-force terms for the Bessel cross-checks.
  long bessel_terms = 100'000;
  // Overrides the per-suite pass tolerance and caps the absolute floor.
  std::optional<double> tolerance;
  SeriesConfig series{};
  int threads = 1;

  void validate() const;
};

struct VerificationRecord {
  std::string suite;
  std::string check;
  std::vector<std::pair<std::string, Complex>> params;
  Complex reference{};
  Complex candidate{};
  std::optional<Complex> alternate;
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  double tolerance = 0.0;
  double abs_floor = 0.0;
  bool pass = false;
  std::string note;
  double wall_time = 0.0;
};

struct VerificationReport {
  std::vector<VerificationRecord> records;

  std::size_t passed() const;
  std::size_t failed() const { return records.size() - passed(); }
  bool all_pass() const { return failed() == 0; }
};

// Default pass tolerances per suite: rounding-limited closed forms versus
// truncation-limited Bessel cross-checks.
inline constexpr double kClosedFormTolerance = 1e-8;
inline constexpr double kBesselTolerance = 1e-4;

/// Fills abs_dev / rel_dev / pass from reference, candidate and alternate.
void score(VerificationRecord& rec);

/// Runs the suite(s) and returns records in canonical order (suite, check,
/// parameter tuple). Identical specs give identical records apart from
/// wall_time, whatever the thread count.
VerificationReport run_verification(const GridSpec& grid, Suite suite);

// 53-bit uniform double in [0, 1) from a 64-bit Mersenne Twister; fixed
// algorithm so samples are reproducible across platforms.
class UniformSampler {
public:
  explicit UniformSampler(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
  Complex in(const Rect& r) { return {in(r.re_min, r.re_max), in(r.im_min, r.im_max)}; }

private:
  std::mt19937_64 engine_;
};

/// Seed of an independent sample stream, derived from the grid seed and a
/// stream label with FNV-1a and a SplitMix64 finalizer.
std::uint64_t stream_seed(std::uint64_t seed, const std::string& label, long index);

} // namespace hypsum
