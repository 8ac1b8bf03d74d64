// hypsum: single evaluations and seeded verification sweeps.
//
// Exit codes: 0 success / all records pass, 1 a record failed,
// 2 configuration or domain error, 3 I/O error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hypsum/bessel_sums.hpp"
#include "hypsum/closed_form.hpp"
#include "hypsum/errors.hpp"
#include "hypsum/report.hpp"
#include "hypsum/verify.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct EvalArgs {
  std::string method = "theorem1";
  std::string c = "0";
  std::string d = "2";
  std::string a_param;
  int n = 0;
  int m = 1;
  int p = 1;
  double mu = 0.0;
  double nu = 0.0;
  double a = 1.0;
  std::optional<double> b;
  double chi = 1.0;
  long terms = 1'000'000;
  double rel_tol = 1e-12;
  long max_terms = 10'000'000;
  std::string limit_mode = "error";
  double epsilon = 1e-5;
};

struct VerifyArgs {
  std::string suite = "all";
  int samples = 100;
  std::uint64_t seed = 42;
  std::optional<std::string> out;
  std::string format = "table";
  int threads = 1;
  std::optional<double> tolerance;
  long bessel_terms = 100'000;
  double rel_tol = 1e-12;
};

std::string format_real(double v) { return hypsum::format_double(v); }

void print_result(const std::string& method, hypsum::Complex value, double err, long terms,
                  bool converged) {
  std::cout << "method=" << method << '\n'
            << "value=" << hypsum::format_complex(value) << '\n'
            << "err_est=" << format_real(err) << '\n'
            << "terms_used=" << terms << '\n'
            << "converged=" << (converged ? "true" : "false") << '\n';
}

int run_eval(const EvalArgs& args) {
  using namespace hypsum;
  SeriesConfig cfg;
  cfg.rel_tol = args.rel_tol;
  cfg.max_terms = args.max_terms;
  cfg.validate();
  LimitPolicy policy;
  if (args.limit_mode == "epsilon")
    policy.mode = LimitMode::epsilon_limit;
  else if (args.limit_mode != "error")
    throw ConfigError("--limit-mode must be error or epsilon");
  policy.epsilon = args.epsilon;
  policy.validate();

  const Complex c = parse_complex(args.c);
  const Complex d = parse_complex(args.d);
  const Theorem1Params tp{c, d, args.n};
  BesselSumParams bp{args.mu, args.nu, args.a, args.b.value_or(args.a), args.n};

  const std::string& m = args.method;
  if (m == "series") {
    if (args.n < 0)
      throw DomainError("n must be >= 0");
    const EvalResult r = sum_3f2(1.0, 1.0, c, d, args.n + 2.0, 1.0, cfg);
    print_result(m, r.value, r.err_est, r.terms_used, r.converged);
  } else if (m == "theorem1") {
    const EvalResult r = theorem1(tp, policy);
    print_result(m, r.value, r.err_est, r.terms_used, r.converged);
  } else if (m == "special") {
    print_result(m, special_case(tp, policy), 0.0, 0, true);
  } else if (m == "miller-paris") {
    const Complex a = args.a_param.empty() ? Complex(args.a) : parse_complex(args.a_param);
    print_result(m, miller_paris(a, c, d, args.m, args.p), 0.0, 0, true);
  } else if (m == "eq24") {
    print_result(m, eq24_3f2(bp, policy), 0.0, 0, true);
  } else if (m == "delta") {
    const EvalResult r = delta_n(bp, args.chi, cfg);
    print_result(m, r.value, r.err_est, r.terms_used, r.converged);
  } else if (m == "s-direct") {
    const ExpansionResult r = s_direct(bp, args.terms);
    print_result(m, r.value, r.truncation_est, r.terms_used, true);
  } else if (m == "expansion") {
    const ExpansionResult r =
        bp.a == bp.b ? expansion_equal(bp, cfg) : expansion_unequal(bp, cfg);
    print_result(m, r.value, r.truncation_est, r.terms_used, !r.near_boundary);
  } else {
    throw ConfigError("unknown method '" + m + "'");
  }
  return 0;
}

int run_verify(const VerifyArgs& args) {
  using namespace hypsum;
  const Suite suite = parse_suite(args.suite);
  const ReportFormat format = parse_format(args.format);
  GridSpec grid;
  grid.samples = args.samples;
  grid.seed = args.seed;
  grid.threads = args.threads;
  grid.tolerance = args.tolerance;
  grid.bessel_terms = args.bessel_terms;
  grid.series.rel_tol = args.rel_tol;
  grid.validate();

  const auto path =
      resolve_report_path(args.out, std::getenv("HYPSUM_REPORT_DIR"), suite, args.seed, format);
  const VerificationReport report = run_verification(grid, suite);
  write_report_file(path, report.records, format);
  std::cout << "suite=" << suite_name(suite) << " records=" << report.records.size()
            << " passed=" << report.passed() << " failed=" << report.failed()
            << " report=" << path.string() << '\n';
  return report.all_pass() ? 0 : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form 3F2(1,1,c; d,n+2; 1) evaluation and identity verification"};
  app.require_subcommand(1);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate one quantity");
  eval->add_option("--method", ev.method,
                   "series|theorem1|special|miller-paris|eq24|delta|s-direct|expansion")
      ->capture_default_str();
  eval->add_option("--c", ev.c, "complex c, e.g. 0.5+1.25i")->capture_default_str();
  eval->add_option("--d", ev.d, "complex d")->capture_default_str();
  eval->add_option("--n", ev.n)->capture_default_str();
  eval->add_option("--m", ev.m)->capture_default_str();
  eval->add_option("--p", ev.p)->capture_default_str();
  eval->add_option("--mu", ev.mu)->capture_default_str();
  eval->add_option("--nu", ev.nu)->capture_default_str();
  eval->add_option("--a", ev.a_param,
                   "Bessel argument a, or the complex upper parameter a for miller-paris");
  eval->add_option("--b", ev.b, "Bessel argument b (defaults to a)");
  eval->add_option("--chi", ev.chi)->capture_default_str();
  eval->add_option("--terms", ev.terms, "terms for s-direct")->capture_default_str();
  eval->add_option("--rel-tol", ev.rel_tol)->capture_default_str();
  eval->add_option("--max-terms", ev.max_terms)->capture_default_str();
  eval->add_option("--limit-mode", ev.limit_mode, "error|epsilon")->capture_default_str();
  eval->add_option("--epsilon", ev.epsilon)->capture_default_str();

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "Run a seeded verification sweep");
  verify->add_option("--suite", vf.suite, "theorem1|miller_paris|identities|bessel|all")
      ->capture_default_str();
  verify->add_option("--samples", vf.samples)->capture_default_str();
  verify->add_option("--seed", vf.seed)->capture_default_str();
  verify->add_option("--out", vf.out, "report path (default: $HYPSUM_REPORT_DIR or .)");
  verify->add_option("--format", vf.format, "table|objects")->capture_default_str();
  verify->add_option("--threads", vf.threads)->capture_default_str();
  verify->add_option("--tolerance", vf.tolerance, "override the per-suite tolerance");
  verify->add_option("--bessel-terms", vf.bessel_terms)->capture_default_str();
  verify->add_option("--rel-tol", vf.rel_tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*eval) {
      if (!ev.a_param.empty() && ev.method != "miller-paris")
        ev.a = std::stod(ev.a_param);
      return run_eval(ev);
    }
    return run_verify(vf);
  } catch (const hypsum::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
