#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypsum/verify.hpp"

namespace hypsum {

enum class ReportFormat { table, objects };

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

ReportFormat parse_format(const std::string& name);

// 17 significant digits.
std::string format_double(double v);
// "re+imi" / "re-imi"
std::string format_complex(Complex z);

/// Accepts "1.5", "-2i", "i", "0.5+1.25i", "1e-3-2.5e-1i". Throws ConfigError.
Complex parse_complex(std::string_view text);

/// Header line plus one line per record. Throws ConfigError on an empty list.
void write_report(std::ostream& out, const std::vector<VerificationRecord>& records,
                  ReportFormat format);
/// As above to a file; throws IoError when the file cannot be written.
void write_report_file(const std::filesystem::path& path,
                       const std::vector<VerificationRecord>& records, ReportFormat format);

std::vector<VerificationRecord> parse_report(std::istream& in, ReportFormat format);

/// Output path precedence: explicit flag, then the HYPSUM_REPORT_DIR
/// environment variable, then the current directory.
std::filesystem::path resolve_report_path(const std::optional<std::string>& flag,
                                          const char* env_dir, Suite suite, std::uint64_t seed,
                                          ReportFormat format);

} // namespace hypsum
