#include "hypsum/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace hypsum {

namespace {

const char* const kTableHeader =
    "suite,check,params,reference,candidate,alternate,abs_dev,rel_dev,tolerance,abs_floor,pass,"
    "note,wall_time";
const char* const kObjectsHeader =
    R"({"format":"hypsum-report","fields":["suite","check","params","reference","candidate",)"
    R"("alternate","abs_dev","rel_dev","tolerance","abs_floor","pass","note","wall_time"]})";

double parse_double(std::string_view text) {
  if (text == "inf")
    return std::numeric_limits<double>::infinity();
  if (text == "-inf")
    return -std::numeric_limits<double>::infinity();
  if (text == "nan" || text == "-nan")
    return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw ConfigError("cannot parse number '" + std::string(text) + "'");
  return v;
}

// Params as "name=re+imi;name=re+imi".
std::string format_params(const std::vector<std::pair<std::string, Complex>>& params) {
  std::string out;
  for (const auto& [name, value] : params) {
    if (!out.empty())
      out += ';';
    out += name + '=' + format_complex(value);
  }
  return out;
}

std::vector<std::pair<std::string, Complex>> parse_params(std::string_view text) {
  std::vector<std::pair<std::string, Complex>> params;
  while (!text.empty()) {
    const std::size_t end = text.find(';');
    const std::string_view item = text.substr(0, end);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("malformed parameter '" + std::string(item) + "'");
    params.emplace_back(std::string(item.substr(0, eq)), parse_complex(item.substr(eq + 1)));
    if (end == std::string_view::npos)
      break;
    text.remove_prefix(end + 1);
  }
  return params;
}

// Quotes a table field when it contains a separator or quote.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"')
      out += '"';
    out += ch;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

void write_table_line(std::ostream& out, const VerificationRecord& r) {
  out << csv_field(r.suite) << ',' << csv_field(r.check) << ',' << format_params(r.params) << ','
      << format_complex(r.reference) << ',' << format_complex(r.candidate) << ','
      << (r.alternate ? format_complex(*r.alternate) : "") << ',' << format_double(r.abs_dev)
      << ',' << format_double(r.rel_dev) << ',' << format_double(r.tolerance) << ','
      << format_double(r.abs_floor) << ',' << (r.pass ? "true" : "false") << ','
      << csv_field(r.note) << ',' << format_double(r.wall_time) << '\n';
}

// Numbers are written as strings so non-finite values and all 17 digits
// survive any JSON reader.
void write_object_line(std::ostream& out, const VerificationRecord& r) {
  out << "{\"suite\":" << json_string(r.suite) << ",\"check\":" << json_string(r.check)
      << ",\"params\":{";
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    if (i > 0)
      out << ',';
    out << json_string(r.params[i].first) << ':' << json_string(format_complex(r.params[i].second));
  }
  out << "},\"reference\":" << json_string(format_complex(r.reference))
      << ",\"candidate\":" << json_string(format_complex(r.candidate)) << ",\"alternate\":"
      << (r.alternate ? json_string(format_complex(*r.alternate)) : "null")
      << ",\"abs_dev\":" << json_string(format_double(r.abs_dev))
      << ",\"rel_dev\":" << json_string(format_double(r.rel_dev))
      << ",\"tolerance\":" << json_string(format_double(r.tolerance))
      << ",\"abs_floor\":" << json_string(format_double(r.abs_floor))
      << ",\"pass\":" << (r.pass ? "true" : "false") << ",\"note\":" << json_string(r.note)
      << ",\"wall_time\":" << json_string(format_double(r.wall_time)) << "}\n";
}

VerificationRecord parse_table_line(const std::string& line) {
  const auto f = split_csv_line(line);
  if (f.size() != 13)
    throw ConfigError("report line has " + std::to_string(f.size()) + " fields, expected 13");
  VerificationRecord r;
  r.suite = f[0];
  r.check = f[1];
  r.params = parse_params(f[2]);
  r.reference = parse_complex(f[3]);
  r.candidate = parse_complex(f[4]);
  if (!f[5].empty())
    r.alternate = parse_complex(f[5]);
  r.abs_dev = parse_double(f[6]);
  r.rel_dev = parse_double(f[7]);
  r.tolerance = parse_double(f[8]);
  r.abs_floor = parse_double(f[9]);
  if (f[10] != "true" && f[10] != "false")
    throw ConfigError("malformed pass flag '" + f[10] + "'");
  r.pass = f[10] == "true";
  r.note = f[11];
  r.wall_time = parse_double(f[12]);
  return r;
}

VerificationRecord parse_object_line(const std::string& line) {
  try {
    const auto j = nlohmann::ordered_json::parse(line);
    VerificationRecord r;
    r.suite = j.at("suite").get<std::string>();
    r.check = j.at("check").get<std::string>();
    for (const auto& [name, value] : j.at("params").items())
      r.params.emplace_back(name, parse_complex(value.get<std::string>()));
    r.reference = parse_complex(j.at("reference").get<std::string>());
    r.candidate = parse_complex(j.at("candidate").get<std::string>());
    if (!j.at("alternate").is_null())
      r.alternate = parse_complex(j.at("alternate").get<std::string>());
    r.abs_dev = parse_double(j.at("abs_dev").get<std::string>());
    r.rel_dev = parse_double(j.at("rel_dev").get<std::string>());
    r.tolerance = parse_double(j.at("tolerance").get<std::string>());
    r.abs_floor = parse_double(j.at("abs_floor").get<std::string>());
    r.pass = j.at("pass").get<bool>();
    r.note = j.at("note").get<std::string>();
    r.wall_time = parse_double(j.at("wall_time").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report object: ") + e.what());
  }
}

} // namespace

ReportFormat parse_format(const std::string& name) {
  if (name == "table" || name == "csv")
    return ReportFormat::table;
  if (name == "objects" || name == "jsonl")
    return ReportFormat::objects;
  throw ConfigError("unknown report format '" + name + "'");
}

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Complex z) {
  const double im = z.imag();
  std::string out = format_double(z.real());
  std::string tail = format_double(im);
  if (tail.front() != '-')
    tail.insert(tail.begin(), '+');
  return out + tail + 'i';
}

Complex parse_complex(std::string_view text) {
  while (!text.empty() && text.front() == ' ')
    text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ')
    text.remove_suffix(1);
  if (text.empty())
    throw ConfigError("empty complex number");
  if (text.back() != 'i')
    return {parse_double(text), 0.0};

  text.remove_suffix(1);
  // Split at the last sign that does not belong to an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = text.size(); i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string_view re_part = split == std::string_view::npos ? "" : text.substr(0, split);
  std::string_view im_part = split == std::string_view::npos ? text : text.substr(split);
  double im = 1.0;
  if (im_part.empty() || im_part == "+")
    im = 1.0;
  else if (im_part == "-")
    im = -1.0;
  else
    im = parse_double(im_part);
  const double re = re_part.empty() ? 0.0 : parse_double(re_part);
  return {re, im};
}

void write_report(std::ostream& out, const std::vector<VerificationRecord>& records,
                  ReportFormat format) {
  if (records.empty())
    throw ConfigError("refusing to write an empty report");
  if (format == ReportFormat::table) {
    out << kTableHeader << '\n';
    for (const auto& r : records)
      write_table_line(out, r);
  } else {
    out << kObjectsHeader << '\n';
    for (const auto& r : records)
      write_object_line(out, r);
  }
}

void write_report_file(const std::filesystem::path& path,
                       const std::vector<VerificationRecord>& records, ReportFormat format) {
  if (records.empty())
    throw ConfigError("refusing to write an empty report");
  std::ostringstream buffer;
  write_report(buffer, records, format);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw IoError("cannot open '" + path.string() + "' for writing");
  file << buffer.str();
  file.flush();
  if (!file)
    throw IoError("write to '" + path.string() + "' failed");
}

std::vector<VerificationRecord> parse_report(std::istream& in, ReportFormat format) {
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("report is empty");
  const bool header_ok = format == ReportFormat::table ? line == kTableHeader
                                                       : line == kObjectsHeader;
  if (!header_ok)
    throw ConfigError("report header does not match the format");
  std::vector<VerificationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    records.push_back(format == ReportFormat::table ? parse_table_line(line)
                                                    : parse_object_line(line));
  }
  return records;
}

std::filesystem::path resolve_report_path(const std::optional<std::string>& flag,
                                          const char* env_dir, Suite suite, std::uint64_t seed,
                                          ReportFormat format) {
  if (flag)
    return *flag;
  const std::string name = "hypsum_" + suite_name(suite) + "_seed" + std::to_string(seed) +
                           (format == ReportFormat::table ? ".csv" : ".jsonl");
  if (env_dir && *env_dir)
    return std::filesystem::path(env_dir) / name;
  return std::filesystem::path(".") / name;
}

} // namespace hypsum
