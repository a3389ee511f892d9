#include "iiotsec/dataset/records.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace iiotsec::dataset {
namespace {

constexpr std::array<std::string_view, kLabel8Count> kLabel8Names = {
    "Normal", "NMRI", "CMRI", "MSCI", "MPCI", "MFCI", "DoS", "Recon"};
constexpr std::array<std::string_view, kLabel4Count> kLabel4Names = {
    "Normal", "Injection", "DoS", "Recon"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view token) {
  if (token.size() >= 2 && (token.front() == '\'' || token.front() == '"') && token.back() == token.front())
    token = token.substr(1, token.size() - 2);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

bool equals_icase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

// Parses one data row of 27 features + label. Returns an error message on failure.
std::optional<std::string> parse_row(const std::vector<std::string_view>& fields, RawRecord& out) {
  if (fields.size() != kRawFeatureCount + 1) {
    return "expected " + std::to_string(kRawFeatureCount) + " features and a label, found " +
           std::to_string(fields.size()) + " columns";
  }
  for (std::size_t i = 0; i < kRawFeatureCount; ++i) {
    const auto value = parse_number(fields[i]);
    if (!value) return "non-numeric value '" + std::string(fields[i]) + "' in feature column " + std::to_string(i);
    out.features[i] = *value;
  }
  const auto label = parse_number(fields.back());
  if (!label || *label != std::floor(*label) || *label < 0.0 || *label > 7.0)
    return "label '" + std::string(fields.back()) + "' is outside 0..7";
  out.label8 = static_cast<ClassLabel8>(static_cast<int>(*label));
  return std::nullopt;
}

}  // namespace

ClassLabel4 regroup_label(ClassLabel8 label) {
  switch (label) {
    case ClassLabel8::Normal: return ClassLabel4::Normal;
    case ClassLabel8::NMRI:
    case ClassLabel8::CMRI:
    case ClassLabel8::MSCI:
    case ClassLabel8::MPCI:
    case ClassLabel8::MFCI: return ClassLabel4::Injection;
    case ClassLabel8::DoS: return ClassLabel4::DoS;
    case ClassLabel8::Recon: return ClassLabel4::Recon;
  }
  return ClassLabel4::Normal;
}

BinaryLabel to_binary(ClassLabel8 label) {
  return label == ClassLabel8::Normal ? BinaryLabel::Normal : BinaryLabel::Attack;
}

std::optional<ClassLabel8> label8_from_int(int value) {
  if (value < 0 || value >= static_cast<int>(kLabel8Count)) return std::nullopt;
  return static_cast<ClassLabel8>(value);
}

std::optional<ClassLabel4> label4_from_int(int value) {
  if (value < 0 || value >= static_cast<int>(kLabel4Count)) return std::nullopt;
  return static_cast<ClassLabel4>(value);
}

std::string_view label_name(ClassLabel8 label) { return kLabel8Names.at(static_cast<std::size_t>(label)); }
std::string_view label_name(ClassLabel4 label) { return kLabel4Names.at(static_cast<std::size_t>(label)); }
std::string_view label_name(BinaryLabel label) { return label == BinaryLabel::Normal ? "Normal" : "Attack"; }

std::optional<ClassLabel8> label8_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kLabel8Names.size(); ++i)
    if (equals_icase(name, kLabel8Names[i])) return static_cast<ClassLabel8>(i);
  return std::nullopt;
}

std::optional<ClassLabel4> label4_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kLabel4Names.size(); ++i)
    if (equals_icase(name, kLabel4Names[i])) return static_cast<ClassLabel4>(i);
  if (equals_icase(name, "Reconnaissance")) return ClassLabel4::Recon;
  return std::nullopt;
}

namespace {
std::string describe(const std::string& source, const std::vector<RowIssue>& issues) {
  std::ostringstream msg;
  msg << source << ": " << issues.size() << " malformed row(s)";
  const std::size_t shown = std::min<std::size_t>(issues.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) msg << "\n  line " << issues[i].line << ": " << issues[i].message;
  if (shown < issues.size()) msg << "\n  ...";
  return msg.str();
}
}  // namespace

ParseError::ParseError(std::string source, std::vector<RowIssue> issues)
    : DataError(describe(source, issues)), issues_(std::move(issues)) {}

FileFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".arff" ? FileFormat::Arff : FileFormat::Csv;
}

std::vector<RawRecord> load_records(const std::filesystem::path& path, FileFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path.string());
  return format == FileFormat::Arff ? parse_arff(in, path.string()) : parse_csv(in, path.string());
}

std::vector<RawRecord> parse_csv(std::istream& in, std::string_view source) {
  std::vector<RawRecord> records;
  std::vector<RowIssue> issues;
  std::string line;
  std::size_t line_no = 0;
  bool seen_first = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto fields = split_fields(content);
    if (!seen_first) {
      seen_first = true;
      if (!parse_number(fields.front())) continue;  // header row
    }
    RawRecord record;
    if (auto err = parse_row(fields, record)) {
      issues.push_back({line_no, std::move(*err)});
      continue;
    }
    records.push_back(record);
  }
  if (!issues.empty()) throw ParseError(std::string(source), std::move(issues));
  return records;
}

std::vector<RawRecord> parse_arff(std::istream& in, std::string_view source) {
  std::vector<RawRecord> records;
  std::vector<RowIssue> issues;
  std::string line;
  std::size_t line_no = 0;
  std::size_t attributes = 0;
  bool in_data = false;
  auto keyword = [](std::string_view content, std::string_view kw) {
    return content.size() >= kw.size() && equals_icase(content.substr(0, kw.size()), kw);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '%') continue;
    if (!in_data) {
      if (keyword(content, "@relation")) continue;
      if (keyword(content, "@attribute")) {
        ++attributes;
        continue;
      }
      if (keyword(content, "@data")) {
        if (attributes != kRawFeatureCount + 1) {
          issues.push_back({line_no, "header declares " + std::to_string(attributes) + " attributes, expected " +
                                         std::to_string(kRawFeatureCount + 1)});
          break;
        }
        in_data = true;
        continue;
      }
      issues.push_back({line_no, "unexpected header line"});
      continue;
    }
    if (content.front() == '{') {
      issues.push_back({line_no, "sparse ARFF rows are not supported"});
      continue;
    }
    RawRecord record;
    if (auto err = parse_row(split_fields(content), record)) {
      issues.push_back({line_no, std::move(*err)});
      continue;
    }
    records.push_back(record);
  }
  if (issues.empty() && !in_data) issues.push_back({line_no, "missing @data section"});
  if (!issues.empty()) throw ParseError(std::string(source), std::move(issues));
  return records;
}

void write_csv(std::ostream& out, std::span<const RawRecord> records) {
  for (std::size_t i = 0; i < kRawFeatureCount; ++i) out << 'f' << i << ',';
  out << "label\n";
  std::array<char, 32> buf{};
  for (const auto& r : records) {
    for (double v : r.features) {
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      out.write(buf.data(), res.ptr - buf.data());
      out << ',';
    }
    out << static_cast<int>(r.label8) << '\n';
  }
}

}  // namespace iiotsec::dataset
