#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iiotsec/common/error.hpp"

namespace iiotsec::dataset {

/// Attribute count of the gas-pipeline SCADA layout, label excluded.
inline constexpr std::size_t kRawFeatureCount = 27;

enum class ClassLabel8 : int {
  Normal = 0,
  NMRI = 1,  // naive malicious response injection
  CMRI = 2,  // complex malicious response injection
  MSCI = 3,  // malicious state command injection
  MPCI = 4,  // malicious parameter command injection
  MFCI = 5,  // malicious function code injection
  DoS = 6,
  Recon = 7,
};

enum class ClassLabel4 : int { Normal = 0, Injection = 1, DoS = 2, Recon = 3 };

enum class BinaryLabel : int { Normal = 0, Attack = 1 };

inline constexpr std::size_t kLabel8Count = 8;
inline constexpr std::size_t kLabel4Count = 4;

using RawFeatures = std::array<double, kRawFeatureCount>;

struct RawRecord {
  RawFeatures features{};
  ClassLabel8 label8 = ClassLabel8::Normal;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

ClassLabel4 regroup_label(ClassLabel8 label);
BinaryLabel to_binary(ClassLabel8 label);

std::optional<ClassLabel8> label8_from_int(int value);
std::optional<ClassLabel4> label4_from_int(int value);

std::string_view label_name(ClassLabel8 label);
std::string_view label_name(ClassLabel4 label);
std::string_view label_name(BinaryLabel label);

/// Accepts both 8-class names ("MSCI") and 4-class group names ("Injection").
std::optional<ClassLabel8> label8_from_name(std::string_view name);
std::optional<ClassLabel4> label4_from_name(std::string_view name);

/// One malformed input row.
struct RowIssue {
  std::size_t line = 0;
  std::string message;
};

/// Thrown by the loaders. Carries every malformed row, not just the first.
class ParseError : public DataError {
 public:
  ParseError(std::string source, std::vector<RowIssue> issues);

  const std::vector<RowIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<RowIssue> issues_;
};

enum class FileFormat { Csv, Arff };

/// Picks the format from the file extension (.arff, otherwise CSV).
FileFormat format_from_path(const std::filesystem::path& path);

std::vector<RawRecord> load_records(const std::filesystem::path& path, FileFormat format);
std::vector<RawRecord> parse_csv(std::istream& in, std::string_view source = "<stream>");
std::vector<RawRecord> parse_arff(std::istream& in, std::string_view source = "<stream>");

/// Writes records in the CSV layout accepted by parse_csv (with header).
void write_csv(std::ostream& out, std::span<const RawRecord> records);

}  // namespace iiotsec::dataset
