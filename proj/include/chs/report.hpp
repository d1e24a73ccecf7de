#pragma once

// Structured results shared by the verification suite and the CLI, with
// JSON, CSV and aligned-text serializers.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace chs {

using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row);
};

struct Report {
  std::string name;
  std::vector<std::pair<std::string, Value>> fields;  // insertion order is output order
  std::optional<Table> table;
  std::optional<bool> pass;  // unset for informational reports

  Report& set(std::string key, Value v);
  /// Throws InvalidArgument when the key is absent.
  const Value& get(std::string_view key) const;
  double number(std::string_view key) const;
};

enum class Format { json, csv, pretty };

std::string_view to_string(Format f);
Format parse_format(std::string_view name);

/// Real numbers are written with 12 significant digits in every format.
std::string format_real(double v);

std::string emit(const Report& r, Format f);
/// Several reports: a JSON array, or the single-report forms separated by
/// blank lines.
std::string emit(std::span<const Report> rs, Format f);

}  // namespace chs
