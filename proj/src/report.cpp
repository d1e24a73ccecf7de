#include "chs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "chs/errors.hpp"
#include "json.hpp"

namespace chs {

namespace {

using Json = nlohmann::ordered_json;

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(x) ? Json(round12(x)) : Json(nullptr);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          Json arr = Json::array();
          for (double d : x) arr.push_back(std::isfinite(d) ? Json(round12(d)) : Json(nullptr));
          return arr;
        } else {
          return Json(x);
        }
      },
      v);
}

std::string to_text(const Value& v, char vector_sep) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          std::string s;
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i > 0) s += vector_sep;
            s += format_real(x[i]);
          }
          return s;
        }
      },
      v);
}

bool is_numeric(const Value& v) {
  return std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += csv_cell(cells[i]);
  }
  return line + "\n";
}

Json report_json(const Report& r) {
  Json j;
  j["name"] = r.name;
  if (r.pass) j["pass"] = *r.pass;
  for (const auto& [k, v] : r.fields) j[k] = to_json(v);
  if (r.table) {
    Json t;
    t["columns"] = r.table->columns;
    Json rows = Json::array();
    for (const auto& row : r.table->rows) {
      Json jr = Json::array();
      for (const auto& cell : row) jr.push_back(to_json(cell));
      rows.push_back(jr);
    }
    t["rows"] = rows;
    j["table"] = t;
  }
  return j;
}

std::string emit_csv(const Report& r) {
  std::string out;
  if (r.table) {
    out += csv_line(r.table->columns);
    for (const auto& row : r.table->rows) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(to_text(c, ';'));
      out += csv_line(cells);
    }
    return out;
  }
  std::vector<std::string> header = {"name"};
  std::vector<std::string> values = {r.name};
  if (r.pass) {
    header.emplace_back("pass");
    values.emplace_back(*r.pass ? "true" : "false");
  }
  for (const auto& [k, v] : r.fields) {
    header.push_back(k);
    values.push_back(to_text(v, ';'));
  }
  return csv_line(header) + csv_line(values);
}

std::string emit_pretty(const Report& r) {
  std::ostringstream out;
  out << r.name;
  if (r.pass) out << "  [" << (*r.pass ? "PASS" : "FAIL") << "]";
  out << "\n";
  std::size_t key_width = 0;
  for (const auto& f : r.fields) key_width = std::max(key_width, f.first.size());
  for (const auto& [k, v] : r.fields) {
    out << "  " << k << std::string(key_width - k.size(), ' ') << "  " << to_text(v, ' ') << "\n";
  }
  if (r.table) {
    const auto& t = *r.table;
    std::vector<std::size_t> width(t.columns.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
    for (const auto& row : t.rows) {
      std::vector<std::string> line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        line.push_back(to_text(row[c], ' '));
        if (c < width.size()) width[c] = std::max(width[c], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    const auto pad = [&](const std::string& s, std::size_t w, bool right) {
      const std::string fill(w > s.size() ? w - s.size() : 0, ' ');
      return right ? fill + s : s + fill;
    };
    out << " ";
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << " " << pad(t.columns[c], width[c], true);
    out << "\n";
    for (std::size_t r_i = 0; r_i < cells.size(); ++r_i) {
      out << " ";
      for (std::size_t c = 0; c < cells[r_i].size() && c < width.size(); ++c) {
        out << " " << pad(cells[r_i][c], width[c], is_numeric(t.rows[r_i][c]));
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace

void Table::add_row(std::vector<Value> row) {
  if (row.size() != columns.size()) throw LengthMismatch("table row width differs from header");
  rows.push_back(std::move(row));
}

Report& Report::set(std::string key, Value v) {
  for (auto& f : fields) {
    if (f.first == key) {
      f.second = std::move(v);
      return *this;
    }
  }
  fields.emplace_back(std::move(key), std::move(v));
  return *this;
}

const Value& Report::get(std::string_view key) const {
  for (const auto& f : fields) {
    if (f.first == key) return f.second;
  }
  throw InvalidArgument("report has no field '" + std::string(key) + "'");
}

double Report::number(std::string_view key) const {
  const Value& v = get(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw InvalidArgument("report field '" + std::string(key) + "' is not numeric");
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::pretty: return "pretty";
  }
  return "?";
}

Format parse_format(std::string_view name) {
  for (Format f : {Format::json, Format::csv, Format::pretty}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown output format '" + std::string(name) + "'");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string emit(const Report& r, Format f) {
  switch (f) {
    case Format::json: return report_json(r).dump(2) + "\n";
    case Format::csv: return emit_csv(r);
    case Format::pretty: return emit_pretty(r);
  }
  return {};
}

std::string emit(std::span<const Report> rs, Format f) {
  if (f == Format::json) {
    Json arr = Json::array();
    for (const auto& r : rs) arr.push_back(report_json(r));
    return arr.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (i > 0) out += "\n";
    out += emit(rs[i], f);
  }
  return out;
}

}  // namespace chs
