// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "flampred/csv.hpp"
#include "flampred/error.hpp"

namespace flampred {

std::string_view to_string(FiLabel label) {
  switch (label) {
    case FiLabel::kLow: return "L";
    case FiLabel::kMedium: return "M";
    case FiLabel::kHigh: return "H";
  }
  return "?";
}

std::optional<FiLabel> parse_fi_label(std::string_view text) {
  if (text == "L") return FiLabel::kLow;
  if (text == "M") return FiLabel::kMedium;
  if (text == "H") return FiLabel::kHigh;
  return std::nullopt;
}

std::string_view to_string(RangeClass range) {
  switch (range) {
    case RangeClass::kLow: return "L";
    case RangeClass::kMedium: return "M";
    case RangeClass::kHigh: return "H";
    case RangeClass::kUnclassified: return "Unclassified";
  }
  return "?";
}

std::string_view to_string(Target target) {
  switch (target) {
    case Target::kFI: return "FI";
    case Target::kTIG: return "TIG";
    case Target::kPHRR: return "pHRR";
    case Target::kTSR: return "TSR";
    case Target::kFIGRA: return "FIGRA";
  }
  return "?";
}

Target parse_target(std::string_view text) {
  for (Target t : kAllTargets) {
    std::string_view name = to_string(t);
    if (name.size() == text.size() &&
        std::equal(name.begin(), name.end(), text.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) ==
                 std::tolower(static_cast<unsigned char>(b));
        }))
      return t;
  }
  throw ConfigError("unknown target '" + std::string(text) + "'");
}

double ConeRecord::value(Target target) const {
  switch (target) {
    case Target::kTIG: return tig;
    case Target::kPHRR: return phrr;
    case Target::kTSR: return tsr;
    case Target::kFIGRA: return figra;
    case Target::kFI: break;
  }
  throw ConfigError("FI is not a cone calorimetry quantity");
}

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError(std::string(field) + " must be > 0, got " + csv::format_double(value));
}

}  // namespace

double compute_fi(double cp_molar, double mol_wt, double t_ignition, double heat_combustion) {
  require_positive(cp_molar, "cp_molar");
  require_positive(mol_wt, "mol_wt");
  require_positive(t_ignition, "t_ignition");
  require_positive(heat_combustion, "heat_combustion");
  return (cp_molar / mol_wt) * t_ignition / heat_combustion;
}

double compute_figra(double phrr, double t_peak) {
  if (!(phrr >= 0.0)) throw DomainError("phrr must be >= 0");
  require_positive(t_peak, "t_peak");
  return phrr / t_peak;
}

RangeClass range_label(double fi, const LabelThresholds& thresholds) {
  if (thresholds.low.contains(fi)) return RangeClass::kLow;
  if (thresholds.medium.contains(fi)) return RangeClass::kMedium;
  if (thresholds.high.contains(fi)) return RangeClass::kHigh;
  return RangeClass::kUnclassified;
}

namespace {

// Maps header names to positions and checks the expected set is present.
class Header {
 public:
  Header(const csv::Row& header, std::initializer_list<std::string_view> required) {
    for (std::string_view name : required) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw LoadError("missing column '" + std::string(name) + "'");
      index_.emplace_back(name, static_cast<std::size_t>(it - header.begin()));
    }
    width_ = header.size();
  }

  std::size_t operator[](std::string_view name) const {
    for (const auto& [n, i] : index_)
      if (n == name) return i;
    throw std::logic_error("column not registered");
  }

  std::size_t width() const { return width_; }

 private:
  std::vector<std::pair<std::string_view, std::size_t>> index_;
  std::size_t width_ = 0;
};

double numeric_cell(const csv::Row& row, std::size_t col, std::string_view field,
                    std::size_t row_no) {
  double v = 0;
  if (!csv::parse_double(row[col], v) || !std::isfinite(v))
    throw LoadError("non-numeric value '" + row[col] + "' in column " + std::string(field),
                    row_no);
  return v;
}

double positive_cell(const csv::Row& row, std::size_t col, std::string_view field,
                     std::size_t row_no, bool allow_zero = false) {
  const double v = numeric_cell(row, col, field, row_no);
  if (allow_zero ? v < 0.0 : v <= 0.0)
    throw LoadError(std::string(field) + (allow_zero ? " must be >= 0" : " must be > 0"), row_no);
  return v;
}

std::vector<csv::Row> read_nonempty(const std::filesystem::path& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw LoadError(path.string() + " is empty");
  return rows;
}

}  // namespace

std::vector<PolymerRecord> load_fi_table(const std::filesystem::path& path) {
  const auto rows = read_nonempty(path);
  const Header h(rows[0], {"name", "mol_wt", "cp_molar", "t_ignition", "heat_combustion", "fi",
                           "label"});
  std::vector<PolymerRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.width()) throw LoadError("wrong number of fields", r);
    PolymerRecord rec;
    rec.name = row[h["name"]];
    rec.mol_wt = positive_cell(row, h["mol_wt"], "mol_wt", r);
    rec.cp_molar = positive_cell(row, h["cp_molar"], "cp_molar", r);
    rec.t_ignition = positive_cell(row, h["t_ignition"], "t_ignition", r);
    rec.heat_combustion = positive_cell(row, h["heat_combustion"], "heat_combustion", r);
    rec.fi = positive_cell(row, h["fi"], "fi", r);
    const std::string& label = row[h["label"]];
    if (!label.empty()) {
      rec.label = parse_fi_label(label);
      if (!rec.label) throw LoadError("label must be L, M or H, got '" + label + "'", r);
    }
    const double fi = compute_fi(rec.cp_molar, rec.mol_wt, rec.t_ignition, rec.heat_combustion);
    if (std::fabs(fi - rec.fi) > kFiConsistencyTolerance)
      throw LoadError("FI " + row[h["fi"]] + " of '" + rec.name + "' inconsistent with computed " +
                          csv::format_double(fi),
                      r);
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw LoadError(path.string() + " has no data rows");
  return out;
}

std::vector<ConeRecord> load_cone_table(const std::filesystem::path& path) {
  const auto rows = read_nonempty(path);
  const Header h(rows[0], {"name", "tig", "phrr", "tsr", "figra"});
  std::vector<ConeRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.width()) throw LoadError("wrong number of fields", r);
    ConeRecord rec;
    rec.name = row[h["name"]];
    rec.tig = positive_cell(row, h["tig"], "tig", r);
    rec.phrr = positive_cell(row, h["phrr"], "phrr", r);
    rec.tsr = positive_cell(row, h["tsr"], "tsr", r, /*allow_zero=*/true);
    rec.figra = positive_cell(row, h["figra"], "figra", r);
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw LoadError(path.string() + " has no data rows");
  return out;
}

std::size_t FeatureTable::column_index(std::string_view name) const {
  auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - column_names.begin());
}

std::vector<double> FeatureTable::column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(index));
  return out;
}

std::vector<std::size_t> FeatureTable::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < column_names.size(); ++i)
    if (!target_column || column_names[i] != *target_column) out.push_back(i);
  return out;
}

std::vector<std::string> FeatureTable::feature_names() const {
  std::vector<std::string> out;
  for (std::size_t i : feature_indices()) out.push_back(column_names[i]);
  return out;
}

std::vector<double> FeatureTable::target_values() const {
  if (!target_column) throw ConfigError("table has no target column");
  return column(column_index(*target_column));
}

std::vector<std::vector<double>> FeatureTable::matrix(
    const std::vector<std::size_t>& columns) const {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<double> r;
    r.reserve(columns.size());
    for (std::size_t c : columns) r.push_back(row.at(c));
    out.push_back(std::move(r));
  }
  return out;
}

void FeatureTable::validate() const {
  if (!row_names.empty() && row_names.size() != rows.size())
    throw LoadError("row name count does not match row count");
  if (target_column &&
      std::find(column_names.begin(), column_names.end(), *target_column) == column_names.end())
    throw LoadError("target column '" + *target_column + "' not present");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != column_names.size()) throw LoadError("ragged row", r + 1);
    for (double v : rows[r])
      if (!std::isfinite(v)) throw LoadError("non-finite value", r + 1);
  }
}

FeatureTable load_feature_table(const std::filesystem::path& path,
                                std::optional<std::string> target_column) {
  const auto rows = read_nonempty(path);
  const csv::Row& header = rows[0];
  std::string first = header.empty() ? "" : header[0];
  std::transform(first.begin(), first.end(), first.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const bool has_names = first == "name";

  FeatureTable table;
  table.column_names.assign(header.begin() + (has_names ? 1 : 0), header.end());
  if (table.column_names.empty()) throw LoadError("no numeric columns");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) throw LoadError("ragged row", r);
    if (has_names) table.row_names.push_back(row[0]);
    std::vector<double> values;
    values.reserve(table.column_names.size());
    for (std::size_t c = has_names ? 1 : 0; c < row.size(); ++c)
      values.push_back(numeric_cell(row, c, header[c], r));
    table.rows.push_back(std::move(values));
  }
  table.target_column = std::move(target_column);
  table.validate();
  return table;
}

std::string feature_table_csv(const FeatureTable& table) {
  std::ostringstream out;
  const bool names = !table.row_names.empty();
  csv::Row header;
  if (names) header.push_back("name");
  header.insert(header.end(), table.column_names.begin(), table.column_names.end());
  csv::write_row(out, header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    csv::Row row;
    if (names) row.push_back(table.row_names[r]);
    for (double v : table.rows[r]) row.push_back(csv::format_double(v));
    csv::write_row(out, row);
  }
  return out.str();
}

void write_feature_table(const FeatureTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  out << feature_table_csv(table);
}

}  // namespace flampred
