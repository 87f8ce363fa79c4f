#include "smoothrank/survival_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "smoothrank/error.hpp"

namespace smoothrank {

SurvivalDataset::SurvivalDataset(std::vector<SurvivalRecord> records,
                                 std::vector<std::string> feature_names)
    : records_(std::move(records)), feature_names_(std::move(feature_names)) {
  if (records_.size() < 2) throw Error("dataset needs at least 2 records");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.covariates.size() != feature_names_.size())
      throw Error("record " + std::to_string(i) + " has " + std::to_string(r.covariates.size()) +
                  " covariates, expected " + std::to_string(feature_names_.size()));
    if (!(r.time > 0.0) || !std::isfinite(r.time))
      throw Error("record " + std::to_string(i) + " has non-positive time");
  }
}

std::vector<SurvivalTarget> SurvivalDataset::targets() const {
  std::vector<SurvivalTarget> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back({r.time, r.event});
  return out;
}

std::size_t SurvivalDataset::missing_count() const {
  std::size_t n = 0;
  for (const auto& r : records_)
    n += static_cast<std::size_t>(std::count(r.covariates.begin(), r.covariates.end(), std::nullopt));
  return n;
}

SurvivalDataset SurvivalDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<SurvivalRecord> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(records_.at(i));
  return SurvivalDataset(std::move(picked), feature_names_);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA"; }

std::optional<double> parse_double(const std::string& cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::size_t column_of(const std::map<std::string, std::size_t>& index, const std::string& name) {
  const auto it = index.find(name);
  if (it == index.end()) throw ParseError("column '" + name + "' not found in header", 0, 0);
  return it->second;
}

std::string where(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

}  // namespace

std::vector<std::string> parse_feature_list(const std::string& list) {
  std::vector<std::string> names;
  if (list.empty() || list == "rest") return names;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    name = trim(name);
    if (!name.empty()) names.push_back(name);
  }
  return names;
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::map<std::string, std::size_t> index;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (data row, cells)
};

CsvTable read_table(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input: header row required", 0, 0);
  t.header = split_csv_line(line);
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    t.header[c] = trim(t.header[c]);
    if (!t.index.emplace(t.header[c], c).second)
      throw ParseError("duplicate column '" + t.header[c] + "'", 0, c + 1);
  }
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    auto cells = split_csv_line(line);
    if (cells.size() != t.header.size())
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(t.header.size()) +
                           " cells, found " + std::to_string(cells.size()),
                       row, 0);
    for (auto& c : cells) c = trim(c);
    t.rows.emplace_back(row, std::move(cells));
  }
  return t;
}

SurvivalTarget parse_target(const std::vector<std::string>& cells, std::size_t row,
                            std::size_t time_col, std::size_t event_col) {
  SurvivalTarget target;
  const auto time = parse_double(cells[time_col]);
  if (!time)
    throw ParseError(where(row, time_col + 1) + ": invalid time '" + cells[time_col] + "'", row,
                     time_col + 1);
  if (*time <= 0.0)
    throw ParseError(where(row, time_col + 1) + ": time must be positive", row, time_col + 1);
  target.time = *time;

  const std::string& ev = cells[event_col];
  if (ev == "1")
    target.event = true;
  else if (ev == "0")
    target.event = false;
  else
    throw ParseError(where(row, event_col + 1) + ": event must be 0 or 1, got '" + ev + "'", row,
                     event_col + 1);
  return target;
}

Covariates parse_covariates(const std::vector<std::string>& cells, std::size_t row,
                            std::span<const std::size_t> columns) {
  Covariates out;
  out.reserve(columns.size());
  for (std::size_t c : columns) {
    if (is_missing(cells[c])) {
      out.emplace_back(std::nullopt);
      continue;
    }
    const auto v = parse_double(cells[c]);
    if (!v) throw ParseError(where(row, c + 1) + ": invalid number '" + cells[c] + "'", row, c + 1);
    out.emplace_back(*v);
  }
  return out;
}

}  // namespace

SurvivalDataset read_csv(std::istream& in, const CsvSchema& schema) {
  const auto table = read_table(in);
  const std::size_t time_col = column_of(table.index, schema.time_col);
  const std::size_t event_col = column_of(table.index, schema.event_col);
  std::vector<std::string> names = schema.feature_cols;
  if (names.empty()) {
    for (std::size_t c = 0; c < table.header.size(); ++c)
      if (c != time_col && c != event_col) names.push_back(table.header[c]);
  }
  if (names.empty()) throw ParseError("no feature columns", 0, 0);
  std::vector<std::size_t> feature_cols;
  for (const auto& n : names) {
    const std::size_t c = column_of(table.index, n);
    if (c == time_col || c == event_col)
      throw ParseError("column '" + n + "' cannot be both a feature and a target", 0, c + 1);
    feature_cols.push_back(c);
  }

  std::vector<SurvivalRecord> records;
  records.reserve(table.rows.size());
  for (const auto& [row, cells] : table.rows) {
    const auto target = parse_target(cells, row, time_col, event_col);
    records.push_back({parse_covariates(cells, row, feature_cols), target.time, target.event});
  }
  return SurvivalDataset(std::move(records), std::move(names));
}

ScoringTable read_scoring_table(std::istream& in, const std::vector<std::string>& feature_names,
                                const CsvSchema& schema) {
  const auto table = read_table(in);
  std::vector<std::size_t> feature_cols;
  for (const auto& n : feature_names) feature_cols.push_back(column_of(table.index, n));
  const auto time_it = table.index.find(schema.time_col);
  const auto event_it = table.index.find(schema.event_col);
  const bool with_targets = time_it != table.index.end() && event_it != table.index.end();

  ScoringTable out;
  if (with_targets) out.targets.emplace();
  for (const auto& [row, cells] : table.rows) {
    out.rows.push_back(parse_covariates(cells, row, feature_cols));
    if (with_targets) out.targets->push_back(parse_target(cells, row, time_it->second, event_it->second));
  }
  return out;
}

ScoringTable load_scoring_table(const std::filesystem::path& path,
                                const std::vector<std::string>& feature_names, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_scoring_table(in, feature_names, schema);
}

SurvivalDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_csv(in, schema);
}

void write_csv(const SurvivalDataset& data, std::ostream& out) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "time,event";
  for (const auto& n : data.feature_names()) out << ',' << n;
  out << '\n';
  for (const auto& r : data.records()) {
    out << r.time << ',' << (r.event ? 1 : 0);
    for (const auto& v : r.covariates) {
      out << ',';
      if (v)
        out << *v;
      else
        out << "NA";
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void save_csv(const SurvivalDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_csv(data, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Binarization

BinarizationSpec select_threshold(const SurvivalDataset& data) {
  auto targets = data.targets();
  std::sort(targets.begin(), targets.end(),
            [](const SurvivalTarget& a, const SurvivalTarget& b) { return a.time < b.time; });
  const std::size_t n = targets.size();

  bool found = false;
  BinarizationSpec best;
  std::size_t best_gap = 0;
  std::size_t early = 0;  // events with time <= candidate
  for (std::size_t i = 0; i < n;) {
    // Consume every record tied at this time.
    const double t = targets[i].time;
    bool has_event = false;
    std::size_t j = i;
    for (; j < n && targets[j].time == t; ++j) {
      if (targets[j].event) {
        ++early;
        has_event = true;
      }
    }
    const std::size_t survivors = n - j;
    if (has_event && survivors > 0) {
      const std::size_t gap = early > survivors ? early - survivors : survivors - early;
      if (!found || gap < best_gap) {
        found = true;
        best_gap = gap;
        best.threshold = t;
      }
    }
    i = j;
  }
  if (!found) throw Error("no event time splits the data into two non-empty classes");
  return best;
}

std::vector<BinarySample> binarize(const SurvivalDataset& data, const BinarizationSpec& spec) {
  std::vector<BinarySample> out;
  std::size_t early = 0;
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& r = data[i];
    if (r.time > spec.threshold) {
      out.push_back({r.covariates, SampleClass::Survivor, i});
      ++survivors;
    } else if (r.event) {
      out.push_back({r.covariates, SampleClass::EarlyFailure, i});
      ++early;
    }
  }
  if (early == 0 || survivors == 0)
    throw Error("binarization at threshold " + std::to_string(spec.threshold) +
                " leaves a class empty");
  return out;
}

// ---------------------------------------------------------------------------
// Imputation

SurvivalDataset impute_knn(const SurvivalDataset& data, std::size_t k) {
  if (k == 0) throw Error("impute_knn: k must be positive");
  const std::size_t n = data.size();
  const std::size_t m = data.feature_count();

  // Standardization over observed values.
  std::vector<double> center(m, 0.0), scale(m, 1.0);
  for (std::size_t f = 0; f < m; ++f) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : data.records())
      if (r.covariates[f]) {
        sum += *r.covariates[f];
        ++count;
      }
    if (count == 0) throw Error("impute_knn: feature '" + data.feature_names()[f] + "' is missing in every record");
    center[f] = sum / static_cast<double>(count);
    double ss = 0.0;
    for (const auto& r : data.records())
      if (r.covariates[f]) ss += (*r.covariates[f] - center[f]) * (*r.covariates[f] - center[f]);
    if (count > 1 && ss > 0.0) scale[f] = std::sqrt(ss / static_cast<double>(count - 1));
  }

  std::vector<SurvivalRecord> records = data.records();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = data[i].covariates;
    if (std::none_of(row.begin(), row.end(), [](const auto& v) { return v.has_value(); }))
      throw Error("impute_knn: record " + std::to_string(i) + " has no observed covariates");
    if (std::all_of(row.begin(), row.end(), [](const auto& v) { return v.has_value(); })) continue;

    // Distance from record i to every other record sharing at least one feature.
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& other = data[j].covariates;
      double ss = 0.0;
      std::size_t shared = 0;
      for (std::size_t f = 0; f < m; ++f) {
        if (row[f] && other[f]) {
          const double d = (*row[f] - *other[f]) / scale[f];
          ss += d * d;
          ++shared;
        }
      }
      if (shared > 0) dist.emplace_back(std::sqrt(ss / static_cast<double>(shared)), j);
    }
    std::sort(dist.begin(), dist.end());

    for (std::size_t f = 0; f < m; ++f) {
      if (row[f]) continue;
      double sum = 0.0;
      std::size_t used = 0;
      for (const auto& [d, j] : dist) {
        if (used == k) break;
        if (const auto& v = data[j].covariates[f]) {
          sum += *v;
          ++used;
        }
      }
      if (used == 0)
        throw Error("impute_knn: record " + std::to_string(i) + " shares no features with any record observing '" +
                    data.feature_names()[f] + "'");
      records[i].covariates[f] = sum / static_cast<double>(used);
    }
  }
  return SurvivalDataset(std::move(records), data.feature_names());
}

}  // namespace smoothrank
