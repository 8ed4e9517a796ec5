#include "dfeg/core/timeseries.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "dfeg/core/types.hpp"

namespace dfeg {

TimeSeries::TimeSeries(std::vector<std::string> columns) : columns_(std::move(columns)) {}

bool TimeSeries::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t TimeSeries::column_index(std::string_view name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw DimensionError("time series: no column " + std::string(name));
  return static_cast<std::size_t>(it - columns_.begin());
}

void TimeSeries::push_row(std::vector<double> row) {
  if (row.size() != columns_.size()) throw DimensionError("time series: row width mismatch");
  rows_.push_back(std::move(row));
}

double TimeSeries::at(std::size_t r, std::string_view name) const {
  return rows_.at(r)[column_index(name)];
}

std::vector<double> TimeSeries::column(std::string_view name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

void TimeSeries::add_column(std::string name, std::vector<double> values) {
  if (values.size() != rows_.size()) throw DimensionError("time series: column length mismatch");
  columns_.push_back(std::move(name));
  for (std::size_t r = 0; r < rows_.size(); ++r) rows_[r].push_back(values[r]);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string TimeSeries::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += columns_[c];
  }
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += ',';
      out += format_double(r[c]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error("write failed: " + path);
}

void TimeSeries::write_csv(const std::string& path) const { write_text_file(path, to_csv()); }

const std::vector<std::string>& standard_columns() {
  static const std::vector<std::string> cols = {
      "t",  "beta", "z",     "p3",    "alpha3",   "S1",   "S2",
      "S3", "gamma5", "Theta", "Phi", "theta_YT", "norm", "purity"};
  return cols;
}

}  // namespace dfeg
