#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dfeg {

/// Column-named table of per-step records.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  bool has_column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;

  void push_row(std::vector<double> row);
  const std::vector<double>& row(std::size_t r) const { return rows_[r]; }
  double at(std::size_t r, std::string_view name) const;
  std::vector<double> column(std::string_view name) const;

  /// Appends a column; values.size() must equal rows().
  void add_column(std::string name, std::vector<double> values);

  /// Header plus one row per record, %.17g, LF line endings.
  std::string to_csv() const;
  void write_csv(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Columns shared by every evolution family.
const std::vector<std::string>& standard_columns();

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Writes text with LF line endings; throws Error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dfeg
