#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace first {

enum class FactorKind { continuous, categorical };

/// One input factor. Continuous factors carry `values`; categorical factors
/// carry `labels`. The other vector stays empty.
struct Column {
  std::string name;
  FactorKind kind = FactorKind::continuous;
  std::vector<double> values;
  std::vector<std::string> labels;

  static Column continuous(std::string name, std::vector<double> values);
  static Column categorical(std::string name, std::vector<std::string> labels);

  [[nodiscard]] std::size_t size() const noexcept {
    return kind == FactorKind::continuous ? values.size() : labels.size();
  }
};

/// N rows of p factors plus a scalar response. Immutable once built; the
/// constructor enforces N >= 2, p >= 1, equal column lengths and finite
/// numeric cells.
class Dataset {
 public:
  Dataset(std::vector<Column> factors, std::vector<double> response,
          std::string response_name = "y");

  [[nodiscard]] std::size_t rows() const noexcept { return response_.size(); }
  [[nodiscard]] std::size_t factors() const noexcept { return factors_.size(); }
  [[nodiscard]] const Column& factor(std::size_t j) const { return factors_.at(j); }
  [[nodiscard]] const std::vector<Column>& columns() const noexcept { return factors_; }
  [[nodiscard]] std::span<const double> response() const noexcept { return response_; }
  [[nodiscard]] const std::string& response_name() const noexcept { return response_name_; }
  [[nodiscard]] std::vector<std::string> factor_names() const;

  /// True when every response value is exactly 0 or 1.
  [[nodiscard]] bool binary_response() const noexcept;

  /// Row i of the result is row order[i] of this dataset.
  [[nodiscard]] Dataset permute_rows(std::span<const std::size_t> order) const;

 private:
  std::vector<Column> factors_;
  std::vector<double> response_;
  std::string response_name_;
};

enum class MissingPolicy { reject, drop_rows };

struct CsvOptions {
  std::string response;
  std::vector<std::string> categoricals;
  MissingPolicy on_missing = MissingPolicy::reject;
};

struct LoadedCsv {
  Dataset data;
  std::size_t dropped_rows = 0;
};

/// Read an RFC-4180 style CSV with a header row. Empty cells and the tokens
/// NA / NaN (any case) count as missing. A non-numeric response with exactly
/// two distinct labels is coded 0/1 in lexicographic order.
LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& options);
LoadedCsv parse_csv(std::string_view text, const CsvOptions& options);

/// Write the dataset back in the format load_csv reads (factors first, then
/// the response column). Doubles are written with round-trip precision.
void write_csv(const Dataset& data, const std::filesystem::path& path);
std::string to_csv(const Dataset& data);

/// Per-encoded-column standardisation record.
struct ColumnScale {
  double mean = 0.0;
  double sd = 1.0;
};

/// Numeric, row-major N x q matrix derived from a Dataset. Continuous factors
/// map to one column (z-scored by default), categorical factors to one unit
/// column per observed level. Constant factors encode as all-zero columns.
class EncodedMatrix {
 public:
  EncodedMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                std::vector<std::vector<std::size_t>> groups, std::vector<ColumnScale> scale,
                std::vector<std::size_t> constant_factors);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t factors() const noexcept { return groups_.size(); }
  [[nodiscard]] double at(std::size_t row, std::size_t col) const {
    return values_[row * cols_ + col];
  }
  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<std::size_t>& group(std::size_t factor) const {
    return groups_.at(factor);
  }
  [[nodiscard]] const std::vector<ColumnScale>& scale() const noexcept { return scale_; }
  /// Factors whose raw column was constant (flagged, not fatal).
  [[nodiscard]] const std::vector<std::size_t>& constant_factors() const noexcept {
    return constant_factors_;
  }

  /// Encoded column indices owned by the given factors, in factor order.
  [[nodiscard]] std::vector<std::size_t> columns_for(std::span<const std::size_t> factors) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<ColumnScale> scale_;
  std::vector<std::size_t> constant_factors_;
};

EncodedMatrix encode(const Dataset& data, bool standardize = true);

/// Wrap an already numeric row-major matrix (one column per factor) without
/// any standardisation.
EncodedMatrix encode_raw(std::size_t rows, std::size_t cols, std::vector<double> values);

}  // namespace first
