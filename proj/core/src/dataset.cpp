#include "first/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "first/error.hpp"

namespace first {

Column Column::continuous(std::string name, std::vector<double> values) {
  Column c;
  c.name = std::move(name);
  c.kind = FactorKind::continuous;
  c.values = std::move(values);
  return c;
}

Column Column::categorical(std::string name, std::vector<std::string> labels) {
  Column c;
  c.name = std::move(name);
  c.kind = FactorKind::categorical;
  c.labels = std::move(labels);
  return c;
}

Dataset::Dataset(std::vector<Column> factors, std::vector<double> response,
                 std::string response_name)
    : factors_(std::move(factors)),
      response_(std::move(response)),
      response_name_(std::move(response_name)) {
  if (response_.size() < 2) throw InputError("dataset needs at least 2 rows");
  if (factors_.empty()) throw InputError("dataset needs at least 1 factor");
  for (double v : response_) {
    if (!std::isfinite(v)) throw InputError("response contains a non-finite value");
  }
  for (const auto& col : factors_) {
    if (col.size() != response_.size()) {
      throw InputError("factor '" + col.name + "' has " + std::to_string(col.size()) +
                       " rows, response has " + std::to_string(response_.size()));
    }
    if (col.kind == FactorKind::continuous) {
      if (!col.labels.empty()) throw InputError("continuous factor '" + col.name + "' has labels");
      for (double v : col.values) {
        if (!std::isfinite(v)) throw InputError("factor '" + col.name + "' has a non-finite value");
      }
    } else if (!col.values.empty()) {
      throw InputError("categorical factor '" + col.name + "' has numeric values");
    }
  }
}

std::vector<std::string> Dataset::factor_names() const {
  std::vector<std::string> names;
  names.reserve(factors_.size());
  for (const auto& col : factors_) names.push_back(col.name);
  return names;
}

bool Dataset::binary_response() const noexcept {
  return std::all_of(response_.begin(), response_.end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

Dataset Dataset::permute_rows(std::span<const std::size_t> order) const {
  if (order.size() != rows()) throw InputError("permutation length does not match row count");
  std::vector<Column> cols;
  cols.reserve(factors_.size());
  for (const auto& col : factors_) {
    Column out;
    out.name = col.name;
    out.kind = col.kind;
    if (col.kind == FactorKind::continuous) {
      out.values.reserve(order.size());
      for (std::size_t r : order) out.values.push_back(col.values.at(r));
    } else {
      out.labels.reserve(order.size());
      for (std::size_t r : order) out.labels.push_back(col.labels.at(r));
    }
    cols.push_back(std::move(out));
  }
  std::vector<double> y;
  y.reserve(order.size());
  for (std::size_t r : order) y.push_back(response_.at(r));
  return Dataset(std::move(cols), std::move(y), response_name_);
}

EncodedMatrix::EncodedMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                             std::vector<std::vector<std::size_t>> groups,
                             std::vector<ColumnScale> scale,
                             std::vector<std::size_t> constant_factors)
    : rows_(rows),
      cols_(cols),
      values_(std::move(values)),
      groups_(std::move(groups)),
      scale_(std::move(scale)),
      constant_factors_(std::move(constant_factors)) {
  if (values_.size() != rows_ * cols_) throw InputError("encoded matrix has the wrong size");
  if (scale_.size() != cols_) throw InputError("encoded matrix scale does not cover every column");
  std::vector<int> owner(cols_, 0);
  for (const auto& g : groups_) {
    if (g.empty()) throw InputError("every factor must own at least one encoded column");
    for (std::size_t c : g) {
      if (c >= cols_ || owner[c]++ != 0) throw InputError("factor groups must partition columns");
    }
  }
  if (std::find(owner.begin(), owner.end(), 0) != owner.end()) {
    throw InputError("factor groups must partition columns");
  }
}

std::vector<std::size_t> EncodedMatrix::columns_for(std::span<const std::size_t> factors) const {
  std::vector<std::size_t> cols;
  for (std::size_t f : factors) {
    const auto& g = group(f);
    cols.insert(cols.end(), g.begin(), g.end());
  }
  return cols;
}

namespace {

// Mean and sample sd accumulated over the sorted values so that the result
// does not depend on row order.
ColumnScale column_moments(const std::vector<double>& values) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  std::vector<double> sq(sorted.size());
  std::transform(sorted.begin(), sorted.end(), sq.begin(),
                 [mean](double v) { return (v - mean) * (v - mean); });
  std::sort(sq.begin(), sq.end());
  const double ss = std::accumulate(sq.begin(), sq.end(), 0.0);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

EncodedMatrix encode(const Dataset& data, bool standardize) {
  const std::size_t n = data.rows();

  // Lay out columns first so the row-major buffer can be filled in one pass.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::vector<std::string>> levels(data.factors());
  std::size_t q = 0;
  for (std::size_t j = 0; j < data.factors(); ++j) {
    const Column& col = data.factor(j);
    std::vector<std::size_t> g;
    if (col.kind == FactorKind::continuous) {
      g.push_back(q++);
    } else {
      levels[j] = col.labels;
      std::sort(levels[j].begin(), levels[j].end());
      levels[j].erase(std::unique(levels[j].begin(), levels[j].end()), levels[j].end());
      for (std::size_t l = 0; l < levels[j].size(); ++l) g.push_back(q++);
    }
    groups.push_back(std::move(g));
  }

  std::vector<double> values(n * q, 0.0);
  std::vector<ColumnScale> scale(q);
  std::vector<std::size_t> constant;
  for (std::size_t j = 0; j < data.factors(); ++j) {
    const Column& col = data.factor(j);
    if (col.kind == FactorKind::continuous) {
      const std::size_t c = groups[j].front();
      const auto [lo, hi] = std::minmax_element(col.values.begin(), col.values.end());
      if (*lo == *hi) {
        constant.push_back(j);
        scale[c] = {*lo, 0.0};
        continue;
      }
      if (standardize) {
        scale[c] = column_moments(col.values);
        for (std::size_t r = 0; r < n; ++r) {
          values[r * q + c] = (col.values[r] - scale[c].mean) / scale[c].sd;
        }
      } else {
        for (std::size_t r = 0; r < n; ++r) values[r * q + c] = col.values[r];
      }
    } else {
      if (levels[j].size() == 1) {
        constant.push_back(j);
        continue;
      }
      std::map<std::string_view, std::size_t> level_col;
      for (std::size_t l = 0; l < levels[j].size(); ++l) level_col[levels[j][l]] = groups[j][l];
      for (std::size_t r = 0; r < n; ++r) values[r * q + level_col.at(col.labels[r])] = 1.0;
    }
  }
  return EncodedMatrix(n, q, std::move(values), std::move(groups), std::move(scale),
                       std::move(constant));
}

EncodedMatrix encode_raw(std::size_t rows, std::size_t cols, std::vector<double> values) {
  std::vector<std::vector<std::size_t>> groups(cols);
  for (std::size_t c = 0; c < cols; ++c) groups[c] = {c};
  return EncodedMatrix(rows, cols, std::move(values), std::move(groups),
                       std::vector<ColumnScale>(cols), {});
}

}  // namespace first
