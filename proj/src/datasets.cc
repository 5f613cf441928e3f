// Copyright 2026 The dpsample Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpsample/datasets.h"

#include <string>

#include "dpsample/errors.h"

namespace dpsample {

KAryDataset::KAryDataset(std::vector<Element> records, std::size_t k)
    : records_(std::move(records)), k_(k) {
  if (k_ == 0) throw ParameterError("KAryDataset: k must be positive");
  for (Element e : records_) {
    if (e < 1 || e > k_) {
      throw ParameterError("KAryDataset: record " + std::to_string(e) +
                           " outside {1.." + std::to_string(k_) + "}");
    }
  }
}

std::vector<std::uint64_t> KAryDataset::Histogram() const {
  std::vector<std::uint64_t> counts(k_, 0);
  for (Element e : records_) ++counts[e - 1];
  return counts;
}

FrequencyCounts ComputeFrequencyCounts(const KAryDataset& x) {
  std::vector<std::uint64_t> counts(x.size() + 1, 0);
  for (std::uint64_t occurrences : x.Histogram()) ++counts[occurrences];
  return FrequencyCounts(std::move(counts));
}

BinaryDataset::BinaryDataset(std::size_t rows, std::size_t cols)
    : rows_(rows),
      cols_(cols),
      words_per_column_((rows + 63) / 64),
      words_(cols * ((rows + 63) / 64), 0) {}

BinaryDataset BinaryDataset::FromRows(
    const std::vector<std::vector<std::uint8_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  BinaryDataset out(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DimensionError("BinaryDataset: row " + std::to_string(i) +
                           " has length " + std::to_string(rows[i].size()) +
                           ", expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (rows[i][j] > 1) {
        throw ParameterError("BinaryDataset: entry is not 0 or 1");
      }
      if (rows[i][j] != 0) out.Set(i, j, true);
    }
  }
  return out;
}

std::vector<std::uint8_t> BinaryDataset::Row(std::size_t row) const {
  std::vector<std::uint8_t> out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out[j] = Get(row, j) ? 1 : 0;
  return out;
}

BinaryView::BinaryView(const BinaryDataset& data, std::size_t begin,
                       std::size_t count)
    : data_(&data), begin_(begin), count_(count) {
  if (begin + count > data.rows()) {
    throw DimensionError("BinaryView: rows [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") exceed " +
                         std::to_string(data.rows()));
  }
}

std::uint64_t BinaryView::ColumnCount(std::size_t col) const {
  if (count_ == 0) return 0;
  const auto words = data_->column(col);
  const std::size_t end = begin_ + count_;
  const std::size_t first = begin_ >> 6;
  const std::size_t last = (end - 1) >> 6;
  const std::uint64_t head_mask = ~std::uint64_t{0} << (begin_ & 63);
  const std::uint64_t tail_mask =
      (end & 63) == 0 ? ~std::uint64_t{0}
                      : (std::uint64_t{1} << (end & 63)) - 1;
  if (first == last) {
    return std::popcount(words[first] & head_mask & tail_mask);
  }
  std::uint64_t total = std::popcount(words[first] & head_mask);
  for (std::size_t w = first + 1; w < last; ++w) total += std::popcount(words[w]);
  total += std::popcount(words[last] & tail_mask);
  return total;
}

}  // namespace dpsample
