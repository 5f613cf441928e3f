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

#ifndef DPSAMPLE_DATASETS_H_
#define DPSAMPLE_DATASETS_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dpsample {

using Element = std::uint32_t;  // 1-based universe label.

// N records over the universe {1..k}. N may be zero.
class KAryDataset {
 public:
  KAryDataset(std::vector<Element> records, std::size_t k);

  std::size_t k() const { return k_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::span<const Element> records() const { return records_; }
  Element operator[](std::size_t i) const { return records_[i]; }

  // Histogram()[j] counts occurrences of element j + 1.
  std::vector<std::uint64_t> Histogram() const;

 private:
  std::vector<Element> records_;
  std::size_t k_;
};

// counts()[j] is the number of universe elements occurring exactly j times,
// j = 0..N.
class FrequencyCounts {
 public:
  explicit FrequencyCounts(std::vector<std::uint64_t> counts)
      : counts_(std::move(counts)) {}

  std::span<const std::uint64_t> counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
};

FrequencyCounts ComputeFrequencyCounts(const KAryDataset& x);

// An n x d bit matrix stored column-major, 64 rows per word. Bits past the
// last row of each column are always zero.
class BinaryDataset {
 public:
  BinaryDataset() = default;
  BinaryDataset(std::size_t rows, std::size_t cols);

  // From explicit 0/1 rows; all rows must share one length.
  static BinaryDataset FromRows(const std::vector<std::vector<std::uint8_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_column() const { return words_per_column_; }

  bool Get(std::size_t row, std::size_t col) const {
    return (column(col)[row >> 6] >> (row & 63)) & 1U;
  }
  void Set(std::size_t row, std::size_t col, bool value) {
    std::uint64_t& word = mutable_column(col)[row >> 6];
    const std::uint64_t mask = std::uint64_t{1} << (row & 63);
    word = value ? (word | mask) : (word & ~mask);
  }

  std::span<const std::uint64_t> column(std::size_t col) const {
    return {words_.data() + col * words_per_column_, words_per_column_};
  }
  std::span<std::uint64_t> mutable_column(std::size_t col) {
    return {words_.data() + col * words_per_column_, words_per_column_};
  }

  std::vector<std::uint8_t> Row(std::size_t row) const;

  bool operator==(const BinaryDataset& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_column_ = 0;
  std::vector<std::uint64_t> words_;
};

// A contiguous block of rows of a BinaryDataset. Does not own the data.
class BinaryView {
 public:
  explicit BinaryView(const BinaryDataset& data)
      : BinaryView(data, 0, data.rows()) {}
  BinaryView(const BinaryDataset& data, std::size_t begin, std::size_t count);

  std::size_t rows() const { return count_; }
  std::size_t cols() const { return data_->cols(); }
  const BinaryDataset& data() const { return *data_; }
  std::size_t begin() const { return begin_; }

  bool Get(std::size_t row, std::size_t col) const {
    return data_->Get(begin_ + row, col);
  }

  // Number of ones in column `col` within the view.
  std::uint64_t ColumnCount(std::size_t col) const;

  // Calls fn(row) for every row (view-relative) whose bit in `col` equals
  // `bit_value`, in increasing row order.
  template <typename Fn>
  void ForEachRowWith(std::size_t col, bool bit_value, Fn&& fn) const {
    const auto words = data_->column(col);
    const std::size_t end = begin_ + count_;
    for (std::size_t w = begin_ >> 6; w < ((end + 63) >> 6); ++w) {
      std::uint64_t bits = bit_value ? words[w] : ~words[w];
      const std::size_t base = w << 6;
      if (base < begin_) bits &= ~std::uint64_t{0} << (begin_ - base);
      if (base + 64 > end) {
        bits &= (end - base == 64) ? ~std::uint64_t{0}
                                   : ((std::uint64_t{1} << (end - base)) - 1);
      }
      while (bits != 0) {
        const int offset = std::countr_zero(bits);
        fn(base + static_cast<std::size_t>(offset) - begin_);
        bits &= bits - 1;
      }
    }
  }

 private:
  const BinaryDataset* data_;
  std::size_t begin_;
  std::size_t count_;
};

}  // namespace dpsample

#endif  // DPSAMPLE_DATASETS_H_
