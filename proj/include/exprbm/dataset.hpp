#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exprbm/linalg.hpp"
#include "exprbm/rng.hpp"

namespace exprbm {

enum class SplitTag : std::uint8_t { Train = 0, Valid = 1, Test = 2 };

enum class Normalize : std::uint8_t {
  None = 0,
  Binarize = 1,      // threshold at 0.5 after the /255 scaling
  NormalizeStd = 2,  // divide by the train-split standard deviation
};

// Row-per-example design matrix plus the preprocessing state needed to map
// new data the same way.
struct Dataset {
  Matrix X;                     // n_examples x n_features
  std::vector<SplitTag> split;  // one tag per row of X
  Normalize normalize = Normalize::None;
  double feature_mean = 0.0;  // recorded over the train split
  double feature_std = 1.0;

  std::size_t n_examples() const { return X.rows(); }
  std::size_t n_features() const { return X.cols(); }
  std::size_t count(SplitTag tag) const;
};

// IDX container with unsigned-byte payload (type code 0x08). Dimensions
// beyond the first are flattened into the feature axis; values are scaled
// to [0,1] by dividing by 255.
Matrix load_idx(const std::string& path);

// Writes an IDX unsigned-byte file with the given trailing shape (its
// product must equal X.cols()). Values are clamped to [0,1] and rounded to
// the nearest byte.
void save_idx_u8(const Matrix& X, const std::vector<std::uint32_t>& shape,
                 const std::string& path);

// Shuffles rows (seeded), assigns contiguous train/valid/test blocks, and
// applies the normalization. Fractions must be in [0,1] and sum to 1 within
// 1e-9; counts are rounded half away from zero with the train split
// absorbing the remainder.
Dataset preprocess(const Matrix& X, double train_fraction,
                   double valid_fraction, double test_fraction,
                   Normalize normalize, std::uint64_t seed);

// Copies the rows carrying the tag.
Matrix split_view(const Dataset& data, SplitTag tag);

// All distinct bars-and-stripes patterns on a side x side grid, one pattern
// per row (features row-major), duplicates removed. The all-zero and
// all-one squares appear once each, so there are 2^(side+1) - 2 patterns
// for side >= 2. Rows are sorted lexicographically.
Matrix bars_and_stripes_patterns(std::size_t side);

// n_examples rows drawn uniformly (seeded) from the distinct patterns.
Matrix generate_bars_and_stripes(std::size_t side, std::size_t n_examples,
                                 std::uint64_t seed);

}  // namespace exprbm
