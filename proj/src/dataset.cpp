#include "exprbm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "exprbm/errors.hpp"

namespace exprbm {

namespace {

std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in)
    throw IoError("'" + path + "' is truncated");
  return (static_cast<std::uint32_t>(b[0]) << 24) |
         (static_cast<std::uint32_t>(b[1]) << 16) |
         (static_cast<std::uint32_t>(b[2]) << 8) |
         static_cast<std::uint32_t>(b[3]);
}

void write_be_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>((v >> 24) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>(v & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

std::size_t Dataset::count(SplitTag tag) const {
  return static_cast<std::size_t>(
      std::count(split.begin(), split.end(), tag));
}

Matrix load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  unsigned char header[4];
  in.read(reinterpret_cast<char*>(header), 4);
  if (!in)
    throw IoError("'" + path + "' is truncated");
  if (header[0] != 0 || header[1] != 0)
    throw IoError("'" + path + "' is not an IDX file");
  if (header[2] != 0x08)
    throw IoError("'" + path + "' has IDX type code " +
                  std::to_string(header[2]) + "; only unsigned byte (0x08) "
                  "is supported");
  unsigned ndim = header[3];
  if (ndim == 0 || ndim > 4)
    throw IoError("'" + path + "' has unsupported dimensionality " +
                  std::to_string(ndim));
  std::vector<std::uint32_t> dims(ndim);
  for (unsigned d = 0; d < ndim; ++d) dims[d] = read_be_u32(in, path);
  std::uint64_t rows = dims[0];
  std::uint64_t cols = 1;
  for (unsigned d = 1; d < ndim; ++d) cols *= dims[d];
  if (rows == 0 || cols == 0)
    throw IoError("'" + path + "' declares an empty tensor");
  std::uint64_t cells = rows * cols;
  if (cells > (1ull << 31))
    throw IoError("'" + path + "' declares an implausible element count");
  std::vector<unsigned char> raw(cells);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(cells));
  if (static_cast<std::uint64_t>(in.gcount()) != cells)
    throw IoError("'" + path + "' is truncated");
  Matrix X(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < X.size(); ++i)
    X.data()[i] = static_cast<double>(raw[i]) / 255.0;
  return X;
}

void save_idx_u8(const Matrix& X, const std::vector<std::uint32_t>& shape,
                 const std::string& path) {
  if (shape.empty() || shape.size() > 3)
    throw DomainError("IDX trailing shape must have 1 to 3 dimensions");
  std::uint64_t cols = 1;
  for (std::uint32_t d : shape) cols *= d;
  if (cols != X.cols())
    throw DomainError("IDX trailing shape does not match feature count");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  unsigned char header[4] = {0, 0, 0x08,
                             static_cast<unsigned char>(1 + shape.size())};
  out.write(reinterpret_cast<const char*>(header), 4);
  write_be_u32(out, static_cast<std::uint32_t>(X.rows()));
  for (std::uint32_t d : shape) write_be_u32(out, d);
  std::vector<unsigned char> raw(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    double v = std::clamp(X.data()[i], 0.0, 1.0) * 255.0;
    raw[i] = static_cast<unsigned char>(std::lround(v));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out)
    throw IoError("short write to '" + path + "'");
}

Dataset preprocess(const Matrix& X, double train_fraction,
                   double valid_fraction, double test_fraction,
                   Normalize normalize, std::uint64_t seed) {
  for (double f : {train_fraction, valid_fraction, test_fraction})
    if (!(f >= 0.0 && f <= 1.0))
      throw DomainError("split fractions must lie in [0, 1]");
  if (std::abs(train_fraction + valid_fraction + test_fraction - 1.0) > 1e-9)
    throw DomainError("split fractions must sum to 1");
  if (X.rows() == 0)
    throw DomainError("cannot preprocess an empty dataset");

  std::size_t n = X.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(seed, kShuffleStream);
  // Fisher-Yates, descending index so uniform_below(i + 1) is well defined.
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(rng.uniform_below(i + 1));
    std::swap(order[i], order[j]);
  }

  std::size_t n_valid =
      static_cast<std::size_t>(std::llround(valid_fraction * n));
  std::size_t n_test =
      static_cast<std::size_t>(std::llround(test_fraction * n));
  if (n_valid + n_test > n)
    throw DomainError("split fractions leave no training data");
  std::size_t n_train = n - n_valid - n_test;

  Dataset ds;
  ds.X = Matrix(n, X.cols());
  ds.split.resize(n);
  ds.normalize = normalize;
  for (std::size_t r = 0; r < n; ++r) {
    std::span<const double> src = X.row(order[r]);
    std::copy(src.begin(), src.end(), ds.X.row(r).begin());
    ds.split[r] = r < n_train               ? SplitTag::Train
                  : r < n_train + n_valid   ? SplitTag::Valid
                                            : SplitTag::Test;
  }

  if (normalize == Normalize::Binarize) {
    for (std::size_t i = 0; i < ds.X.size(); ++i)
      ds.X.data()[i] = ds.X.data()[i] > 0.5 ? 1.0 : 0.0;
  }

  // Train-split scalar statistics are recorded even when unused so the
  // mapping applied to any later data is reconstructible.
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < n_train; ++r)
    for (double v : ds.X.row(r)) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  if (count == 0)
    throw DomainError("train split is empty");
  double mean = sum / static_cast<double>(count);
  double var = sum_sq / static_cast<double>(count) - mean * mean;
  ds.feature_mean = mean;
  ds.feature_std = std::sqrt(std::max(var, 0.0));

  if (normalize == Normalize::NormalizeStd) {
    if (ds.feature_std == 0.0)
      throw DomainError("train split is constant; cannot scale by its "
                        "standard deviation");
    for (std::size_t i = 0; i < ds.X.size(); ++i)
      ds.X.data()[i] /= ds.feature_std;
  }
  return ds;
}

Matrix split_view(const Dataset& data, SplitTag tag) {
  std::size_t rows = data.count(tag);
  Matrix out(rows, data.X.cols());
  std::size_t r = 0;
  for (std::size_t i = 0; i < data.n_examples(); ++i) {
    if (data.split[i] != tag) continue;
    std::span<const double> src = data.X.row(i);
    std::copy(src.begin(), src.end(), out.row(r).begin());
    ++r;
  }
  return out;
}

Matrix bars_and_stripes_patterns(std::size_t side) {
  if (side == 0 || side > 16)
    throw DomainError("bars-and-stripes side must be in [1, 16]");
  std::vector<std::vector<double>> rows;
  std::size_t cells = side * side;
  auto add_unique = [&](const std::vector<double>& p) {
    if (std::find(rows.begin(), rows.end(), p) == rows.end())
      rows.push_back(p);
  };
  for (std::uint32_t bits = 0; bits < (1u << side); ++bits) {
    std::vector<double> horiz(cells), vert(cells);
    for (std::size_t r = 0; r < side; ++r)
      for (std::size_t c = 0; c < side; ++c) {
        horiz[r * side + c] = (bits >> r) & 1u ? 1.0 : 0.0;
        vert[r * side + c] = (bits >> c) & 1u ? 1.0 : 0.0;
      }
    add_unique(horiz);
    add_unique(vert);
  }
  std::sort(rows.begin(), rows.end());
  Matrix out(rows.size(), cells);
  for (std::size_t r = 0; r < rows.size(); ++r)
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  return out;
}

Matrix generate_bars_and_stripes(std::size_t side, std::size_t n_examples,
                                 std::uint64_t seed) {
  if (n_examples == 0)
    throw DomainError("cannot generate an empty dataset");
  Matrix patterns = bars_and_stripes_patterns(side);
  RngStream rng(seed, kInitStream);
  Matrix out(n_examples, patterns.cols());
  for (std::size_t r = 0; r < n_examples; ++r) {
    std::size_t pick =
        static_cast<std::size_t>(rng.uniform_below(patterns.rows()));
    std::span<const double> src = patterns.row(pick);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace exprbm
