#include "subspace/emb_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "subspace/error.hpp"

namespace subspace {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const std::vector<unsigned char>& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError(std::string(what) + " does not fit the EMB1 u32 header field");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void save_embeddings(const LabeledDataset& data, const std::filesystem::path& path) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  std::vector<unsigned char> bytes;
  bytes.reserve(kHeaderBytes + n * d * 4 + n * 4);
  bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
  put_u32(bytes, checked_u32(n, "row count"));
  put_u32(bytes, checked_u32(d, "dimension"));
  put_u32(bytes, checked_u32(data.num_classes(), "class count"));
  for (double v : data.features().data()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) throw NumericError("feature value overflows f32");
    put_u32(bytes, std::bit_cast<std::uint32_t>(f));
  }
  for (std::uint32_t label : data.labels()) put_u32(bytes, label);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LabeledDataset load_embeddings(const std::filesystem::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  if (bytes.size() < kHeaderBytes) {
    throw FormatError("EMB1 header truncated: file has " + std::to_string(bytes.size()) + " bytes",
                      bytes.size());
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("bad magic, expected 'EMB1'", 0);
  }
  const std::uint32_t n = get_u32(bytes, 4);
  const std::uint32_t d = get_u32(bytes, 8);
  const std::uint32_t c = get_u32(bytes, 12);
  if (n == 0) throw FormatError("EMB1 header declares N=0", 4);
  if (d == 0) throw FormatError("EMB1 header declares d=0", 8);
  if (c < 2) throw FormatError("EMB1 header declares C=" + std::to_string(c) + " (< 2)", 12);

  const std::uint64_t feature_bytes = std::uint64_t{n} * d * 4;
  const std::uint64_t expected = kHeaderBytes + feature_bytes + std::uint64_t{n} * 4;
  if (bytes.size() != expected) {
    throw FormatError("EMB1 payload size mismatch: header implies " + std::to_string(expected) +
                          " bytes, file has " + std::to_string(bytes.size()),
                      std::min<std::uint64_t>(bytes.size(), expected));
  }

  std::vector<double> features(std::size_t{n} * d);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t offset = kHeaderBytes + i * 4;
    const float f = std::bit_cast<float>(get_u32(bytes, offset));
    if (!std::isfinite(f)) throw FormatError("non-finite feature value", offset);
    features[i] = f;
  }
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t offset = kHeaderBytes + feature_bytes + i * 4;
    labels[i] = get_u32(bytes, offset);
    if (labels[i] >= c) {
      throw FormatError("label " + std::to_string(labels[i]) + " is not below C=" +
                            std::to_string(c),
                        offset);
    }
  }
  return LabeledDataset(Matrix(n, d, std::move(features)), std::move(labels), c, split);
}

LabeledDataset load_embeddings_csv(const std::filesystem::path& path, Split split,
                                   std::optional<std::size_t> num_classes) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<double> features;
  std::vector<std::uint32_t> labels;
  std::size_t dim = 0;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw FormatError("CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'",
                          line_no);
      }
    }
    if (values.size() < 2) {
      throw FormatError("CSV line " + std::to_string(line_no) + " needs features and a label",
                        line_no);
    }
    const double label = values.back();
    values.pop_back();
    if (label < 0 || label != std::floor(label)) {
      throw FormatError("CSV line " + std::to_string(line_no) + ": label must be a non-negative integer",
                        line_no);
    }
    if (dim == 0) dim = values.size();
    if (values.size() != dim) {
      throw FormatError("CSV line " + std::to_string(line_no) + " has " +
                            std::to_string(values.size()) + " features, expected " +
                            std::to_string(dim),
                        line_no);
    }
    features.insert(features.end(), values.begin(), values.end());
    labels.push_back(static_cast<std::uint32_t>(label));
  }
  if (labels.empty()) throw FormatError("CSV file has no data rows", line_no);
  const std::size_t classes =
      num_classes.value_or(*std::max_element(labels.begin(), labels.end()) + std::size_t{1});
  const std::size_t rows = labels.size();
  return LabeledDataset(Matrix(rows, dim, std::move(features)), std::move(labels), classes, split);
}

LabeledDataset load_dataset(const std::filesystem::path& path, Split split) {
  if (path.extension() == ".csv") return load_embeddings_csv(path, split);
  return load_embeddings(path, split);
}

LabeledDataset quantize_to_f32(const LabeledDataset& data) {
  Matrix features = data.features();
  for (double& v : features.mutable_data()) v = static_cast<float>(v);
  return data.with_features(std::move(features));
}

}  // namespace subspace
