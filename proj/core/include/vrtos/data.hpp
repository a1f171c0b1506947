#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vrtos/sparse.hpp"

namespace vrtos {

struct LabeledDataset {
  SparseRowMatrix features;
  std::vector<double> labels;

  std::size_t n_rows() const { return features.n_rows(); }
  std::size_t n_cols() const { return features.n_cols(); }

  bool operator==(const LabeledDataset& other) const = default;
};

// LIBSVM text format: one sample per line, "label idx:val idx:val ...".
// Indices are 1-based on disk and 0-based in memory. Without an override the
// column count is the largest index seen. Malformed lines raise ParseError
// with the offending 1-based line number.
LabeledDataset parse_libsvm(std::string_view text,
                            std::optional<std::size_t> n_cols_override = {});

std::string serialize_libsvm(const LabeledDataset& dataset);

// Reads a LIBSVM file; gzip input is detected by its magic bytes and
// decompressed transparently.
LabeledDataset load_libsvm_file(const std::string& path,
                                std::optional<std::size_t> n_cols_override = {});

enum class TaskKind { logistic, squared };

// Synthetic sparse problem with a planted sparse coefficient vector. Every
// row has ceil(density*p) nonzeros at distinct uniform columns with standard
// normal values. Pure function of its arguments.
LabeledDataset generate_synthetic(std::size_t n, std::size_t p, double density,
                                  TaskKind task, std::uint64_t seed);

}  // namespace vrtos
