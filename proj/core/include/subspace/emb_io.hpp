#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "subspace/dataset.hpp"

namespace subspace {

/// EMB1 layout, all little-endian:
///   "EMB1" | u32 N | u32 d | u32 C | N*d f32 features (row-major) | N u32 labels
/// Features are narrowed to f32 on save; loading widens them back to double.
void save_embeddings(const LabeledDataset& data, const std::filesystem::path& path);

/// Parses an EMB1 file. Throws FormatError (with byte offset) on bad magic,
/// size mismatch, non-finite values or labels >= C; IoError if unreadable.
LabeledDataset load_embeddings(const std::filesystem::path& path, Split split = Split::kTrain);

/// Text fixture: one row per line, comma-separated features, label last.
/// Lines starting with '#' are skipped. num_classes defaults to max label + 1.
LabeledDataset load_embeddings_csv(const std::filesystem::path& path, Split split = Split::kTrain,
                                   std::optional<std::size_t> num_classes = std::nullopt);

/// Dispatches on extension: ".csv" goes to the text loader, everything else to EMB1.
LabeledDataset load_dataset(const std::filesystem::path& path, Split split = Split::kTrain);

/// Narrows every feature to f32 and back, i.e. what a save/load round trip yields.
LabeledDataset quantize_to_f32(const LabeledDataset& data);

}  // namespace subspace
