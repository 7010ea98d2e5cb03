// Copyright 2026 The crisiscnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crisiscnn/numerics.hpp"

namespace crisiscnn::container {

/// Binary model file layout (all integers little-endian):
///
///   "CCNN"                    4-byte magic
///   u32 version               currently 1
///   u64 metadata length
///   metadata                  UTF-8 JSON
///   then, until end of file, parameter sections:
///     u32 name length, name bytes
///     u32 rank, rank x u64 dims
///     prod(dims) x f32, row-major
inline constexpr std::string_view kMagic = "CCNN";
inline constexpr std::uint32_t kVersion = 1;

struct Section {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<float> values;

  static Section from_matrix(std::string name, const Matrix& m);
  /// Rank-2 (or rank-1 as a column) section back to a Matrix.
  Matrix to_matrix() const;
};

struct ModelContainer {
  std::uint32_t version = kVersion;
  std::string metadata;  ///< JSON text
  std::vector<Section> sections;

  const Section& section(std::string_view name) const;
};

std::string serialize(const ModelContainer& c);

/// Throws Error("not a model container") on a bad magic and a descriptive
/// Error on truncation or a newer version.
ModelContainer deserialize(std::string_view bytes, std::string_view source = "<memory>");

void save(const std::filesystem::path& path, const ModelContainer& c);
ModelContainer load(const std::filesystem::path& path);

}  // namespace crisiscnn::container
