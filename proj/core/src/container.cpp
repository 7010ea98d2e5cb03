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

#include "crisiscnn/container.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>

#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"

namespace crisiscnn::container {

static_assert(std::endian::native == std::endian::little,
              "the container writer assumes a little-endian host");

Section Section::from_matrix(std::string name, const Matrix& m) {
  Section s;
  s.name = std::move(name);
  s.dims = {m.rows(), m.cols()};
  s.values.reserve(m.size());
  for (double v : m.flat()) s.values.push_back(static_cast<float>(v));
  return s;
}

Matrix Section::to_matrix() const {
  if (dims.empty() || dims.size() > 2) {
    throw Error(fmt::format("section '{}' has rank {}, expected 1 or 2", name, dims.size()));
  }
  const std::size_t rows = dims[0];
  const std::size_t cols = dims.size() == 2 ? dims[1] : 1;
  Matrix m(rows, cols);
  auto dst = m.flat();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = values[i];
  return m;
}

const Section& ModelContainer::section(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return s;
  }
  throw Error(fmt::format("model container has no section '{}'", name));
}

namespace {

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view source) : bytes_(bytes), source_(source) {}

  bool done() const { return pos_ == bytes_.size(); }

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string_view take(std::uint64_t n) {
    need(n);
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void need(std::uint64_t n) const {
    if (n > bytes_.size() - pos_) {
      throw Error(fmt::format("{}: truncated model container", source_));
    }
  }

  std::string_view bytes_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const ModelContainer& c) {
  std::string out(kMagic);
  put<std::uint32_t>(out, c.version);
  put<std::uint64_t>(out, c.metadata.size());
  out += c.metadata;
  for (const auto& s : c.sections) {
    std::uint64_t count = 1;
    for (auto d : s.dims) count *= d;
    if (count != s.values.size()) {
      throw Error(fmt::format("section '{}' dims do not match its value count", s.name));
    }
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.name.size()));
    out += s.name;
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.dims.size()));
    for (auto d : s.dims) put<std::uint64_t>(out, d);
    const auto* raw = reinterpret_cast<const char*>(s.values.data());
    out.append(raw, s.values.size() * sizeof(float));
  }
  return out;
}

ModelContainer deserialize(std::string_view bytes, std::string_view source) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    throw Error(fmt::format("{}: not a model container", source));
  }
  Reader r(bytes.substr(kMagic.size()), source);
  ModelContainer c;
  c.version = r.get<std::uint32_t>();
  if (c.version == 0 || c.version > kVersion) {
    throw Error(fmt::format("{}: unsupported container version {}", source, c.version));
  }
  c.metadata = std::string(r.take(r.get<std::uint64_t>()));
  while (!r.done()) {
    Section s;
    s.name = std::string(r.take(r.get<std::uint32_t>()));
    const auto rank = r.get<std::uint32_t>();
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      s.dims.push_back(r.get<std::uint64_t>());
      count *= s.dims.back();
    }
    if (count > bytes.size()) throw Error(fmt::format("{}: truncated model container", source));
    const auto raw = r.take(count * sizeof(float));
    s.values.resize(count);
    std::memcpy(s.values.data(), raw.data(), raw.size());
    c.sections.push_back(std::move(s));
  }
  return c;
}

void save(const std::filesystem::path& path, const ModelContainer& c) {
  io::write_file_atomic(path, serialize(c));
}

ModelContainer load(const std::filesystem::path& path) {
  return deserialize(io::read_file(path), path.string());
}

}  // namespace crisiscnn::container
