// Copyright 2026 The guides-kit Authors. All Rights Reserved.
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

#include "guides/numerics/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace guides::numerics {
namespace {

constexpr const char* kHeader = "guides-checkpoint v1";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return __builtin_bswap64(v);
  }
}

void write_doubles(std::ostream& out, std::span<const double> values) {
  for (double d : values) {
    std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(d));
    char buf[8];
    std::memcpy(buf, &bits, sizeof(buf));
    out.write(buf, sizeof(buf));
  }
}

}  // namespace

std::filesystem::path manifest_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".manifest";
  return p;
}

void save_checkpoint(const ParamStore& store, const std::filesystem::path& path) {
  std::ofstream data(path, std::ios::binary | std::ios::trunc);
  std::ofstream manifest(manifest_path(path), std::ios::trunc);
  if (!data || !manifest) {
    throw std::runtime_error("save_checkpoint: cannot open " + path.string());
  }
  manifest << kHeader << '\n';
  std::uint64_t offset = 0;
  for (const auto& name : store.names()) {
    const Tensor2& t = store.value(name);
    manifest << name << ' ' << t.rows() << ' ' << t.cols() << ' '
             << (store.frozen(name) ? 1 : 0) << ' ' << offset << '\n';
    write_doubles(data, t.values());
    offset += t.size() * sizeof(double);
  }
  if (!data || !manifest) throw std::runtime_error("save_checkpoint: write failed for " + path.string());
}

ParamStore load_checkpoint(const std::filesystem::path& path) {
  std::ifstream manifest(manifest_path(path));
  std::ifstream data(path, std::ios::binary);
  if (!manifest || !data) {
    throw std::runtime_error("load_checkpoint: cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(manifest, line) || line != kHeader) {
    throw std::runtime_error("load_checkpoint: bad manifest header in " +
                             manifest_path(path).string());
  }
  ParamStore store;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name;
    std::size_t rows = 0, cols = 0;
    int frozen = 0;
    std::uint64_t offset = 0;
    if (!(fields >> name >> rows >> cols >> frozen >> offset)) {
      throw std::runtime_error("load_checkpoint: malformed manifest line: " + line);
    }
    data.seekg(static_cast<std::streamoff>(offset));
    std::vector<double> values(rows * cols);
    for (double& v : values) {
      char buf[8];
      if (!data.read(buf, sizeof(buf))) {
        throw std::runtime_error("load_checkpoint: truncated data for block " + name);
      }
      std::uint64_t bits = 0;
      std::memcpy(&bits, buf, sizeof(bits));
      v = std::bit_cast<double>(to_little_endian(bits));
    }
    store.add(name, Tensor2(rows, cols, std::move(values)));
    store.set_frozen(name, frozen != 0);
  }
  return store;
}

}  // namespace guides::numerics
