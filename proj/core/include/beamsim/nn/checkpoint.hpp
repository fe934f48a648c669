// SPDX-License-Identifier: Apache-2.0
//
// beamsim - mmWave beam-training simulator and learned beam predictors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSIM_NN_CHECKPOINT_HPP
#define BEAMSIM_NN_CHECKPOINT_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

#include "beamsim/nn/adam.hpp"

namespace beamsim::nn {

// Model checkpoint container, little-endian throughout (see docs/formats.md):
//   magic "BSNC", u32 version, u8 scalar_size, u32 n_params,
//   then per parameter: u16 name_len, name bytes, u8 rank, u32 dims[rank],
//   scalar data[numel]; then u8 has_optimizer and, if set, u64 step_count
//   followed by per-parameter first and second moment arrays.

namespace detail {

inline void put_bytes(std::FILE* f, const void* p, size_t n) {
  if (std::fwrite(p, 1, n, f) != n) throw std::runtime_error("checkpoint write failed");
}

inline void get_bytes(std::FILE* f, void* p, size_t n) {
  if (std::fread(p, 1, n, f) != n) throw std::runtime_error("checkpoint truncated");
}

template <typename V>
void put(std::FILE* f, V v) {
  put_bytes(f, &v, sizeof(V));
}

template <typename V>
V get(std::FILE* f) {
  V v;
  get_bytes(f, &v, sizeof(V));
  return v;
}

}  // namespace detail

template <typename T>
void save_checkpoint(const std::string& path, const ParamList<T>& params,
                     const Adam<T>* optimizer = nullptr) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  detail::put_bytes(f, "BSNC", 4);
  detail::put<uint32_t>(f, 1);
  detail::put<uint8_t>(f, sizeof(T));
  detail::put<uint32_t>(f, static_cast<uint32_t>(params.size()));
  for (const auto& p : params) {
    detail::put<uint16_t>(f, static_cast<uint16_t>(p.name.size()));
    detail::put_bytes(f, p.name.data(), p.name.size());
    detail::put<uint8_t>(f, static_cast<uint8_t>(p.tensor->shape.size()));
    for (int d : p.tensor->shape) detail::put<uint32_t>(f, static_cast<uint32_t>(d));
    detail::put_bytes(f, p.tensor->v.data(), p.tensor->v.size() * sizeof(T));
  }
  detail::put<uint8_t>(f, optimizer != nullptr ? 1 : 0);
  if (optimizer != nullptr) {
    detail::put<uint64_t>(f, static_cast<uint64_t>(optimizer->step_count()));
    for (size_t i = 0; i < params.size(); ++i) {
      detail::put_bytes(f, optimizer->first_moments()[i].data(),
                        optimizer->first_moments()[i].size() * sizeof(T));
      detail::put_bytes(f, optimizer->second_moments()[i].data(),
                        optimizer->second_moments()[i].size() * sizeof(T));
    }
  }
  std::fclose(f);
}

/// Loads parameter values into the already-constructed model. Names, shapes
/// and the scalar width must match the file.
template <typename T>
void load_checkpoint(const std::string& path, const ParamList<T>& params) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  detail::get_bytes(f, magic, 4);
  if (std::string(magic, 4) != "BSNC") {
    std::fclose(f);
    throw std::runtime_error("bad checkpoint magic in " + path);
  }
  uint32_t version = detail::get<uint32_t>(f);
  uint8_t scalar = detail::get<uint8_t>(f);
  uint32_t count = detail::get<uint32_t>(f);
  if (version != 1 || scalar != sizeof(T) || count != params.size()) {
    std::fclose(f);
    throw std::runtime_error("checkpoint layout mismatch in " + path);
  }
  for (const auto& p : params) {
    uint16_t name_len = detail::get<uint16_t>(f);
    std::string name(name_len, '\0');
    detail::get_bytes(f, name.data(), name_len);
    uint8_t rank = detail::get<uint8_t>(f);
    std::vector<int> dims(rank);
    for (auto& d : dims) d = static_cast<int>(detail::get<uint32_t>(f));
    if (name != p.name || dims != p.tensor->shape) {
      std::fclose(f);
      throw std::runtime_error("checkpoint parameter mismatch: " + name);
    }
    detail::get_bytes(f, p.tensor->v.data(), p.tensor->v.size() * sizeof(T));
  }
  std::fclose(f);
}

}  // namespace beamsim::nn

#endif
