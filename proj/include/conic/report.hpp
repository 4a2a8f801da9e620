/*
   Copyright 2026 The conic-fibres Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Run manifests, CSV documents and the on-disk result cache.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conic/common.hpp"

namespace conic {

inline constexpr std::string_view kVersion = "0.1.0";

/// 64-bit FNV-1a.
u64 fnv1a(std::string_view text);
std::string hex64(u64 v);

struct RunManifest {
  std::string command;
  std::string instance_label;
  std::map<std::string, std::string> parameters;
  u64 seed = 0;
  std::string version = std::string(kVersion);
  std::string config_hash;
  std::vector<std::string> outputs;

  /// Hash over everything except `outputs`.
  std::string hash() const;
  std::string to_json() const;
};

/// "# manifest <hash> <command> <label>" followed by the header and rows.
std::string csv_document(const RunManifest& manifest, std::string_view header,
                         const std::vector<std::string>& rows);

/// Content-addressed cache: one file per key under `dir`. Disabled when
/// constructed without a directory.
class ResultCache {
 public:
  ResultCache() = default;
  explicit ResultCache(std::filesystem::path dir);

  bool enabled() const { return dir_.has_value(); }
  static std::string key(std::string_view config_hash, std::string_view command,
                         const std::map<std::string, std::string>& parameters);
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& content) const;

 private:
  std::optional<std::filesystem::path> dir_;
};

/// --cache flag if given, else $CONIC_CACHE_DIR, else none.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag);

}  // namespace conic
