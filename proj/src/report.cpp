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

#include "conic/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conic {

u64 fnv1a(std::string_view text) {
  u64 h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(u64 v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string RunManifest::hash() const {
  std::ostringstream s;
  s << command << '\n' << instance_label << '\n' << seed << '\n' << version << '\n' << config_hash << '\n';
  for (const auto& [k, v] : parameters) s << k << '=' << v << '\n';
  return hex64(fnv1a(s.str()));
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["instance_label"] = instance_label;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["version"] = version;
  j["config_hash"] = config_hash;
  j["outputs"] = outputs;
  j["manifest_hash"] = hash();
  return j.dump(2);
}

std::string csv_document(const RunManifest& manifest, std::string_view header,
                         const std::vector<std::string>& rows) {
  std::string out = "# manifest " + manifest.hash() + " " + manifest.command + " " + manifest.instance_label + "\n";
  out += header;
  out += '\n';
  for (const auto& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
}

std::string ResultCache::key(std::string_view config_hash, std::string_view command,
                             const std::map<std::string, std::string>& parameters) {
  std::string s(config_hash);
  s += '|';
  s += command;
  for (const auto& [k, v] : parameters) s += '|' + k + '=' + v;
  s += '|';
  s += kVersion;
  return hex64(fnv1a(s));
}

std::optional<std::string> ResultCache::get(const std::string& key) const {
  if (!dir_) return std::nullopt;
  std::ifstream in(*dir_ / key, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ResultCache::put(const std::string& key, const std::string& content) const {
  if (!dir_) return;
  const auto tmp = *dir_ / (key + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
  }
  std::filesystem::rename(tmp, *dir_ / key);
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char* env = std::getenv("CONIC_CACHE_DIR"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

}  // namespace conic
