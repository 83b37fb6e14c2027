/* Copyright 2026 The DsDs Tagger Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dsds/pipeline/manifest.h"

#include <openssl/evp.h>

#include <memory>
#include "json.hpp"

#include "dsds/common/status.h"
#include "dsds/common/text.h"

namespace dsds::pipeline {

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string file_sha256(const std::string& path) { return sha256_hex(read_file(path)); }

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "dsds";
  j["command"] = command;
  j["kernels"] = kernels;
  j["arguments"] = arguments;
  j["config"] = config;
  j["seeds"] = seeds;
  nlohmann::ordered_json in = nlohmann::ordered_json::object();
  for (const auto& [role, f] : inputs) in[role] = {{"path", f.path}, {"sha256", f.sha256}};
  j["inputs"] = in;
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& f : outputs) out.push_back({{"path", f.path}, {"sha256", f.sha256}});
  j["outputs"] = out;
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.kernels = j.at("kernels").get<std::string>();
    m.arguments = j.at("arguments").get<std::vector<std::string>>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.seeds = j.at("seeds").get<std::map<std::string, uint64_t>>();
    for (const auto& [role, f] : j.at("inputs").items()) {
      m.inputs[role] = {f.at("path").get<std::string>(), f.at("sha256").get<std::string>()};
    }
    for (const auto& f : j.at("outputs")) {
      m.outputs.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace dsds::pipeline
