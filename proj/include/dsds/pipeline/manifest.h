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

#ifndef DSDS_PIPELINE_MANIFEST_H_
#define DSDS_PIPELINE_MANIFEST_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dsds::pipeline {

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::string& path);

struct FileDigest {
  std::string path;
  std::string sha256;

  friend bool operator==(const FileDigest&, const FileDigest&) = default;
};

// Everything needed to re-run one subcommand: the argument vector, the
// effective configuration, every derived stage seed and the digests of the
// files read and written. Holds no timestamps, so identical runs write
// identical manifests.
struct Manifest {
  std::string command;
  std::string kernels;  // arithmetic backend; results can differ in the last bits
  std::vector<std::string> arguments;  // after the subcommand name
  std::map<std::string, std::string> config;
  std::map<std::string, uint64_t> seeds;
  std::map<std::string, FileDigest> inputs;  // role -> file
  std::vector<FileDigest> outputs;

  std::string to_json() const;
  static Manifest from_json(std::string_view text);

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

}  // namespace dsds::pipeline

#endif  // DSDS_PIPELINE_MANIFEST_H_
