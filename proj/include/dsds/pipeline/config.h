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

#ifndef DSDS_PIPELINE_CONFIG_H_
#define DSDS_PIPELINE_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dsds/tagger/tagger.h"

namespace dsds::pipeline {

enum class KeyType { kUint, kDouble, kBool, kString };

struct KeySpec {
  std::string name;
  KeyType type;
  std::string default_value;
  std::string help;
};

// Every key the pipeline reads, in a fixed order.
const std::vector<KeySpec>& config_keys();
const KeySpec* find_key(std::string_view name);

// DSDS_ followed by the upper-cased key.
std::string env_var_for(std::string_view key);

enum class ValueSource { kDefault, kFile, kEnv, kFlag };
std::string_view source_name(ValueSource source);

// Flat key=value configuration. Later merges win, so callers apply the
// file, then the environment, then flags.
class RunConfig {
 public:
  RunConfig();

  // "key = value" lines; '#' starts a comment. Unknown keys, malformed
  // lines and repeated keys are ParseErrors.
  void merge_file(std::string_view text);
  // Looks up DSDS_<KEY> for every declared key.
  void merge_env(const std::map<std::string, std::string>& env);
  // Throws InvalidArgument for unknown keys or values of the wrong type.
  void set(std::string_view key, std::string_view value, ValueSource source);

  const std::string& get(std::string_view key) const;
  uint64_t get_uint(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  ValueSource source(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, ValueSource, std::less<>> sources_;
};

std::map<std::string, std::string> process_environment();

tagger::TaggerConfig tagger_config(const RunConfig& config);

}  // namespace dsds::pipeline

#endif  // DSDS_PIPELINE_CONFIG_H_
