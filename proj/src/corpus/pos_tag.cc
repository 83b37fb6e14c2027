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

#include "dsds/corpus/pos_tag.h"

namespace dsds {
namespace {

constexpr std::array<std::string_view, kNumTags> kTagNames = {
    "ADJ", "ADP", "ADV",  "CONJ", "DET", "NOUN",
    "NUM", "PRON", "PRT", "VERB", "X",   "."};

}  // namespace

std::string_view tag_name(PosTag tag) { return kTagNames[tag_index(tag)]; }

std::optional<PosTag> parse_tag(std::string_view name) {
  for (size_t i = 0; i < kNumTags; ++i) {
    if (kTagNames[i] == name) return tag_from_index(i);
  }
  return std::nullopt;
}

std::vector<PosTag> TagSet::tags() const {
  std::vector<PosTag> out;
  for (PosTag t : kAllTags) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::string TagSet::to_string() const {
  std::string out;
  for (PosTag t : tags()) {
    if (!out.empty()) out.push_back(',');
    out.append(tag_name(t));
  }
  return out;
}

}  // namespace dsds
