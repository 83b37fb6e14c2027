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

#ifndef DSDS_CORPUS_POS_TAG_H_
#define DSDS_CORPUS_POS_TAG_H_

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsds {

// The 12 Universal PoS tags. Enumerator order is the canonical order used
// for every tie-break in the toolkit. PUNCT is written as "." in files.
enum class PosTag : uint8_t {
  kAdj,
  kAdp,
  kAdv,
  kConj,
  kDet,
  kNoun,
  kNum,
  kPron,
  kPrt,
  kVerb,
  kX,
  kPunct,
};

inline constexpr size_t kNumTags = 12;

inline constexpr std::array<PosTag, kNumTags> kAllTags = {
    PosTag::kAdj,  PosTag::kAdp, PosTag::kAdv,  PosTag::kConj,
    PosTag::kDet,  PosTag::kNoun, PosTag::kNum, PosTag::kPron,
    PosTag::kPrt,  PosTag::kVerb, PosTag::kX,   PosTag::kPunct};

constexpr size_t tag_index(PosTag tag) { return static_cast<size_t>(tag); }
constexpr PosTag tag_from_index(size_t index) {
  return static_cast<PosTag>(index);
}

// File spelling: "ADJ" ... "X", ".".
std::string_view tag_name(PosTag tag);
std::optional<PosTag> parse_tag(std::string_view name);

// A subset of the 12 tags as a bit mask (bit i = canonical index i).
class TagSet {
 public:
  constexpr TagSet() = default;
  constexpr explicit TagSet(uint16_t mask) : mask_(mask & kFullMask) {}
  TagSet(std::initializer_list<PosTag> tags) {
    for (PosTag t : tags) insert(t);
  }

  static constexpr uint16_t kFullMask = (1u << kNumTags) - 1;

  void insert(PosTag tag) { mask_ |= uint16_t(1u << tag_index(tag)); }
  bool contains(PosTag tag) const { return mask_ >> tag_index(tag) & 1u; }
  size_t size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }
  uint16_t mask() const { return mask_; }

  bool intersects(TagSet other) const { return (mask_ & other.mask_) != 0; }
  // Non-strict containment.
  bool is_subset_of(TagSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  std::vector<PosTag> tags() const;
  // "NOUN,VERB" in canonical order.
  std::string to_string() const;

  friend bool operator==(TagSet a, TagSet b) = default;
  friend auto operator<=>(TagSet a, TagSet b) { return a.mask_ <=> b.mask_; }

 private:
  uint16_t mask_ = 0;
};

}  // namespace dsds

#endif  // DSDS_CORPUS_POS_TAG_H_
