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

#ifndef DSDS_CORPUS_LEXICON_H_
#define DSDS_CORPUS_LEXICON_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsds/corpus/pos_tag.h"

namespace dsds {

enum class LexiconKind {
  kPosTagset,  // "studio<TAB>NOUN,VERB"
  kMorph,      // "allenavo<TAB>V;IND;PST;1;SG;IPFV"
};

std::string_view lexicon_kind_name(LexiconKind kind);
std::optional<LexiconKind> parse_lexicon_kind(std::string_view name);

// Word type -> non-empty set of properties. The property inventory is the
// sorted union of all properties and fixes the slot layout of lexicon
// embeddings.
class Lexicon {
 public:
  using Entries = std::map<std::string, std::set<std::string>, std::less<>>;

  explicit Lexicon(LexiconKind kind = LexiconKind::kPosTagset);
  // Throws InvalidArgument on an empty property set or, for kPosTagset, on a
  // property that is not a universal tag.
  Lexicon(LexiconKind kind, Entries entries);

  LexiconKind kind() const { return kind_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(std::string_view form) const;

  const Entries& entries() const { return entries_; }
  const std::vector<std::string>& inventory() const { return inventory_; }
  // Sorted inventory indices of the form's properties; empty span if absent.
  std::span<const size_t> property_indices(std::string_view form) const;
  // Only for kPosTagset.
  std::optional<TagSet> tag_set(std::string_view form) const;

  // Entries whose form is listed; forms outside the lexicon are ignored.
  Lexicon restrict_to(const std::vector<std::string>& forms) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.kind_ == b.kind_ && a.entries_ == b.entries_;
  }

 private:
  LexiconKind kind_;
  Entries entries_;
  std::vector<std::string> inventory_;
  std::map<std::string, std::vector<size_t>, std::less<>> indices_;
  std::map<std::string, TagSet, std::less<>> tag_sets_;
};

// Repeated forms union their properties.
Lexicon parse_lexicon(std::string_view text, LexiconKind kind);
// Sorted by form; properties in inventory order, joined by ',' or ';'.
std::string write_lexicon(const Lexicon& lexicon);

}  // namespace dsds

#endif  // DSDS_CORPUS_LEXICON_H_
