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

#include "dsds/corpus/lexicon.h"

#include <algorithm>

#include "dsds/common/status.h"
#include "dsds/common/text.h"

namespace dsds {
namespace {

char separator(LexiconKind kind) {
  return kind == LexiconKind::kPosTagset ? ',' : ';';
}

}  // namespace

std::string_view lexicon_kind_name(LexiconKind kind) {
  return kind == LexiconKind::kPosTagset ? "pos" : "morph";
}

std::optional<LexiconKind> parse_lexicon_kind(std::string_view name) {
  if (name == "pos" || name == "pos-tagset") return LexiconKind::kPosTagset;
  if (name == "morph") return LexiconKind::kMorph;
  return std::nullopt;
}

Lexicon::Lexicon(LexiconKind kind) : kind_(kind) {}

Lexicon::Lexicon(LexiconKind kind, Entries entries)
    : kind_(kind), entries_(std::move(entries)) {
  std::set<std::string> all;
  for (const auto& [form, props] : entries_) {
    if (props.empty()) {
      throw InvalidArgument("empty property list for '" + form + "'");
    }
    all.insert(props.begin(), props.end());
  }
  inventory_.assign(all.begin(), all.end());
  for (const auto& [form, props] : entries_) {
    std::vector<size_t> idx;
    idx.reserve(props.size());
    TagSet tags;
    for (const auto& p : props) {
      idx.push_back(static_cast<size_t>(
          std::lower_bound(inventory_.begin(), inventory_.end(), p) -
          inventory_.begin()));
      if (kind_ == LexiconKind::kPosTagset) {
        auto tag = parse_tag(p);
        if (!tag) {
          throw InvalidArgument("unknown PoS tag '" + p + "' for '" + form +
                                "'");
        }
        tags.insert(*tag);
      }
    }
    indices_.emplace(form, std::move(idx));
    if (kind_ == LexiconKind::kPosTagset) tag_sets_.emplace(form, tags);
  }
}

bool Lexicon::contains(std::string_view form) const {
  return entries_.find(form) != entries_.end();
}

std::span<const size_t> Lexicon::property_indices(std::string_view form) const {
  auto it = indices_.find(form);
  if (it == indices_.end()) return {};
  return it->second;
}

std::optional<TagSet> Lexicon::tag_set(std::string_view form) const {
  auto it = tag_sets_.find(form);
  if (it == tag_sets_.end()) return std::nullopt;
  return it->second;
}

Lexicon Lexicon::restrict_to(const std::vector<std::string>& forms) const {
  Entries subset;
  for (const auto& f : forms) {
    auto it = entries_.find(f);
    if (it != entries_.end()) subset.emplace(it->first, it->second);
  }
  return Lexicon(kind_, std::move(subset));
}

Lexicon parse_lexicon(std::string_view text, LexiconKind kind) {
  Lexicon::Entries entries;
  size_t line_no = 0;
  auto lines = split(text, '\n');
  for (std::string_view line : lines) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError("expected 'form<TAB>properties'", line_no);
    }
    if (fields[0].empty()) throw ParseError("empty word form", line_no);
    std::set<std::string> props;
    for (std::string_view p : split(fields[1], separator(kind))) {
      if (p.empty()) continue;
      if (kind == LexiconKind::kPosTagset && !parse_tag(p)) {
        throw ParseError("unknown PoS tag '" + std::string(p) + "'", line_no);
      }
      props.emplace(p);
    }
    if (props.empty()) throw ParseError("empty property list", line_no);
    auto& slot = entries[std::string(fields[0])];
    slot.insert(props.begin(), props.end());
  }
  return Lexicon(kind, std::move(entries));
}

std::string write_lexicon(const Lexicon& lexicon) {
  std::string out;
  const char sep = separator(lexicon.kind());
  for (const auto& [form, props] : lexicon.entries()) {
    out.append(form);
    out.push_back('\t');
    bool first = true;
    for (const auto& p : props) {
      if (!first) out.push_back(sep);
      out.append(p);
      first = false;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace dsds
