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

#include "dsds/corpus/corpus.h"

#include "dsds/common/status.h"
#include "dsds/common/text.h"

namespace dsds {
namespace {

bool valid_form(std::string_view form) {
  return !form.empty() && form.find_first_of("\t\n") == std::string_view::npos;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Corpus::Corpus(std::vector<Sentence> sentences) {
  for (auto& s : sentences) add_sentence(std::move(s));
}

void Corpus::add_sentence(Sentence sentence) {
  if (sentence.empty()) throw InvalidArgument("empty sentence");
  for (const Token& t : sentence) {
    if (!valid_form(t.form)) {
      throw InvalidArgument("token form is empty or contains tab/newline");
    }
  }
  for (const Token& t : sentence) ++vocabulary_[t.form];
  token_count_ += sentence.size();
  sentences_.push_back(std::move(sentence));
}

size_t Corpus::labeled_token_count() const {
  size_t n = 0;
  for (const auto& s : sentences_) {
    for (const auto& t : s) n += t.gold.has_value();
  }
  return n;
}

bool Corpus::fully_tagged() const { return labeled_token_count() == token_count_; }

TagMapping parse_tag_mapping(std::string_view text) {
  TagMapping mapping;
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError("expected 'from<TAB>to'", line_no);
    }
    if (!parse_tag(fields[1])) {
      throw ParseError("unknown target tag '" + std::string(fields[1]) + "'",
                       line_no);
    }
    mapping[std::string(fields[0])] = std::string(fields[1]);
  }
  return mapping;
}

Corpus parse_corpus(std::string_view text, const TagMapping* mapping) {
  if (text.empty()) throw ParseError("empty corpus file", 1);
  Corpus corpus;
  Sentence current;
  size_t line_no = 0;
  auto lines = split(text, '\n');
  // A trailing newline yields one empty final field that is not a line.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::string_view line : lines) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) {
      if (!current.empty()) {
        corpus.add_sentence(std::move(current));
        current.clear();
      }
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError("expected 2 tab-separated columns, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].empty()) throw ParseError("empty word form", line_no);
    Token token{std::string(fields[0]), std::nullopt};
    std::string_view tag = fields[1];
    if (tag != "_") {
      if (mapping != nullptr) {
        if (auto it = mapping->find(tag); it != mapping->end()) tag = it->second;
      }
      auto parsed = parse_tag(tag);
      if (!parsed) {
        throw ParseError("unknown tag '" + std::string(tag) + "'", line_no);
      }
      token.gold = *parsed;
    }
    current.push_back(std::move(token));
  }
  if (!current.empty()) corpus.add_sentence(std::move(current));
  if (corpus.empty()) throw ParseError("corpus contains no tokens", line_no);
  return corpus;
}

std::string write_corpus(const Corpus& corpus) {
  std::string out;
  for (const Sentence& s : corpus.sentences()) {
    for (const Token& t : s) {
      out.append(t.form);
      out.push_back('\t');
      out.append(t.gold ? tag_name(*t.gold) : std::string_view("_"));
      out.push_back('\n');
    }
    out.push_back('\n');
  }
  return out;
}

FrequencyTable build_frequency_table(const Corpus& corpus) {
  return corpus.vocabulary();
}

FrequencyTable parse_frequency_table(std::string_view text) {
  FrequencyTable table;
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    unsigned long long count = 0;
    if (fields.size() != 2 || fields[0].empty() ||
        !parse_uint(fields[1], count)) {
      throw ParseError("expected 'form<TAB>count'", line_no);
    }
    if (!table.emplace(std::string(fields[0]), count).second) {
      throw ParseError("duplicate form '" + std::string(fields[0]) + "'",
                       line_no);
    }
  }
  return table;
}

std::string write_frequency_table(const FrequencyTable& table) {
  std::string out;
  for (const auto& [form, count] : table) {
    out.append(form);
    out.push_back('\t');
    out.append(std::to_string(count));
    out.push_back('\n');
  }
  return out;
}

uint64_t frequency_of(const FrequencyTable& table, std::string_view form) {
  auto it = table.find(form);
  return it == table.end() ? 0 : it->second;
}

}  // namespace dsds
