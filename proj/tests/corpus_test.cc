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

#include <set>
#include <string>

#include "doctest.h"
#include "dsds/common/random.h"
#include "dsds/common/status.h"
#include "dsds/corpus/corpus.h"
#include "dsds/corpus/embeddings.h"
#include "dsds/corpus/lexicon.h"
#include "dsds/corpus/pos_tag.h"

namespace dsds {
namespace {

TEST_CASE("tag canonical index is a bijection onto 0..11") {
  std::set<size_t> seen;
  for (size_t i = 0; i < kNumTags; ++i) {
    const PosTag t = tag_from_index(i);
    CHECK(tag_index(t) == i);
    CHECK(parse_tag(tag_name(t)) == t);
    seen.insert(tag_index(t));
  }
  CHECK(seen.size() == 12);
  CHECK(tag_name(PosTag::kPunct) == ".");
  CHECK(tag_index(PosTag::kNoun) == 5);
  CHECK(tag_index(PosTag::kVerb) == 9);
  CHECK_FALSE(parse_tag("PUNCT").has_value());
  CHECK_FALSE(parse_tag("PROPN").has_value());
}

TEST_CASE("TagSet algebra") {
  TagSet nv{PosTag::kNoun, PosTag::kVerb};
  TagSet n{PosTag::kNoun};
  CHECK(nv.size() == 2);
  CHECK(n.is_subset_of(nv));
  CHECK_FALSE(nv.is_subset_of(n));
  CHECK(n.intersects(nv));
  CHECK(nv.to_string() == "NOUN,VERB");
}

TEST_CASE("parse_corpus: two tagged tokens") {
  const Corpus c = parse_corpus("the\tDET\ncat\tNOUN\n\n");
  REQUIRE(c.size() == 1);
  const auto& s = c.sentences()[0];
  REQUIRE(s.size() == 2);
  CHECK(s[0].form == "the");
  CHECK(s[0].gold == PosTag::kDet);
  CHECK(s[1].gold == PosTag::kNoun);
  CHECK(c.fully_tagged());
}

TEST_CASE("parse_corpus: underscore means untagged") {
  const Corpus c = parse_corpus("cat\t_\n\n");
  REQUIRE(c.token_count() == 1);
  CHECK_FALSE(c.sentences()[0][0].gold.has_value());
  CHECK(c.labeled_token_count() == 0);
}

TEST_CASE("parse_corpus: errors carry line numbers") {
  try {
    parse_corpus("cat\tNOUN\tX\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    parse_corpus("a\tNOUN\n\nb\tFOO\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_corpus(""), ParseError);
  CHECK_THROWS_AS(parse_corpus("\n\n"), ParseError);
}

TEST_CASE("parse_corpus: punctuation and final sentence without blank line") {
  const Corpus c = parse_corpus("Hi\tX\n!\t.\n\nok\tADJ");
  REQUIRE(c.size() == 2);
  CHECK(c.sentences()[0][1].gold == PosTag::kPunct);
  CHECK(c.sentences()[1][0].form == "ok");
}

TEST_CASE("parse_corpus applies a tag mapping") {
  const TagMapping m = parse_tag_mapping("PROPN\tNOUN\nAUX\tVERB\nPUNCT\t.\n");
  const Corpus c = parse_corpus("Anna\tPROPN\nis\tAUX\nhere\tADV\n.\tPUNCT\n\n", &m);
  const auto& s = c.sentences()[0];
  CHECK(s[0].gold == PosTag::kNoun);
  CHECK(s[1].gold == PosTag::kVerb);
  CHECK(s[2].gold == PosTag::kAdv);
  CHECK(s[3].gold == PosTag::kPunct);
  CHECK_THROWS_AS(parse_tag_mapping("PROPN\tNAME\n"), ParseError);
}

TEST_CASE("parse -> write -> parse round trip over random corpora") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Sentence> sentences;
    const size_t n = 1 + uniform_index(rng, 5);
    for (size_t s = 0; s < n; ++s) {
      Sentence sent;
      const size_t len = 1 + uniform_index(rng, 6);
      for (size_t i = 0; i < len; ++i) {
        Token t;
        t.form = "w" + std::to_string(uniform_index(rng, 20)) + "\xc3\xa9";
        if (!bernoulli(rng, 0.2)) t.gold = tag_from_index(uniform_index(rng, 12));
        sent.push_back(t);
      }
      sentences.push_back(sent);
    }
    const Corpus c(sentences);
    const std::string text = write_corpus(c);
    const Corpus back = parse_corpus(text);
    CHECK(back.sentences() == c.sentences());
    CHECK(write_corpus(back) == text);
  }
}

TEST_CASE("corpus vocabulary counts equal token occurrences") {
  const Corpus c = parse_corpus("a\tX\na\tX\nb\tX\n\nA\tX\n\n");
  size_t total = 0;
  for (const auto& [form, count] : c.vocabulary()) total += count;
  CHECK(total == c.token_count());
  CHECK_THROWS_AS(Corpus(std::vector<Sentence>{Sentence{}}), InvalidArgument);
}

TEST_CASE("build_frequency_table") {
  const Corpus abc = parse_corpus("a\t_\na\t_\nb\t_\n\n");
  const FrequencyTable f = build_frequency_table(abc);
  CHECK(f.size() == 2);
  CHECK(frequency_of(f, "a") == 2);
  CHECK(frequency_of(f, "b") == 1);
  CHECK(frequency_of(f, "zzz") == 0);
  CHECK(build_frequency_table(Corpus()).empty());
  const FrequencyTable cs = build_frequency_table(parse_corpus("A\t_\na\t_\n\n"));
  CHECK(frequency_of(cs, "A") == 1);
  CHECK(frequency_of(cs, "a") == 1);
  CHECK(parse_frequency_table(write_frequency_table(f)) == f);
  CHECK_THROWS_AS(parse_frequency_table("a\t-1\n"), ParseError);
  CHECK_THROWS_AS(parse_frequency_table("a\t1\na\t2\n"), ParseError);
}

TEST_CASE("parse_lexicon: pos tag sets") {
  const Lexicon lex = parse_lexicon("studio\tNOUN,VERB\nstudioso\tADJ\n",
                                    LexiconKind::kPosTagset);
  CHECK(lex.size() == 2);
  CHECK(lex.tag_set("studio") == TagSet{PosTag::kNoun, PosTag::kVerb});
  CHECK(lex.tag_set("studioso") == TagSet{PosTag::kAdj});
  CHECK_FALSE(lex.tag_set("studia").has_value());
  CHECK(lex.inventory() == std::vector<std::string>{"ADJ", "NOUN", "VERB"});
  CHECK_THROWS_AS(parse_lexicon("studio\t", LexiconKind::kPosTagset), ParseError);
  CHECK_THROWS_AS(parse_lexicon("studio\tNAME", LexiconKind::kPosTagset),
                  ParseError);
}

TEST_CASE("parse_lexicon: morph entries union across lines") {
  const Lexicon lex = parse_lexicon(
      "allenare\tV;NFIN\nallenavo\tV;IND;PST;1;SG;IPFV\n"
      "allenate\tV;IND;PRS;2;PL\nallenate\tV;IMP;2;PL\n",
      LexiconKind::kMorph);
  CHECK(lex.size() == 3);
  const auto& props = lex.entries().at("allenate");
  CHECK(props == std::set<std::string>{"2", "IMP", "IND", "PL", "PRS", "V"});
  // Inventory is the sorted union, so the indices are sorted as well.
  const auto idx = lex.property_indices("allenate");
  CHECK(idx.size() == 6);
  for (size_t i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] < idx[i]);
  CHECK_FALSE(lex.tag_set("allenate").has_value());
}

TEST_CASE("lexicon inventory is deterministic and survives write/parse") {
  const std::string text = "b\tVERB,NOUN\na\tX\nc\tNOUN\n";
  const Lexicon l1 = parse_lexicon(text, LexiconKind::kPosTagset);
  const Lexicon l2 = parse_lexicon(text, LexiconKind::kPosTagset);
  CHECK(l1.inventory() == l2.inventory());
  const std::string written = write_lexicon(l1);
  CHECK(written == "a\tX\nb\tNOUN,VERB\nc\tNOUN\n");
  const Lexicon back = parse_lexicon(written, LexiconKind::kPosTagset);
  CHECK(back == l1);
  CHECK(write_lexicon(back) == written);
}

TEST_CASE("parse_embeddings") {
  const EmbeddingTable t = parse_embeddings("1 2\ncat 0.5 -0.5\n");
  CHECK(t.dim() == 2);
  CHECK(t.size() == 1);
  CHECK(t.lookup("cat")[0] == 0.5);
  CHECK(t.lookup("cat")[1] == -0.5);
  const auto absent = t.lookup("dog");
  REQUIRE(absent.size() == 2);
  CHECK(absent[0] == 0.0);
  CHECK(absent[1] == 0.0);
  CHECK_THROWS_AS(parse_embeddings("1 2\ncat 0.5 -0.5 1.0\n"), ParseError);
  CHECK_THROWS_AS(parse_embeddings("2 1\ncat 0.5\ncat 0.1\n"), ParseError);
  CHECK_THROWS_AS(parse_embeddings("2 1\ncat 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse_embeddings("1 1\ncat abc\n"), ParseError);
}

TEST_CASE("embeddings write/parse is a fixed point, values bit-exact") {
  Rng rng(9);
  EmbeddingTable t(5);
  for (int i = 0; i < 30; ++i) {
    std::vector<double> v(5);
    for (double& x : v) x = standard_normal(rng) * 1e-3;
    t.add("w" + std::to_string(i), v);
  }
  const std::string text = write_embeddings(t);
  const EmbeddingTable back = parse_embeddings(text);
  CHECK(back == t);
  CHECK(write_embeddings(back) == text);
}

}  // namespace
}  // namespace dsds
