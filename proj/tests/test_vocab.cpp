#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"

using namespace wnmap;
using testing_support::read_fixture;

namespace {

const std::string kTerm = "http://spatial.ucd.ie/lod/osn/term/";

std::string triple(const std::string& s, const std::string& p, const std::string& o) {
  return "<" + s + "> <" + p + "> " + o + " .\n";
}

Mapping make_mapping(const std::string& term, MappingRelation r, const std::string& synset,
                     Provenance p = Provenance::LabelDerived, double score = 1.0) {
  Mapping m;
  m.term = TermId(term);
  m.relation = r;
  m.synset = std::string(kSynsetNamespace) + synset;
  m.provenance = p;
  m.score = score;
  return m;
}

}  // namespace

TEST(Vocabulary, ParsesMiniFixture) {
  auto parsed = parse_vocabulary_ntriples(read_fixture("vocab_mini.nt"), "mini");
  const Vocabulary& v = parsed.value;
  EXPECT_EQ(v.size(), 5u);
  const Term* bay = v.find(TermId(kTerm + "k:natural/v:bay"));
  ASSERT_NE(bay, nullptr);
  EXPECT_EQ(bay->pref_label, "bay");
  EXPECT_EQ(bay->language, "en");
  ASSERT_TRUE(bay->definition);
  EXPECT_NE(bay->definition->find("shoreline"), std::string::npos);
  ASSERT_EQ(bay->related.size(), 1u);

  const Term* river = v.find(TermId(kTerm + "k:waterway/v:river"));
  ASSERT_NE(river, nullptr);
  EXPECT_EQ(river->alt_labels, std::vector<std::string>{"watercourse"});
  ASSERT_EQ(river->broader.size(), 1u);

  // Links to terms outside the file are kept as external references.
  const auto external = v.external_references();
  EXPECT_TRUE(external.count(TermId(kTerm + "k:natural/v:water")));
  EXPECT_TRUE(external.count(TermId(kTerm + "k:waterway")));
}

TEST(Vocabulary, PrefersEnglishLabelAndKeepsOthersAsAltLabels) {
  const std::string s = kTerm + "k:a/v:b";
  const std::string text = triple(s, skos::kPrefLabel, "\"Bucht\"@de") + triple(s, skos::kPrefLabel, "\"bay\"@en") +
                           triple(s, skos::kPrefLabel, "\"inlet\"@en") + triple(s, skos::kAltLabel, "\"cove\"");
  auto parsed = parse_vocabulary_ntriples(text);
  const Term* t = parsed.value.find(TermId(s));
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->pref_label, "bay");
  EXPECT_EQ(t->alt_labels, (std::vector<std::string>{"Bucht", "cove"}));
  ASSERT_EQ(parsed.warnings.size(), 1u);
  EXPECT_NE(parsed.warnings[0].find("extra prefLabel"), std::string::npos);
}

TEST(Vocabulary, DefinitionWithoutLabelIsSkippedWithWarning) {
  const std::string s = kTerm + "k:a/v:b";
  auto parsed = parse_vocabulary_ntriples(triple(s, skos::kDefinition, "\"orphan\"@en"));
  EXPECT_TRUE(parsed.value.empty());
  ASSERT_EQ(parsed.warnings.size(), 1u);
  EXPECT_NE(parsed.warnings[0].find("no prefLabel"), std::string::npos);
}

TEST(Vocabulary, RejectsRelativeIris) {
  EXPECT_THROW(TermId("not-an-iri"), std::invalid_argument);
  EXPECT_NO_THROW(TermId("urn:x:y"));
  auto parsed = parse_vocabulary_ntriples(triple("relative", skos::kPrefLabel, "\"x\""));
  EXPECT_TRUE(parsed.value.empty());
  EXPECT_EQ(parsed.warnings.size(), 1u);
}

TEST(Vocabulary, MalformedInputThrows) {
  EXPECT_THROW(parse_vocabulary_ntriples("<http://a/b> <" + skos::kPrefLabel + "> \"x\"\n"), ParseError);
}

// Parsing does not depend on the order of the triples.
TEST(VocabularyProperty, PermutationInvariant) {
  const std::string text = read_fixture("vocab_mini.nt");
  std::vector<std::string> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  const Vocabulary base = parse_vocabulary_ntriples(text).value;
  std::mt19937 rng(7);
  for (int round = 0; round < 20; ++round) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string shuffled;
    for (const auto& l : lines) shuffled += l + "\n";
    const Vocabulary v = parse_vocabulary_ntriples(shuffled).value;
    ASSERT_EQ(v.size(), base.size());
    for (const auto& [id, term] : base.terms()) {
      const Term* other = v.find(id);
      ASSERT_NE(other, nullptr);
      EXPECT_EQ(other->pref_label, term.pref_label);
      EXPECT_EQ(other->definition, term.definition);
      EXPECT_EQ(other->alt_labels, term.alt_labels);
    }
  }
}

TEST(MappingSet, DeduplicatesAndValidates) {
  MappingSet set;
  EXPECT_TRUE(set.insert(make_mapping(kTerm + "a", MappingRelation::Close, "bay-noun-1")));
  EXPECT_FALSE(set.insert(make_mapping(kTerm + "a", MappingRelation::Close, "bay-noun-1")));
  EXPECT_TRUE(set.insert(make_mapping(kTerm + "a", MappingRelation::Related, "bay-noun-1")));
  EXPECT_EQ(set.size(), 2u);
  EXPECT_THROW(set.insert(make_mapping(kTerm + "b", MappingRelation::Close, "sea-noun-1",
                                       Provenance::DefinitionDerived)),
               std::invalid_argument);
  EXPECT_THROW(set.insert(make_mapping(kTerm + "b", MappingRelation::Related, "sea-noun-1",
                                       Provenance::LabelDerived, 1.5)),
               std::invalid_argument);
}

TEST(MappingSet, NTriplesOutputIsSorted) {
  MappingSet set;
  set.insert(make_mapping(kTerm + "b", MappingRelation::Related, "sea-noun-1"));
  set.insert(make_mapping(kTerm + "a", MappingRelation::Related, "sea-noun-1"));
  set.insert(make_mapping(kTerm + "a", MappingRelation::Close, "bay-noun-1"));
  const std::string out = serialize_mappings_ntriples(set);
  const std::string expected =
      "<" + kTerm + "a> <" + skos::kCloseMatch + "> <" + std::string(kSynsetNamespace) + "bay-noun-1> .\n" +
      "<" + kTerm + "a> <" + skos::kRelatedMatch + "> <" + std::string(kSynsetNamespace) + "sea-noun-1> .\n" +
      "<" + kTerm + "b> <" + skos::kRelatedMatch + "> <" + std::string(kSynsetNamespace) + "sea-noun-1> .\n";
  EXPECT_EQ(out, expected);
}

TEST(MappingSet, TsvOutput) {
  MappingSet set;
  auto m = make_mapping(kTerm + "a", MappingRelation::Related, "sea-noun-1", Provenance::DefinitionDerived, 0.8);
  m.source_word = "sea";
  set.insert(m);
  EXPECT_EQ(serialize_mappings_tsv(set),
            "term\trelation\tsynset\tscore\tprovenance\tsource_word\n" + kTerm + "a\trelated\t" +
                std::string(kSynsetNamespace) + "sea-noun-1\t0.8000\tdefinition\tsea\n");
}

// Writing a mapping set and reading it back yields the same triples.
TEST(MappingSetProperty, NTriplesRoundTrip) {
  std::mt19937 rng(11);
  const char* synsets[] = {"bay-noun-1", "bay-noun-2", "sea-noun-1", "field-noun-12", "h2o-noun-1"};
  for (int round = 0; round < 50; ++round) {
    MappingSet set;
    const int n = std::uniform_int_distribution<int>(0, 30)(rng);
    for (int i = 0; i < n; ++i) {
      const auto rel = static_cast<MappingRelation>(std::uniform_int_distribution<int>(0, 2)(rng));
      set.insert(make_mapping(kTerm + "t" + std::to_string(rng() % 8), rel, synsets[rng() % 5]));
    }
    auto back = load_gold(serialize_mappings_ntriples(set));
    EXPECT_TRUE(back.warnings.empty());
    EXPECT_EQ(back.value.keys(), set.keys());
    EXPECT_EQ(serialize_mappings_ntriples(back.value), serialize_mappings_ntriples(set));
  }
}

TEST(Gold, LoadsMiniGoldWithLineCount) {
  const std::string text = read_fixture("gold_mini.nt");
  auto gold = load_gold(text);
  EXPECT_EQ(gold.value.size(), testing_support::count_mapping_lines(text));
  EXPECT_EQ(gold.value.size(), 11u);
  EXPECT_TRUE(gold.warnings.empty());
}

TEST(Gold, IgnoresOtherPredicatesWithWarnings) {
  const std::string text = read_fixture("gold7_with_noise.nt");
  auto gold = load_gold(text);
  EXPECT_EQ(gold.value.size(), testing_support::count_mapping_lines(text));
  EXPECT_EQ(gold.value.size(), 7u);
  EXPECT_EQ(gold.warnings.size(), 2u);
}

TEST(Gold, ResolvesSynsetIdsWhenStoreGiven) {
  auto gold = load_gold(read_fixture("gold_mini.nt"), &testing_support::mini_store());
  for (const auto& m : gold.value.mappings()) {
    ASSERT_TRUE(m.synset_id) << m.synset;
    EXPECT_EQ(testing_support::mini_store().synset_uri(*m.synset_id), m.synset);
  }
}
