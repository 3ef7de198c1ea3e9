#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace wnmap;
using testing_support::mini_store;
using testing_support::mini_taxonomy;
using testing_support::mini_vocab;
using testing_support::read_fixture;

namespace {

const std::string kTerm = "http://spatial.ucd.ie/lod/osn/term/";
const StopwordSet& sw() { return StopwordSet::english(); }

MappingSet gold_from(const std::string& name) { return load_gold(read_fixture(name)).value; }

Mapping mapping(int term, MappingRelation r, int synset) {
  Mapping m;
  m.term = TermId(kTerm + "t" + std::to_string(term));
  m.relation = r;
  m.synset = std::string(kSynsetNamespace) + "s" + std::to_string(synset) + "-noun-1";
  return m;
}

MappingSet random_set(std::mt19937& rng) {
  MappingSet s;
  const int n = static_cast<int>(rng() % 12);
  for (int i = 0; i < n; ++i)
    s.insert(mapping(static_cast<int>(rng() % 4), static_cast<MappingRelation>(1 + rng() % 2),
                     static_cast<int>(rng() % 4)));
  return s;
}

}  // namespace

TEST(PrecisionRecall, Examples) {
  const MappingSet gold = gold_from("gold5.nt");
  const auto same = precision_recall(gold, gold);
  EXPECT_DOUBLE_EQ(same.precision, 1.0);
  EXPECT_DOUBLE_EQ(same.recall, 1.0);

  MappingSet other;
  other.insert(mapping(1, MappingRelation::Close, 1));
  const auto none = precision_recall(other, gold);
  EXPECT_DOUBLE_EQ(none.precision, 0.0);
  EXPECT_DOUBLE_EQ(none.recall, 0.0);

  // mapping4 shares 3 of its 4 triples with the 5 gold triples.
  const auto r = precision_recall(gold_from("mapping4.nt"), gold);
  EXPECT_DOUBLE_EQ(r.precision, 0.75);
  EXPECT_DOUBLE_EQ(r.recall, 0.6);
  const EvalResult e = evaluate(gold_from("mapping4.nt"), gold);
  EXPECT_EQ(e.n_mappings, 4u);
  EXPECT_EQ(e.n_gold, 5u);
  EXPECT_EQ(e.n_correct, 3u);
}

TEST(PrecisionRecall, EmptySetsGiveZero) {
  const MappingSet gold = gold_from("gold5.nt");
  const auto a = precision_recall(MappingSet{}, gold);
  EXPECT_EQ(a.precision, 0.0);
  EXPECT_EQ(a.recall, 0.0);
  const auto b = precision_recall(gold, MappingSet{});
  EXPECT_EQ(b.precision, 0.0);
  EXPECT_EQ(b.recall, 0.0);
}

TEST(PrecisionRecall, RelationMustMatch) {
  MappingSet m, g;
  m.insert(mapping(1, MappingRelation::Related, 1));
  g.insert(mapping(1, MappingRelation::Close, 1));
  EXPECT_EQ(precision_recall(m, g).precision, 0.0);
}

TEST(FMeasure, Examples) {
  EXPECT_DOUBLE_EQ(f_measure(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(f_measure(0.0, 0.0), 0.0);
  EXPECT_NEAR(f_measure(0.91, 0.98), 0.92, 0.005);
  EXPECT_NEAR(f_measure(0.81, 0.45), 0.70, 0.005);
  EXPECT_NEAR(f_measure(0.75, 0.6), 1.25 * 0.45 / (0.25 * 0.75 + 0.6), 1e-12);
  EXPECT_NEAR(f_measure(0.5, 0.5, 1.0), 0.5, 1e-12);
}

TEST(EvalProperty, BoundsAndBetweenness) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double p = u(rng), r = u(rng);
    const double f = f_measure(p, r);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    if (p > 0 && r > 0) {
      EXPECT_GE(f, std::min(p, r) - 1e-12);
      EXPECT_LE(f, std::max(p, r) + 1e-12);
    }
  }
  EXPECT_GT(f_measure(0.9, 0.5), f_measure(0.5, 0.9));
}

TEST(EvalProperty, PrecisionRecallDuality) {
  std::mt19937 rng(13);
  for (int i = 0; i < 500; ++i) {
    const MappingSet a = random_set(rng), b = random_set(rng);
    const auto ab = precision_recall(a, b);
    const auto ba = precision_recall(b, a);
    if (!a.empty() && !b.empty()) {
      EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
      EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
    }
    EXPECT_GE(ab.precision, 0.0);
    EXPECT_LE(ab.precision, 1.0);
    EXPECT_GE(ab.recall, 0.0);
    EXPECT_LE(ab.recall, 1.0);
  }
}

TEST(Trigram, HandListedNightNacht) {
  // Padded with two markers (_): night -> __n _ni nig igh ght ht_ t__,
  // nacht -> __n _na nac ach cht ht_ t__. Shared: __n ht_ t__.
  EXPECT_DOUBLE_EQ(trigram_similarity("night", "nacht"), 2.0 * 3 / (7 + 7));
  EXPECT_DOUBLE_EQ(trigram_similarity("university", "university"), 1.0);
  EXPECT_DOUBLE_EQ(trigram_similarity("", "abc"), 0.0);
  // Multisets: "aaaa" has __a _aa aaa aaa aa_ a__; "aaa" has one aaa fewer.
  EXPECT_DOUBLE_EQ(trigram_similarity("aaaa", "aaa"), 2.0 * 5 / (6 + 5));
}

TEST(Trigram, SymmetricAndExactForIdentity) {
  std::mt19937 rng(21);
  const std::string alphabet = "abcde ";
  auto word = [&] {
    std::string s;
    const int n = static_cast<int>(rng() % 9);
    for (int i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  for (int i = 0; i < 2000; ++i) {
    const std::string a = word(), b = word();
    const double s = trigram_similarity(a, b);
    EXPECT_EQ(s, trigram_similarity(b, a));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(trigram_similarity(a, a), 1.0);
  }
}

TEST(TrigramBaseline, ThresholdBoundaries) {
  const Vocabulary vocab = mini_vocab();
  const MappingSet exact = trigram_baseline_mapping(vocab, mini_store(), 1.0, TrigramStrategy::Labels);
  for (const auto& m : exact.mappings()) {
    EXPECT_EQ(m.relation, MappingRelation::Related);
    const Term* t = vocab.find(m.term);
    ASSERT_NE(t, nullptr);
    std::string spaced = m.source_word;
    std::replace(spaced.begin(), spaced.end(), '_', ' ');
    EXPECT_EQ(spaced, detail::ascii_lower(t->pref_label));
  }
  // bay has two senses with the same lemma: both are included.
  EXPECT_TRUE(exact.contains({kTerm + "k:natural/v:bay", MappingRelation::Related,
                              std::string(kSynsetNamespace) + "bay-noun-2"}));

  const MappingSet all = trigram_baseline_mapping(vocab, mini_store(), 0.0, TrigramStrategy::Labels);
  EXPECT_EQ(all.size(), vocab.size() * mini_store().size());
  const MappingSet defs = trigram_baseline_mapping(vocab, mini_store(), 0.0, TrigramStrategy::Definitions);
  EXPECT_EQ(defs.size(), vocab.size() * mini_store().size());
  EXPECT_THROW(trigram_baseline_mapping(vocab, mini_store(), 1.5, TrigramStrategy::Labels), std::invalid_argument);
}

TEST(Sweep, GridShape) {
  const SweepGrid grid;
  EXPECT_EQ(grid.size(), 396u);
  const auto points = grid.points();
  ASSERT_EQ(points.size(), 396u);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    EXPECT_LT(std::tie(a.taxonomy, a.f_min, a.ol_min), std::tie(b.taxonomy, b.f_min, b.ol_min));
  }
}

TEST(Sweep, DegenerateGridEqualsDirectRun) {
  const Vocabulary vocab = mini_vocab();
  const MappingSet gold = gold_from("gold_mini.nt");
  SweepGrid grid;
  grid.taxonomy_options = {true};
  grid.f_min_values = {1};
  grid.ol_min_values = {1};
  const auto taxonomy = mini_taxonomy();
  const auto outcome = run_sweep(prepare(vocab, mini_store(), sw()), mini_store(), gold, grid, taxonomy, 3);
  ASSERT_EQ(outcome.rows.size(), 1u);
  MapperConfig config;
  config.f_min = 1;
  config.ol_min = 1;
  config.taxonomy = taxonomy;
  const EvalResult direct = evaluate(map_vocabulary(vocab, mini_store(), sw(), config), gold);
  EXPECT_EQ(outcome.rows[0].result.precision, direct.precision);
  EXPECT_EQ(outcome.rows[0].result.recall, direct.recall);
  EXPECT_EQ(outcome.rows[0].result.f_measure, direct.f_measure);
  EXPECT_EQ(outcome.rows[0].result.n_mappings, direct.n_mappings);
}

TEST(Sweep, FullGridIndependentOfWorkers) {
  const PreparedVocabulary prepared = prepare(mini_vocab(), mini_store(), sw());
  const MappingSet gold = gold_from("gold_mini.nt");
  const auto one = run_sweep(prepared, mini_store(), gold, SweepGrid{}, mini_taxonomy(), 1);
  const auto ten = run_sweep(prepared, mini_store(), gold, SweepGrid{}, mini_taxonomy(), 10);
  EXPECT_EQ(one.rows.size(), 396u);
  EXPECT_EQ(sweep_tsv(one.rows, false), sweep_tsv(ten.rows, false));
  EXPECT_EQ(summary_tsv(one.rows), summary_tsv(ten.rows));
}

TEST(Sweep, TaxonomyWithoutSetThrowsAndMismatchWarns) {
  const PreparedVocabulary prepared = prepare(mini_vocab(), mini_store(), sw());
  EXPECT_THROW(run_sweep(prepared, mini_store(), MappingSet{}, SweepGrid{}, nullptr, 2), std::invalid_argument);
  SweepGrid grid;
  grid.taxonomy_options = {false};
  MappingSet foreign;
  foreign.insert(mapping(1, MappingRelation::Close, 1));
  const auto outcome = run_sweep(prepared, mini_store(), foreign, grid, nullptr, 2);
  EXPECT_FALSE(outcome.warnings.empty());
}

namespace {

SweepRow row(bool tax, std::uint32_t f, std::uint32_t ol, double p, double r) {
  SweepRow out;
  out.point = {tax, f, ol};
  out.result.precision = p;
  out.result.recall = r;
  out.result.f_measure = f_measure(p, r);
  return out;
}

}  // namespace

TEST(Summarize, Examples) {
  const std::vector<SweepRow> rows{row(false, 0, 0, 0.7, 0.5), row(false, 0, 1, 0.9, 0.5),
                                   row(true, 0, 0, 0.8, 0.5), row(true, 0, 1, 0.8, 0.5)};
  const auto tax = summarize(rows, SweepParameter::Taxonomy);
  ASSERT_EQ(tax.size(), 2u);
  EXPECT_DOUBLE_EQ(tax[0].mean_precision, 0.8);
  EXPECT_DOUBLE_EQ(tax[1].mean_precision, 0.8);

  const std::vector<SweepRow> same{row(false, 0, 0, 0.6, 0.3), row(false, 0, 1, 0.6, 0.3)};
  const auto f = summarize(same, SweepParameter::FMin);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_DOUBLE_EQ(f[0].mean_recall, 0.3);
  EXPECT_TRUE(f[0].best_recall);
}

// Recomputes the summary means from the emitted sweep TSV.
TEST(Summarize, MatchesRecomputationFromSweepTsv) {
  const PreparedVocabulary prepared = prepare(mini_vocab(), mini_store(), sw());
  const auto outcome = run_sweep(prepared, mini_store(), gold_from("gold_mini.nt"), SweepGrid{}, mini_taxonomy(), 4);
  std::istringstream tsv(sweep_tsv(outcome.rows, false));
  std::string line;
  std::getline(tsv, line);
  std::map<std::string, std::array<double, 4>> ol_groups;  // sum P, R, F, count
  while (std::getline(tsv, line)) {
    std::istringstream fields(line);
    std::string tax, f, ol, p, r, fm;
    std::getline(fields, tax, '\t');
    std::getline(fields, f, '\t');
    std::getline(fields, ol, '\t');
    std::getline(fields, p, '\t');
    std::getline(fields, r, '\t');
    std::getline(fields, fm, '\t');
    auto& g = ol_groups[ol];
    g[0] += std::stod(p);
    g[1] += std::stod(r);
    g[2] += std::stod(fm);
    g[3] += 1;
  }
  const auto summary = summarize(outcome.rows, SweepParameter::OlMin);
  ASSERT_EQ(summary.size(), ol_groups.size());
  for (const auto& s : summary) {
    const auto& g = ol_groups.at(std::to_string(s.value));
    EXPECT_EQ(g[3], 36.0);
    // The TSV carries 4 decimals, so agreement is to rounding.
    EXPECT_NEAR(s.mean_precision, g[0] / g[3], 5e-5);
    EXPECT_NEAR(s.mean_recall, g[1] / g[3], 5e-5);
    EXPECT_NEAR(s.mean_f_measure, g[2] / g[3], 5e-5);
  }
  const std::string text = summary_tsv(outcome.rows);
  EXPECT_NE(text.find("\nupper_bounds\t-\t"), std::string::npos);
}
