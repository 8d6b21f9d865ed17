#include <gtest/gtest.h>

#include <random>

#include "biokg/ner.hpp"
#include "biokg/text.hpp"
#include "oracles.hpp"

namespace biokg {
namespace {

DocumentSegment paragraph(const std::string& text, std::size_t index = 0) {
  DocumentSegment s;
  s.id = NodeId::segment("d", index);
  s.index = index;
  s.kind = SegmentKind::paragraph;
  s.text = text;
  return s;
}

const NodeId kTre("pubchem:compound:1");
const NodeId kT6p("pubchem:compound:2");

TEST(Gazetteer, EmptyGraphGivesEmptyGazetteer) {
  EXPECT_EQ(build_gazetteer(GraphStore{}).size(), 0u);
}

TEST(Gazetteer, SharedSurfaceKeepsBothIds) {
  GraphStore g;
  g.register_collection("compound");
  g.register_collection("uniprot");
  g.upsert_node({kTre, "compound", "trehalose", {}, {}});
  g.upsert_node({NodeId("u:uniprot:9"), "uniprot", "Trehalose", {"ab"}, {}});
  const auto gaz = build_gazetteer(g);
  ASSERT_EQ(gaz.size(), 1u);  // "ab" is below the minimum length
  EXPECT_EQ(gaz.entries().at("trehalose").size(), 2u);
}

TEST(Gazetteer, SkipsDocumentAndConceptNodes) {
  GraphStore g;
  g.register_collection("document");
  g.register_collection("concept");
  g.upsert_node({NodeId("doc:d:0"), "document", "d #0 (paragraph)", {}, {}});
  g.upsert_node({NodeId("concept:taxon:1"), "concept", "taxon:1", {}, {}});
  EXPECT_EQ(build_gazetteer(g).size(), 0u);
}

TEST(Gazetteer, MinimumLengthCountsCodePoints) {
  Gazetteer gaz;
  EXPECT_FALSE(gaz.add("ab", kTre));
  EXPECT_FALSE(gaz.add("  a ", kTre));
  EXPECT_TRUE(gaz.add(" a  b ", kTre));  // normalizes to "a b"
  EXPECT_EQ(gaz.entries().count("a b"), 1u);
  EXPECT_FALSE(gaz.add("\xC3\xA9\xC3\xA9", kTre));  // two code points, four bytes
}

TEST(Recognize, SingleMentionSpan) {
  Gazetteer gaz;
  gaz.add("trehalose", kTre);
  const auto ms = recognize(paragraph("Trehalose synthesis"), gaz);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].start, 0u);
  EXPECT_EQ(ms[0].end, 9u);
  EXPECT_EQ(ms[0].surface, "Trehalose");
}

TEST(Recognize, LeftmostLongestWins) {
  Gazetteer gaz;
  gaz.add("trehalose", kTre);
  gaz.add("trehalose-phosphate", kT6p);
  const auto ms = recognize(paragraph("trehalose-phosphate pool"), gaz);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].node_id, kT6p);
  EXPECT_EQ(ms[0].end, 19u);
}

TEST(Recognize, CaseInsensitive) {
  Gazetteer gaz;
  gaz.add("trehalose", kTre);
  EXPECT_EQ(recognize(paragraph("treHALOSE"), gaz).size(), 1u);
}

TEST(Recognize, RespectsWordBoundaries) {
  Gazetteer gaz;
  gaz.add("tre", kTre);
  EXPECT_TRUE(recognize(paragraph("trehalose"), gaz).empty());
  EXPECT_TRUE(recognize(paragraph("atre"), gaz).empty());
  EXPECT_EQ(recognize(paragraph("(tre)"), gaz).size(), 1u);
}

TEST(Recognize, WhitespaceRunsMatchAndSpanOriginalText) {
  Gazetteer gaz;
  gaz.add("trehalose 6-phosphate", kT6p);
  const std::string text = "the trehalose \n  6-phosphate pool";
  const auto ms = recognize(paragraph(text), gaz);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].surface, "trehalose \n  6-phosphate");
  EXPECT_EQ(text.substr(ms[0].start, ms[0].end - ms[0].start), ms[0].surface);
}

TEST(Recognize, AmbiguousSurfaceYieldsOneMentionPerId) {
  Gazetteer gaz;
  gaz.add("glucose", kTre);
  gaz.add("Glucose", kT6p);
  const auto ms = recognize(paragraph("free glucose"), gaz);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].start, ms[1].start);
  EXPECT_NE(ms[0].node_id, ms[1].node_id);
}

TEST(Recognize, TablesAreScannedPerCell) {
  Gazetteer gaz;
  gaz.add("trehalose", kTre);
  DocumentSegment t;
  t.id = NodeId::segment("d", 1);
  t.kind = SegmentKind::table;
  t.table = TableGrid{{"name", "note"}, {"Trehalose", "not trehalose-like"}};
  const auto ms = recognize(t, gaz);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].cell, (CellRef{1, 0}));
  EXPECT_EQ(ms[1].cell, (CellRef{1, 1}));
  EXPECT_EQ(ms[1].start, 4u);
}

// Random instances against the brute-force scanner.
TEST(Recognize, MatchesNaiveScanner) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "abAB -_\t.";
  std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
  for (int round = 0; round < 200; ++round) {
    auto random_string = [&](std::size_t max_len) {
      std::string s;
      const auto n = std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
      for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[letter(rng)]);
      return s;
    };
    Gazetteer gaz;
    std::map<std::string, std::set<NodeId>> oracle;
    const auto entries = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < entries; ++i) {
      const auto surface = random_string(6);
      const NodeId id("s:c:" + std::to_string(i % 4));
      gaz.add(surface, id);
      const auto key = testkit::oracle_normalize(surface);
      std::size_t cps = 0;
      for (unsigned char c : key) cps += (c & 0xC0) != 0x80;
      if (cps >= 3) oracle[key].insert(id);
    }
    std::set<std::string> keys;
    for (const auto& [k, ids] : oracle) keys.insert(k);
    const auto text = random_string(80);

    std::vector<std::tuple<std::size_t, std::size_t, NodeId>> want, got;
    for (const auto& m : testkit::naive_scan(keys, text)) {
      for (const auto& id : oracle.at(m.key)) want.emplace_back(m.start, m.end, id);
    }
    for (const auto& m : recognize(paragraph(text), gaz)) got.emplace_back(m.start, m.end, m.node_id);
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, want) << "text: '" << text << "'";
  }
}

class LinkMentionsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g.register_collection("compound");
    g.register_collection("document");
    for (auto id : {"A", "B", "C"}) {
      g.upsert_node({NodeId(std::string("s:compound:") + id), "compound", id, {}, {}});
    }
    for (std::size_t i = 0; i < 3; ++i) {
      g.upsert_node({NodeId::segment("d", i), "document", "seg", {}, {{"doc_id", "d"}}});
    }
  }
  Mention at(const char* entity, std::size_t seg) {
    return {NodeId(std::string("s:compound:") + entity), NodeId::segment("d", seg), 0, 1, entity,
            std::nullopt};
  }
  std::size_t count(std::string_view kind) const {
    auto s = g.stats();
    auto it = s.per_kind.find(std::string(kind));
    return it == s.per_kind.end() ? 0 : it->second;
  }
  GraphStore g;
};

TEST_F(LinkMentionsTest, OneEntityNoCooccurrence) {
  const auto rep = link_mentions({at("A", 0)}, g);
  EXPECT_EQ(rep.mentions, 1u);
  EXPECT_EQ(count("mentioned_in"), 1u);
  EXPECT_EQ(count("cooccurs_with"), 0u);
  const auto& e = g.edges().front();
  EXPECT_EQ(e.provenance.method, Method::ner);
  EXPECT_EQ(e.provenance.origin, "d");
}

TEST_F(LinkMentionsTest, ThreeEntitiesSixDirectedEdges) {
  link_mentions({at("A", 0), at("B", 0), at("C", 0)}, g);
  EXPECT_EQ(count("mentioned_in"), 3u);
  EXPECT_EQ(count("cooccurs_with"), 6u);
}

TEST_F(LinkMentionsTest, CountsDistinctSegmentsAndIsIdempotent) {
  const std::vector<Mention> ms{at("A", 0), at("B", 0), at("A", 1), at("B", 1), at("C", 2)};
  link_mentions(ms, g);
  const NodeId a("s:compound:A"), b("s:compound:B");
  auto ab = g.edges_between(a, b, "cooccurs_with");
  auto ba = g.edges_between(b, a, "cooccurs_with");
  ASSERT_EQ(ab.size(), 1u);
  ASSERT_EQ(ba.size(), 1u);
  EXPECT_EQ(ab[0]->properties.at("count"), 2);
  EXPECT_EQ(ba[0]->properties.at("count"), 2);

  const auto stats = g.stats();
  link_mentions(ms, g);
  EXPECT_EQ(g.stats(), stats);
  EXPECT_EQ(g.edges_between(a, b, "cooccurs_with")[0]->properties.at("count"), 2);
}

TEST_F(LinkMentionsTest, LaterSegmentsIncrementCount) {
  link_mentions({at("A", 0), at("B", 0)}, g);
  link_mentions({at("A", 2), at("B", 2)}, g);
  const auto e = g.edges_between(NodeId("s:compound:B"), NodeId("s:compound:A"), "cooccurs_with");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0]->properties.at("count"), 2);
}

class FactsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g.register_collection("compound");
    g.register_collection("document");
    g.keys().add("mass");
    g.upsert_node({kTre, "compound", "trehalose", {}, {}});
    g.upsert_node({kT6p, "compound", "other", {"trehalose"}, {}});
    tbl.id = NodeId::segment("d", 0);
    tbl.kind = SegmentKind::table;
    tbl.table = TableGrid{{"name", "mass", "Melting point"}, {"trehalose", "342.3", "203"}};
    g.upsert_node({tbl.id, "document", "t", {}, {{"doc_id", "d"}}});
  }
  Mention col0(const NodeId& id, std::size_t row) {
    return {id, tbl.id, 0, 9, "trehalose", CellRef{row, 0}};
  }
  GraphStore g;
  DocumentSegment tbl;
};

TEST_F(FactsTest, ResolvedRowYieldsFactPerColumn) {
  const auto res = extract_facts(tbl, {col0(kTre, 1)}, g);
  ASSERT_EQ(res.facts.size(), 2u);
  EXPECT_EQ(res.facts[0].subject, kTre);
  EXPECT_EQ(res.facts[0].predicate, "mass");
  EXPECT_EQ(res.facts[0].value, "342.3");
  EXPECT_EQ(res.facts[1].predicate, "raw:Melting point");
  EXPECT_EQ(res.facts[0].provenance.method, Method::fact);
  EXPECT_EQ(res.rows_skipped, 0u);
  EXPECT_EQ(g.edges_between(kTre, tbl.id, "fact").size(), 2u);
  EXPECT_EQ(g.node(kTre).properties.at("doc_facts"),
            Json::array({"mass=342.3", "raw:Melting point=203"}));
}

TEST_F(FactsTest, AmbiguousRowIsSkipped) {
  const auto res = extract_facts(tbl, {col0(kTre, 1), col0(kT6p, 1)}, g);
  EXPECT_TRUE(res.facts.empty());
  EXPECT_EQ(res.rows_skipped, 1u);
}

TEST_F(FactsTest, UnresolvedRowIsSkipped) {
  const auto res = extract_facts(tbl, {}, g);
  EXPECT_TRUE(res.facts.empty());
  EXPECT_EQ(res.rows_skipped, 1u);
}

TEST(FactPredicate, RegistryOrRaw) {
  KeyRegistry keys;
  keys.add("molecular_mass");
  EXPECT_EQ(fact_predicate("Molecular mass", keys), "molecular_mass");
  EXPECT_EQ(fact_predicate(" Melting point ", keys), "raw:Melting point");
}

}  // namespace
}  // namespace biokg
