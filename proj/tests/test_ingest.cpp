#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kg/error.hpp"
#include "kg/ingest.hpp"
#include "kg/rng.hpp"
#include "kg/util.hpp"

using namespace kg;
using namespace kg::ingest;

namespace {

std::vector<BaseStatement> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_statements(in).statements;
}

double npmi_of(const std::vector<PairScore>& scores, const TermLexicon& lex,
               const std::string& a, const std::string& b) {
  Edge want = Edge::make(*lex.id_of(a), *lex.id_of(b));
  for (const auto& s : scores)
    if (s.pair == want) return s.npmi;
  REQUIRE(false);
  return 0.0;
}

}  // namespace

TEST_CASE("parse_statements accepts valid lines and normalizes terms") {
  auto result = [] {
    std::istringstream in("fish oil\tplatelet\t0.5\tpmid1\n");
    return parse_statements(in);
  }();
  REQUIRE(result.statements.size() == 1);
  CHECK(result.statements[0].term_a == "fish oil");
  CHECK(result.statements[0].term_b == "platelet");
  CHECK(result.statements[0].distance_weight == 0.5);
  CHECK(result.statements[0].doc_id == "pmid1");

  CHECK(parse("  Fish   OIL \tPlatelet\t1\tdoc\n")[0].term_a == "fish oil");
}

TEST_CASE("parse_statements rejects malformed lines into the report") {
  std::istringstream in(
      "a\tb\t0.5\n"         // 3 fields
      "a\tb\t0.5\td1\n"     // ok
      "a\ta\t0.5\td2\n"     // identical terms
      "a\tb\t1.5\td3\n"     // weight > 1
      "a\tb\t0\td4\n"       // weight 0
      "a\tb\tnope\td5\n"    // unparseable
      "\n"                  // blank, skipped entirely
      "a\tc\t0.25\td6\n");  // ok
  auto result = parse_statements(in);
  CHECK(result.statements.size() == 2);
  CHECK(result.rejected.size() == 5);
  CHECK(result.total_lines == 7);
  CHECK(result.rejected[0].line == 1);
  CHECK(result.report_json().find("rejected") != std::string::npos);
}

TEST_CASE("duplicate lines are two statements") {
  auto statements = parse("a\tb\t0.5\td1\na\tb\t0.5\td1\n");
  CHECK(statements.size() == 2);
}

TEST_CASE("npmi: single-statement corpus is the +1 limit case") {
  auto statements = parse("a\tb\t0.5\td1\n");
  TermLexicon lex;
  auto scores = npmi_scores(statements, lex);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].npmi == 1.0);
}

TEST_CASE("npmi: disjoint pairs with equal weights score 1") {
  auto statements = parse("a\tb\t0.5\td1\nc\td\t0.5\td2\n");
  TermLexicon lex;
  auto scores = npmi_scores(statements, lex);
  CHECK(npmi_of(scores, lex, "a", "b") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(npmi_of(scores, lex, "c", "d") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("npmi: shared term drives the score to 0") {
  // p(a,b) = 1/2, p(a) = 1, p(b) = 1/2 -> ln(1)/-ln(1/2) = 0.
  auto statements = parse("a\tb\t0.5\td1\na\tc\t0.5\td2\n");
  TermLexicon lex;
  auto scores = npmi_scores(statements, lex);
  CHECK(npmi_of(scores, lex, "a", "b") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("npmi: duplicates shift probabilities") {
  // Triangle corpus: p(a,b)=1/3, p(a)=p(b)=2/3 -> ln(3/4)/ln(3).
  // Doubling (a,b): p(a,b)=1/2, p(a)=p(b)=3/4 -> ln(8/9)/ln(2).
  TermLexicon lex1, lex2;
  auto once = npmi_scores(parse("a\tb\t1\td\na\tc\t1\td\nb\tc\t1\td\n"), lex1);
  auto twice =
      npmi_scores(parse("a\tb\t1\td\na\tb\t1\td\na\tc\t1\td\nb\tc\t1\td\n"), lex2);
  CHECK(npmi_of(once, lex1, "a", "b") == doctest::Approx(-0.2618656).epsilon(1e-5));
  CHECK(npmi_of(twice, lex2, "a", "b") == doctest::Approx(-0.169925).epsilon(1e-5));
}

TEST_CASE("npmi weighted vs count mode differ when weights are uneven") {
  auto statements = parse("a\tb\t0.1\td1\nc\td\t0.9\td2\na\tc\t0.5\td3\n");
  TermLexicon lex1, lex2;
  auto weighted = npmi_scores(statements, lex1, NpmiMode::weighted);
  auto counts = npmi_scores(statements, lex2, NpmiMode::counts);
  CHECK(npmi_of(weighted, lex1, "a", "b") != npmi_of(counts, lex2, "a", "b"));
}

TEST_CASE("npmi properties: range, symmetry, permutation invariance") {
  Rng rng(20240812);
  for (int corpus = 0; corpus < 1000; ++corpus) {
    std::size_t n_terms = 3 + rng.below(8);
    std::size_t n_statements = 2 + rng.below(29);
    std::vector<BaseStatement> statements;
    for (std::size_t i = 0; i < n_statements; ++i) {
      std::size_t a = rng.below(n_terms);
      std::size_t b = rng.below(n_terms);
      if (a == b) b = (b + 1) % n_terms;
      double w = 0.05 + 0.95 * rng.real();
      // Randomly swap the written order: scores must not care.
      bool flip = rng.below(2) == 0;
      statements.push_back({"t" + std::to_string(flip ? b : a),
                            "t" + std::to_string(flip ? a : b), w,
                            "d" + std::to_string(i)});
    }
    TermLexicon lex;
    auto scores = npmi_scores(statements, lex);
    for (const auto& s : scores) {
      CHECK(s.npmi >= -1.0);
      CHECK(s.npmi <= 1.0);
    }

    // Permutation invariance: reverse the statement list.
    std::vector<BaseStatement> reversed(statements.rbegin(), statements.rend());
    TermLexicon lex2;
    auto scores2 = npmi_scores(reversed, lex2);
    REQUIRE(scores.size() == scores2.size());
    for (const auto& s : scores) {
      Edge pair2 = Edge::make(*lex2.id_of(lex.term_of(s.pair.u)),
                              *lex2.id_of(lex.term_of(s.pair.v)));
      bool found = false;
      for (const auto& t : scores2)
        if (t.pair == pair2) {
          CHECK(t.npmi == doctest::Approx(s.npmi).epsilon(1e-12));
          found = true;
        }
      CHECK(found);
    }
  }
}

TEST_CASE("build_universe keeps only scores above the positive mean") {
  std::vector<PairScore> scores{
      {Edge::make(1, 2), 0.9}, {Edge::make(3, 4), 0.5}, {Edge::make(5, 6), -0.2}};
  UniverseGraph u = build_universe(scores, UniverseFilter::above_average_positive());
  CHECK(u.edge_count() == 1);  // mean of positives is 0.7
  CHECK(u.has_edge(1, 2));
  CHECK(u.edge_weight(1, 2) == doctest::Approx(0.9));
}

TEST_CASE("build_universe: all-equal positive scores leave nothing strictly above") {
  std::vector<PairScore> scores{{Edge::make(1, 2), 0.4}, {Edge::make(3, 4), 0.4}};
  CHECK_THROWS_AS(build_universe(scores, UniverseFilter::above_average_positive()),
                  DataError);
}

TEST_CASE("build_universe absolute threshold zero keeps exactly positive scores") {
  std::vector<PairScore> scores{
      {Edge::make(1, 2), 0.3}, {Edge::make(3, 4), 0.0}, {Edge::make(5, 6), -0.1}};
  UniverseGraph u = build_universe(scores, UniverseFilter::absolute_threshold(0.0));
  CHECK(u.edge_count() == 1);
  CHECK(u.has_edge(1, 2));
}

TEST_CASE("build_universe output is a valid universe graph") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BaseStatement> statements;
    std::size_t n = 4 + rng.below(8);
    for (std::size_t i = 0; i < 3 * n; ++i) {
      std::size_t a = rng.below(n), b = rng.below(n);
      if (a == b) continue;
      statements.push_back(
          {"t" + std::to_string(a), "t" + std::to_string(b), 0.1 + 0.9 * rng.real(), "d"});
    }
    if (statements.empty()) continue;
    TermLexicon lex;
    auto scores = npmi_scores(statements, lex);
    try {
      UniverseGraph u = build_universe(scores, UniverseFilter::above_average_positive());
      for (const Edge& e : u.edges()) {
        double w = u.edge_weight(e.u, e.v);
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
        CHECK(e.u != e.v);
      }
    } catch (const DataError&) {
      // Legal outcome: nothing above the mean.
    }
  }
}

TEST_CASE("lexicon round trip through tsv") {
  TermLexicon lex;
  lex.intern("fish oil");
  lex.intern("platelet aggregation");
  lex.intern("raynaud's syndrome");
  TermLexicon back = TermLexicon::from_tsv(lex.to_tsv());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < lex.size(); ++i)
    CHECK(back.term_of(static_cast<VertexId>(i)) == lex.term_of(static_cast<VertexId>(i)));
  CHECK(back.id_of("fish oil") == 0);
}

TEST_CASE("lexicon decode(encode(t)) round-trips every corpus term") {
  auto statements = parse(
      "Fish Oil\tblood viscosity\t0.5\td1\n"
      "FISH OIL\tplatelet\t0.5\td2\n"
      "platelet\tblood viscosity\t0.5\td3\n");
  TermLexicon lex = lexicon_from(statements);
  CHECK(lex.size() == 3);  // "fish oil" interned once
  for (const auto& s : statements) {
    CHECK(lex.term_of(*lex.id_of(s.term_a)) == s.term_a);
    CHECK(lex.term_of(*lex.id_of(s.term_b)) == s.term_b);
  }
}

TEST_CASE("fulltext lookup: every token and the full form retrieve the term") {
  TermLexicon lex;
  VertexId pa = lex.intern("platelet aggregation");
  VertexId p = lex.intern("platelet");
  VertexId r = lex.intern("raynaud's syndrome");
  auto index = FulltextIndex::build(lex);

  auto hits = index.lookup("platelet aggregation");
  CHECK(hits == std::set<VertexId>{pa});
  CHECK(index.lookup("platelet") == std::set<VertexId>{pa, p});
  CHECK(index.lookup("raynaud") == std::set<VertexId>{r});  // substring of raynaud's
  CHECK(index.lookup("unknown token").empty());
  CHECK(index.tokens().count("aggregation") == 1);
}

TEST_CASE("pruning file narrows lookup results") {
  TermLexicon lex;
  VertexId a = lex.intern("platelet aggregation");
  VertexId b = lex.intern("platelet count");
  VertexId c = lex.intern("platelet factor");
  auto index = FulltextIndex::build(lex);
  REQUIRE(index.lookup("platelet") == std::set<VertexId>{a, b, c});

  auto prune = PruneList::parse("-" + std::to_string(c) + "\n", lex);
  CHECK(index.lookup("platelet", prune) == std::set<VertexId>{a, b});

  auto include = PruneList::parse("+platelet count\n", lex);
  CHECK(index.lookup("platelet", include) == std::set<VertexId>{b});

  CHECK_THROWS_AS(PruneList::parse("no-prefix\n", lex), DataError);
}
