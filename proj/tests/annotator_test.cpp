#include <gtest/gtest.h>

#include <sstream>

#include "geosir/annotator.hpp"
#include "geosir/error.hpp"
#include "support.hpp"

using namespace geosir;
using geosir::testing::Rng;
namespace oracle = geosir::testing::oracle;

namespace {

Document doc(std::string body, std::string title = "", std::string id = "d") {
  return {std::move(id), std::move(title), std::move(body), "http://example.org/" + id};
}

Gazetteer gaz(const std::string& tsv) {
  std::istringstream in(tsv);
  return Gazetteer::load_tsv(in);
}

}  // namespace

TEST(ExtractToponyms, SingleMention) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  const auto ms = extract_toponyms(doc("hotels in Hyderabad"), g);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].start, 2u);
  EXPECT_EQ(ms[0].end, 3u);
  EXPECT_EQ(ms[0].surface, "hyderabad");
  EXPECT_EQ(ms[0].candidates, (std::vector<PlaceId>{1, 2}));
}

TEST(ExtractToponyms, LongestMatch) {
  const Gazetteer g = gaz("1\tNew York\t\t40.7\t-74\tA\tADM1\t\t\t\n2\tNew York City\t\t40.71\t-74.01\tP\tPPL\t\t\t\n");
  const auto ms = extract_toponyms(doc("I love New York City."), g);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].end - ms[0].start, 3u);
  EXPECT_EQ(ms[0].candidates, std::vector<PlaceId>{2});
}

TEST(ExtractToponyms, NoNames) {
  EXPECT_TRUE(extract_toponyms(doc("nothing to see"), geosir::testing::fixture_gazetteer()).empty());
}

TEST(ExtractToponyms, TitleBodyBoundary) {
  const Gazetteer g = gaz("1\tNew York\t\t40.7\t-74\tA\tADM1\t\t\t\n");
  EXPECT_TRUE(extract_toponyms(doc("York", "New"), g).empty());
  const auto ms = extract_toponyms(doc("New York", "New York"), g);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[1].start, 2u);
}

// Compare with a brute-force scan: at each position take the longest
// n-gram that names a place.
TEST(ExtractToponyms, MatchesGreedyScan) {
  Rng rng(31);
  const Gazetteer g = gaz(
      "1\ta\t\t0\t0\tP\tPPL\t\t\t\n2\ta b\t\t0\t1\tP\tPPL\t\t\t\n3\tb c d\t\t1\t0\tP\tPPL\t\t\t\n"
      "4\tc\tq r s t u\t1\t1\tP\tPPL\t\t\t\n");
  const std::vector<std::string> words{"a", "b", "c", "d", "q", "r", "s", "t", "u", "x"};
  for (int round = 0; round < 300; ++round) {
    std::vector<std::string> toks;
    for (int k = rng.integer(0, 14); k > 0; --k) toks.push_back(rng.pick(words));
    std::string body;
    for (const auto& t : toks) body += t + " ";
    std::vector<std::pair<std::size_t, std::size_t>> expect;
    for (std::size_t i = 0; i < toks.size();) {
      std::size_t best = 0;
      for (std::size_t n = 1; n <= 5 && i + n <= toks.size(); ++n) {
        std::string key;
        for (std::size_t k = i; k < i + n; ++k) key += (k > i ? " " : "") + toks[k];
        if (!g.lookup_name(key).empty()) best = n;
      }
      if (best) {
        expect.emplace_back(i, i + best);
        i += best;
      } else {
        ++i;
      }
    }
    const auto ms = extract_toponyms(doc(body), g);
    ASSERT_EQ(ms.size(), expect.size()) << body;
    for (std::size_t k = 0; k < ms.size(); ++k) {
      ASSERT_EQ(ms[k].start, expect[k].first);
      ASSERT_EQ(ms[k].end, expect[k].second);
    }
  }
}

TEST(Disambiguate, Population) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  const auto rs = disambiguate(extract_toponyms(doc("Hyderabad"), g), g);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].place, 1);
  EXPECT_TRUE(disambiguate({}, g).empty());
}

TEST(Disambiguate, ContextFromOtherMentions) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  const auto ms = extract_toponyms(doc("Hyderabad is in Sindh"), g);
  // Summed distance to Sindh: India vs Pakistan candidates.
  const GeoPoint sindh = g.at(3).location;
  ASSERT_LT(oracle::great_circle_km(g.at(2).location, sindh), oracle::great_circle_km(g.at(1).location, sindh));
  const auto rs = disambiguate(ms, g);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].place, 2);
  EXPECT_EQ(rs[1].place, 3);
}

TEST(Disambiguate, OrderIndependent) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  auto ms = extract_toponyms(doc("Hyderabad Sindh Mumbai Hyderabad Telangana"), g);
  const auto base = disambiguate(ms, g);
  std::map<std::pair<std::size_t, std::size_t>, PlaceId> by_span;
  for (const auto& r : base) by_span[{r.mention.start, r.mention.end}] = r.place;
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(ms.begin(), ms.end(), rng.engine());
    for (const auto& r : disambiguate(ms, g)) EXPECT_EQ(r.place, (by_span[{r.mention.start, r.mention.end}]));
  }
}

TEST(Annotate, OnePlace) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  const auto a = annotate(doc("hotels in Hyderabad and Hyderabad"), g);
  ASSERT_TRUE(a.footprint);
  EXPECT_EQ(std::get<GeoPoint>(*a.footprint), g.at(1).location);
  EXPECT_EQ(a.triples.size(), 2u);
  EXPECT_EQ(a.places.size(), 2u);
  EXPECT_EQ(a.place_ids(), std::vector<PlaceId>{1});
  EXPECT_EQ(a.triples[0].predicate, vocab::sir("mentionsPlace"));
  EXPECT_EQ(a.triples[0].object, Term::iri(entity_iri(1)));
  EXPECT_EQ(a.triples[1].object.value, "POINT (78.47 17.38)");
}

TEST(Annotate, TwoPlaces) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  const auto a = annotate(doc("From Mumbai to Telangana"), g);
  ASSERT_TRUE(a.footprint);
  EXPECT_EQ(std::get<BBox>(*a.footprint), (BBox{17.8, 72.8826, 19.0728, 79}));
  EXPECT_EQ(a.triples.size(), 3u);
}

TEST(Annotate, NoPlaces) {
  const auto a = annotate(doc("nowhere"), geosir::testing::fixture_gazetteer());
  EXPECT_FALSE(a.footprint);
  EXPECT_TRUE(a.triples.empty());
}

TEST(Annotate, Concepts) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  const auto lex = geosir::testing::fixture_lexicon();
  const auto a = annotate(doc("Paradise catering hotel serves hotels", "Guest House"), g, &lex);
  EXPECT_EQ(a.concepts, (std::set<std::string>{"catering_hotel", "hotel", "lodging_hotel"}));
  EXPECT_EQ(a.concept_triples.size(), 3u);
  EXPECT_TRUE(a.triples.empty());
}

TEST(Annotate, Subject) {
  EXPECT_EQ(annotation_subject({"x", "", "", "http://e.org/x"}), "http://e.org/x");
  EXPECT_EQ(annotation_subject({"x 1", "", "", "relative"}), "urn:geosir:doc:x%201");
}

TEST(Wkt, RoundTrip) {
  const Geometry p = GeoPoint{-12.5, 130.25};
  EXPECT_EQ(footprint_wkt(p), "POINT (130.25 -12.5)");
  EXPECT_EQ(parse_footprint_wkt(footprint_wkt(p)), p);
  const Geometry b = BBox{1, 2, 3, 4.5};
  EXPECT_EQ(parse_footprint_wkt(footprint_wkt(b)), b);
  EXPECT_FALSE(parse_footprint_wkt("LINESTRING (0 0, 1 1)"));
  EXPECT_FALSE(parse_footprint_wkt("POINT (1000 0)"));
  EXPECT_FALSE(parse_footprint_wkt("POINT (1 2"));
}

TEST(Records, FromTriples) {
  const Gazetteer g = geosir::testing::fixture_gazetteer();
  const auto lex = geosir::testing::fixture_lexicon();
  const auto docs = geosir::testing::fixture_docs();
  std::string nt;
  std::map<std::string, DocRecord> expect;
  for (const auto& d : docs) {
    const auto a = annotate(d, g, &lex);
    nt += to_ntriples(a.triples) + to_ntriples(a.concept_triples);
    expect.emplace(d.doc_id, to_record(a));
  }
  EXPECT_EQ(records_from_triples(docs, parse_ntriples(std::string_view(nt))), expect);
  const std::string stray = "<http://example.org/other> <http://example.org/sir#mentionsPlace> "
                            "<https://sws.geonames.org/1/> .\n";
  EXPECT_THROW(records_from_triples(docs, parse_ntriples(std::string_view(stray))), ParseError);
}
