#include <gtest/gtest.h>

#include "fptmix/json_io.hpp"

using namespace fptmix;

TEST(JsonIo, DigraphParseAndEcho) {
  auto g = io::digraph_from_json(io::parse_text(R"({"nodes":3,"arcs":[[0,1,1],[1,2,1]]})"));
  EXPECT_EQ(g.size(), 3);
  EXPECT_EQ(g.arc_count(), 2u);
}

TEST(JsonIo, SetFamilyKeepsLabels) {
  auto f = io::setfamily_from_json(
      io::parse_text(R"({"universe":["u","v","w","x","y","z"],"sets":[{"members":["z","u","w"],"weight":4}]})"));
  EXPECT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].members.size(), 3);
  auto j = io::to_json(f);
  EXPECT_EQ(j["sets"][0]["members"], (io::Json{"u", "w", "z"}));
  EXPECT_EQ(j["universe"][5], "z");
}

TEST(JsonIo, IndexOutOfRange) {
  try {
    io::digraph_from_json(io::parse_text(R"({"nodes":3,"arcs":[[7,1,1]]})"));
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("index out of range"), std::string::npos);
  }
}

TEST(JsonIo, MalformedDocuments) {
  EXPECT_THROW(io::parse_text("{"), ParseError);
  EXPECT_THROW(io::digraph_from_json(io::parse_text(R"({"nodes":3})")), ParseError);
  EXPECT_THROW(io::graph_from_json(io::parse_text(R"({"nodes":3,"edges":[[0,1],[1,0]]})")), InvalidInput);
  EXPECT_THROW(io::setfamily_from_json(io::parse_text(R"({"universe":["a","a"],"sets":[]})")), InvalidInput);
  EXPECT_THROW(io::setfamily_from_json(io::parse_text(R"({"universe":["a","b"],"sets":[{"members":["c"],"weight":1}]})")),
               InvalidInput);
  EXPECT_THROW(io::digraph_from_json(io::parse_text(R"({"nodes":2,"arcs":[[0,1,18446744073709551615]]})")),
               OverflowError);
}

TEST(JsonIo, RoundTripIsFixedPoint) {
  const char* docs[] = {
      R"({"nodes":4,"arcs":[[0,1,3],[2,1,-4],[3,0,0]]})",
      R"({"nodes":5,"edges":[[0,4],[1,2]]})",
      R"({"universe":["a","b","c","d"],"sets":[{"members":["a","b","c"],"weight":2},{"members":["b","c","d"],"weight":-1}]})",
  };
  auto once = io::to_json(io::digraph_from_json(io::parse_text(docs[0])));
  EXPECT_EQ(io::to_json(io::digraph_from_json(once)), once);
  auto g = io::to_json(io::graph_from_json(io::parse_text(docs[1])));
  EXPECT_EQ(io::to_json(io::graph_from_json(g)), g);
  auto f = io::to_json(io::setfamily_from_json(io::parse_text(docs[2])));
  EXPECT_EQ(io::to_json(io::setfamily_from_json(f)), f);
}

TEST(JsonIo, DuplicateSetsCollapseByObjective) {
  const char* doc =
      R"({"universe":["a","b","c"],"sets":[{"members":["a","b","c"],"weight":2},{"members":["c","b","a"],"weight":8}]})";
  EXPECT_EQ(io::setfamily_from_json(io::parse_text(doc), Objective::max)[0].weight, 8);
  EXPECT_EQ(io::setfamily_from_json(io::parse_text(doc), Objective::min)[0].weight, 2);
}

TEST(JsonIo, PartitionSpec) {
  OrderedUniverse u({"a", "b", "c", "d"});
  auto parts = io::partition_from_json(
      io::parse_text(R"({"parts":[{"elements":["a","b"],"k":2,"p":1},{"elements":["c","d"],"k":2,"p":1,"c":1.5}]})"), u);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[1].elements, (ElementSet{2, 3}));
  EXPECT_DOUBLE_EQ(parts[1].c, 1.5);
}
