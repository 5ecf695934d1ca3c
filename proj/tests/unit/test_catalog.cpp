#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "csg/catalog.hpp"
#include "csg/errors.hpp"
#include "oracles.hpp"

using namespace csg;
using namespace csg::testing;

TEST_CASE("level counts match the relation-matrix oracle") {
  GrowthTree tree;
  const std::size_t expected[] = {1, 2, 7, 40, 357, 4824};
  for (int n = 1; n <= 6; ++n) {
    const LevelCatalog& cat = tree.level(n);
    CHECK(cat.count == expected[n - 1]);
    const auto oracle = oracle_level(n);
    REQUIRE(oracle.size() == cat.count);
    // identical node sets in identical (lexicographic) order
    for (std::size_t i = 0; i < cat.count; ++i) {
      const auto rows = cat.node_rows(i);
      CHECK(std::equal(rows.begin(), rows.end(), oracle[i].begin(),
                       oracle[i].end()));
    }
  }
}

TEST_CASE("parent links are restrictions, children partition each level") {
  GrowthTree tree;
  for (int n = 2; n <= 6; ++n) {
    const LevelCatalog& cat = tree.level(n);
    const LevelCatalog& prev = tree.level(n - 1);
    std::vector<std::size_t> child_count(prev.count, 0);
    for (std::size_t i = 0; i < cat.count; ++i) {
      REQUIRE(cat.parent[i] < prev.count);
      ++child_count[cat.parent[i]];
      const LabelledCauset node = cat.node(i);
      CHECK(node.prefix(n - 1) == prev.node(cat.parent[i]));
      // stored transition stats describe the new element's ideal
      const Ideal stats = ideal_stats(prev.node(cat.parent[i]),
                                      node.past(n - 1));
      CHECK(stats.varpi == cat.varpi[i]);
      CHECK(stats.maximal_count == cat.maximal_count[i]);
    }
    // nesting: the level-n nodes partition into the children sets
    for (std::size_t p = 0; p < prev.count; ++p)
      CHECK(child_count[p] == order_ideals(prev.node(p)).size());
  }
}

TEST_CASE("deeper nesting: every node has exactly one level-m ancestor") {
  GrowthTree tree;
  const LevelCatalog& lvl5 = tree.level(5);
  const LevelCatalog& lvl3 = tree.level(3);
  std::vector<std::size_t> descendants(lvl3.count, 0);
  for (std::size_t i = 0; i < lvl5.count; ++i) {
    std::uint32_t up = tree.level(4).parent[lvl5.parent[i]];
    REQUIRE(up < lvl3.count);
    ++descendants[up];
    CHECK(lvl5.node(i).prefix(3) == lvl3.node(up));
  }
  std::size_t total = 0;
  for (std::size_t d : descendants) {
    CHECK(d > 0);
    total += d;
  }
  CHECK(total == lvl5.count);
}

TEST_CASE("find locates every node; extremal nodes sit at the ends") {
  GrowthTree tree;
  for (int n = 1; n <= 5; ++n) {
    const LevelCatalog& cat = tree.level(n);
    for (std::size_t i = 0; i < cat.count; ++i) {
      auto found = cat.find(cat.node(i));
      REQUIRE(found.has_value());
      CHECK(*found == i);
    }
    CHECK(cat.antichain_index() == 0);
    CHECK(cat.chain_index() == cat.count - 1);
    CHECK(!cat.find(LabelledCauset::chain(n + 1)).has_value());
  }
}

TEST_CASE("node order and keys are independent of the thread count") {
  GrowthTree seq(kDefaultLevelCap, 1);
  GrowthTree par(kDefaultLevelCap, 4);
  for (int n = 1; n <= 6; ++n) {
    const LevelCatalog& a = seq.level(n);
    const LevelCatalog& b = par.level(n);
    REQUIRE(a.count == b.count);
    CHECK(a.past_rows == b.past_rows);
    CHECK(a.parent == b.parent);
    CHECK(a.varpi == b.varpi);
    CHECK(a.iso_key == b.iso_key);
  }
}

TEST_CASE("levels are memoized") {
  GrowthTree tree;
  const LevelCatalog* first = &tree.level(4);
  tree.level(6);
  CHECK(&tree.level(4) == first);
}

TEST_CASE("the level cap is enforced by name") {
  GrowthTree small(3);
  CHECK_NOTHROW(small.level(3));
  CHECK_THROWS_WITH_AS(small.level(4),
                       doctest::Contains("exceeds the configured level cap"),
                       LevelCapExceeded);
  CHECK_THROWS_AS(small.level(0), ConfigError);
  CHECK_THROWS_AS(GrowthTree(0), ConfigError);
}

TEST_CASE("jsonl export carries the documented schema") {
  GrowthTree tree;
  std::ostringstream out;
  write_catalog_jsonl(tree.level(3), out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("n") == 3);
    CHECK(j.at("index") == rows);
    CHECK(j.at("parent").get<int>() >= 0);
    CHECK(j.at("past").is_array());
    CHECK(j.at("past").size() == 3);
    CHECK(j.at("iso_key").is_string());
    ++rows;
  }
  CHECK(rows == 7);

  std::ostringstream root_out;
  write_catalog_jsonl(tree.level(1), root_out);
  const auto root = nlohmann::json::parse(root_out.str());
  CHECK(root.at("parent") == -1);
}

TEST_CASE("csv export has one row per node plus a header") {
  GrowthTree tree;
  std::ostringstream out;
  write_catalog_csv(tree.level(4), out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 41);
}
