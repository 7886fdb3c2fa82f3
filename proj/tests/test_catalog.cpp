#include <doctest.h>

#include <set>

#include "support.hpp"
#include "vbench/catalog.hpp"

using namespace vbench;
using vbtest::catalog_records;

TEST_CASE("well-formed fixture loads with expected counts") {
    auto recs = catalog_records(20, 2, 8, 2);
    ClipCatalog cat = ClipCatalog::from_records(recs, "<t>");
    CHECK(cat.categories().size() == 20);
    CHECK(cat.groups().size() == 2);
    CHECK(cat.clips().size() == 40);
    CHECK(cat.usable_category_ids().size() == 20);
    CHECK(cat.meta().schema == "vector-catalog/1");
}

TEST_CASE("dangling clip reference names the clip") {
    auto recs = catalog_records(20, 2, 8, 2);
    recs.push_back({{"kind", "clip"},
                    {"clip_id", "k9999"},
                    {"category_id", "c999"},
                    {"uri", "x.mp4"},
                    {"duration_s", 3.0},
                    {"split", "validation"}});
    CHECK_THROWS_WITH_AS(ClipCatalog::from_records(recs, "<t>"),
                         doctest::Contains("k9999"), CatalogError);
}

TEST_CASE("19 usable categories is rejected with the required minimum") {
    auto recs = catalog_records(19, 2, 8, 2);
    CHECK_THROWS_WITH_AS(ClipCatalog::from_records(recs, "<t>"),
                         doctest::Contains("at least 20"), CatalogError);
}

TEST_CASE("duplicate ids and labels are rejected") {
    auto recs = catalog_records(20, 0, 8, 1);
    recs.push_back({{"kind", "category"}, {"category_id", "c001"}, {"label", "other"}});
    CHECK_THROWS_WITH_AS(ClipCatalog::from_records(recs, "<t>"),
                         doctest::Contains("duplicate category_id"), CatalogError);

    recs = catalog_records(20, 0, 8, 1);
    recs.push_back({{"kind", "category"}, {"category_id", "c999"}, {"label", "action 1"}});
    CHECK_THROWS_WITH_AS(ClipCatalog::from_records(recs, "<t>"),
                         doctest::Contains("duplicate category label"), CatalogError);
}

TEST_CASE("overlapping groups are rejected") {
    auto recs = catalog_records(20, 1, 4, 1);
    recs.push_back({{"kind", "group"},
                    {"group_id", "g9"},
                    {"name", "overlap"},
                    {"members", std::vector<std::string>{"c001", "c005"}}});
    CHECK_THROWS_WITH_AS(ClipCatalog::from_records(recs, "<t>"),
                         doctest::Contains("belongs to both"), CatalogError);
}

TEST_CASE("missing meta header is a schema violation") {
    auto recs = catalog_records(20, 0, 8, 1);
    recs.erase(recs.begin());
    CHECK_THROWS_WITH_AS(ClipCatalog::from_records(recs, "<t>"),
                         doctest::Contains("meta header"), CatalogError);
}

TEST_CASE("non-positive clip duration is rejected") {
    auto recs = catalog_records(20, 0, 8, 1);
    recs.push_back({{"kind", "clip"},
                    {"clip_id", "k9998"},
                    {"category_id", "c001"},
                    {"uri", "x.mp4"},
                    {"duration_s", 0.0},
                    {"split", "train"}});
    CHECK_THROWS_WITH_AS(ClipCatalog::from_records(recs, "<t>"),
                         doctest::Contains("non-positive duration"), CatalogError);
}

TEST_CASE("candidate sets contain must_include, are distinct and deterministic") {
    ClipCatalog cat = vbtest::make_catalog(30, 2, 8, 1);
    const std::vector<std::string> must = {"action 3", "action 11", "action 19", "action 24"};
    Rng r1(7), r2(7), r3(8);
    auto c1 = sample_candidate_set(cat, must, 20, r1);
    auto c2 = sample_candidate_set(cat, must, 20, r2);
    auto c3 = sample_candidate_set(cat, must, 20, r3);
    CHECK(c1 == c2);       // fixed seed twice -> identical
    CHECK(c1 != c3);
    CHECK(c1.size() == 20);
    std::set<std::string> set1(c1.begin(), c1.end());
    CHECK(set1.size() == 20);
    for (const auto& m : must) CHECK(set1.count(m) == 1);
}

TEST_CASE("must_include of size 20 returns exactly those labels, shuffled") {
    ClipCatalog cat = vbtest::make_catalog(24, 2, 8, 1);
    std::vector<std::string> must;
    for (int i = 1; i <= 20; ++i) must.push_back("action " + std::to_string(i));
    Rng rng(5);
    auto c = sample_candidate_set(cat, must, 20, rng);
    CHECK(std::set<std::string>(c.begin(), c.end()) ==
          std::set<std::string>(must.begin(), must.end()));
}

TEST_CASE("candidate sampling: exhaustive small-catalog property") {
    ClipCatalog cat = vbtest::make_catalog(22, 0, 8, 1);
    Rng rng(99);
    const auto labels = cat.all_labels();
    for (std::size_t take = 0; take <= 4; ++take) {
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<std::string> must(labels.begin(), labels.begin() + take);
            for (std::size_t size = std::max<std::size_t>(take, 1); size <= 22; size += 5) {
                auto c = sample_candidate_set(cat, must, size, rng);
                CHECK(c.size() == size);
                std::set<std::string> s(c.begin(), c.end());
                CHECK(s.size() == size);  // no duplicates
                for (const auto& m : must) CHECK(s.count(m) == 1);  // superset
            }
        }
    }
    CHECK_THROWS_AS(sample_candidate_set(cat, {"action 1"}, 23, rng), CatalogError);
}
