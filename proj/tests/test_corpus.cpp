#include "doctest.h"
#include "helpers.hpp"
#include "mapx/corpus.hpp"

using namespace mapx;
using test::doc;
using test::item;

TEST_SUITE("corpus") {

TEST_CASE("collections are canonically sorted regardless of input order") {
    Corpus corpus = Corpus::build(
        {doc("b", "p2", "x", 10), doc("a", "p1", "y", 5)},
        {item("i2", "b", "u1", 30), item("i1", "a", "u2", 20)});

    CHECK(corpus.documents()[0].doc_id == "a");
    CHECK(corpus.documents()[1].doc_id == "b");
    CHECK(corpus.items()[0].item_id == "i1");
    CHECK(corpus.publishers()[0].publisher_id == "p1");
    CHECK(corpus.publishers()[1].publisher_id == "p2");
    CHECK(corpus.users()[0].user_id == "u1");
    CHECK(corpus.users()[1].user_id == "u2");
}

TEST_CASE("publishers and users are synthesized from foreign keys") {
    Corpus corpus = Corpus::build(
        {doc("d1", "p", "x", 0), doc("d2", "p", "y", 1)},
        {item("i1", "d1", "u", 2), item("i2", "d2", "u", 3), item("i3", "d1", "v", 4)});

    CHECK(corpus.publisher("p").document_ids == std::vector<std::string>{"d1", "d2"});
    CHECK(corpus.user("u").item_ids == std::vector<std::string>{"i1", "i2"});
    CHECK(corpus.user("v").item_ids == std::vector<std::string>{"i3"});
}

TEST_CASE("validation rejects malformed inputs") {
    CHECK_THROWS_AS(Corpus::build({doc("", "p", "x", 0)}, {}), CorpusError);
    CHECK_THROWS_AS(Corpus::build({doc("d", "", "x", 0)}, {}), CorpusError);
    CHECK_THROWS_AS(Corpus::build({doc("d", "p", "x", 0), doc("d", "p", "y", 1)}, {}),
                    CorpusError);
    CHECK_THROWS_AS(
        Corpus::build({doc("d", "p", "x", 0)},
                      {item("i", "d", "u", 1), item("i", "d", "u", 2)}),
        CorpusError);
    CHECK_THROWS_AS(Corpus::build({doc("d", "p", "x", 0)}, {item("i", "ghost", "u", 1)}),
                    CorpusError);
    CHECK_THROWS_AS(Corpus::build({doc("d", "p", "x", 5)}, {item("i", "d", "u", 4)}),
                    CorpusError);
    CHECK_THROWS_AS(
        Corpus::build({doc("d", "p", "x", 0)},
                      {item("i", "d", "u", 1, ItemKind::comment, "ghost")}),
        CorpusError);
}

TEST_CASE("comment parents must live on the same document") {
    CHECK_THROWS_AS(
        Corpus::build({doc("d1", "p", "x", 0), doc("d2", "p", "y", 0)},
                      {item("i1", "d1", "u", 1),
                       item("i2", "d2", "v", 2, ItemKind::comment, "i1")}),
        CorpusError);

    Corpus ok = Corpus::build(
        {doc("d1", "p", "x", 0)},
        {item("i1", "d1", "u", 1), item("i2", "d1", "v", 2, ItemKind::comment, "i1")});
    CHECK(ok.item("i2").parent_item_id == "i1");
}

TEST_CASE("items_for_document filters by time and orders by (timestamp, id)") {
    Corpus corpus = Corpus::build(
        {doc("d", "p", "x", 0)},
        {item("i3", "d", "u", 50), item("i1", "d", "u", 10), item("i2", "d", "v", 10)});

    auto at = [&](Timestamp t) {
        std::vector<std::string> ids;
        for (const Item* it : corpus.items_for_document("d", t)) ids.push_back(it->item_id);
        return ids;
    };

    CHECK(at(5).empty());
    CHECK(at(10) == std::vector<std::string>{"i1", "i2"});  // boundary inclusive
    CHECK(at(49) == std::vector<std::string>{"i1", "i2"});
    CHECK(at(50) == std::vector<std::string>{"i1", "i2", "i3"});
    CHECK(at(kTimestampMax) == std::vector<std::string>{"i1", "i2", "i3"});
}

TEST_CASE("items_for_document is monotone in the observation time") {
    Corpus corpus = Corpus::build(
        {doc("d", "p", "x", 0)},
        {item("a", "d", "u", 3), item("b", "d", "u", 7), item("c", "d", "v", 7)});
    std::size_t previous = 0;
    for (Timestamp t : {0, 3, 5, 7, 8, 100}) {
        std::size_t n = corpus.items_for_document("d", t).size();
        CHECK(n >= previous);
        previous = n;
    }
}

TEST_CASE("publisher_history excludes the given document and sorts by id") {
    Corpus corpus = Corpus::build({doc("d2", "p", "x", 0), doc("d1", "p", "y", 1),
                                   doc("d3", "q", "z", 2)},
                                  {});
    auto history = corpus.publisher_history("p", "d2");
    REQUIRE(history.size() == 1);
    CHECK(history[0]->doc_id == "d1");
    CHECK(corpus.publisher_history("q", "d3").empty());
}

TEST_CASE("latest_timestamp covers publish times and item timestamps") {
    CHECK(Corpus::build({doc("d", "p", "x", 9)}, {}).latest_timestamp() == 9);
    CHECK(Corpus::build({doc("d", "p", "x", 9)}, {item("i", "d", "u", 42)})
              .latest_timestamp() == 42);
    CHECK(Corpus().latest_timestamp() == 0);
}

TEST_CASE("lookups throw on unknown identifiers") {
    Corpus corpus = Corpus::build({doc("d", "p", "x", 0)}, {item("i", "d", "u", 1)});
    CHECK(corpus.has_document("d"));
    CHECK_FALSE(corpus.has_document("nope"));
    CHECK_THROWS_AS(corpus.document("nope"), CorpusError);
    CHECK_THROWS_AS(corpus.publisher("nope"), CorpusError);
    CHECK_THROWS_AS(corpus.user("nope"), CorpusError);
    CHECK_THROWS_AS(corpus.item("nope"), CorpusError);
    CHECK_THROWS_AS(corpus.items_for_document("nope", 0), CorpusError);
}

TEST_CASE("item kind names round-trip") {
    for (ItemKind kind : {ItemKind::post, ItemKind::share, ItemKind::like, ItemKind::comment}) {
        CHECK(item_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(item_kind_from_string("retweet"), CorpusError);
}

}  // TEST_SUITE
