#include <vector>

#include "doctest.h"
#include "mapx/metrics.hpp"
#include "mapx/rng.hpp"

using namespace mapx;

TEST_SUITE("metrics") {

TEST_CASE("confusion counts and derived rates match a straight-line oracle") {
    Rng rng(555);
    for (int round = 0; round < 100; ++round) {
        int n = static_cast<int>(next_int(rng, 1, 60));
        std::vector<bool> predicted;
        std::vector<Label> actual;
        Confusion confusion;
        for (int i = 0; i < n; ++i) {
            bool p = next_bernoulli(rng, 0.4);
            Label a = next_bernoulli(rng, 0.35) ? Label::false_news : Label::true_news;
            predicted.push_back(p);
            actual.push_back(a);
            confusion.add(p, a);
        }

        long long tp = 0, fp = 0, tn = 0, fn = 0;
        for (int i = 0; i < n; ++i) {
            bool is_false = actual[i] == Label::false_news;
            if (predicted[i] && is_false) ++tp;
            if (predicted[i] && !is_false) ++fp;
            if (!predicted[i] && !is_false) ++tn;
            if (!predicted[i] && is_false) ++fn;
        }
        CAPTURE(round);
        CHECK(confusion.tp == tp);
        CHECK(confusion.fp == fp);
        CHECK(confusion.tn == tn);
        CHECK(confusion.fn == fn);
        CHECK(confusion.total() == n);

        double accuracy = static_cast<double>(tp + tn) / n;
        CHECK(confusion.accuracy() == doctest::Approx(accuracy).epsilon(1e-12));
        double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
        CHECK(confusion.precision() == doctest::Approx(precision).epsilon(1e-12));
        double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
        CHECK(confusion.recall() == doctest::Approx(recall).epsilon(1e-12));
        double f1 = precision + recall == 0.0
                        ? 0.0
                        : 2.0 * precision * recall / (precision + recall);
        CHECK(confusion.f1() == doctest::Approx(f1).epsilon(1e-12));
    }
}

TEST_CASE("degenerate confusions report zero instead of dividing by zero") {
    Confusion empty;
    CHECK(empty.accuracy() == 0.0);
    CHECK(empty.precision() == 0.0);
    CHECK(empty.recall() == 0.0);
    CHECK(empty.f1() == 0.0);

    Confusion never_positive;
    never_positive.add(false, Label::true_news);
    never_positive.add(false, Label::false_news);
    CHECK(never_positive.precision() == 0.0);
    CHECK(never_positive.f1() == 0.0);
    CHECK(never_positive.accuracy() == doctest::Approx(0.5));
}

TEST_CASE("merging confusions equals scoring the concatenation") {
    Rng rng(556);
    Confusion left;
    Confusion right;
    Confusion whole;
    for (int i = 0; i < 200; ++i) {
        bool p = next_bernoulli(rng, 0.5);
        Label a = next_bernoulli(rng, 0.5) ? Label::false_news : Label::true_news;
        (i < 90 ? left : right).add(p, a);
        whole.add(p, a);
    }
    left.merge(right);
    CHECK(left.tp == whole.tp);
    CHECK(left.fp == whole.fp);
    CHECK(left.tn == whole.tn);
    CHECK(left.fn == whole.fn);
    CHECK(left.f1() == whole.f1());
}

}  // TEST_SUITE
