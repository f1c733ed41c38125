#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "mapx/dataset.hpp"
#include "mapx/eval.hpp"

using namespace mapx;

namespace {

SynthConfig synth_config(std::uint64_t seed, int docs = 200) {
    SynthConfig config;
    config.n_documents = docs;
    config.n_publishers = 20;
    config.n_users = 120;
    config.seed = seed;
    return config;
}

std::set<std::string> as_set(const std::vector<std::string>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("fold plans are reproducible, disjoint, and sized by the fractions") {
    Corpus corpus = generate_synthetic(synth_config(1));
    EvalConfig config;
    config.folds = 5;
    config.seed = 99;

    for (int fold = 0; fold < config.folds; ++fold) {
        FoldPlan a = plan_fold(corpus, config, fold);
        FoldPlan b = plan_fold(corpus, config, fold);
        CHECK(a.train == b.train);
        CHECK(a.val == b.val);
        CHECK(a.test == b.test);

        CHECK(a.train.size() == 140);  // floor(0.7 * 200)
        CHECK(a.val.size() == 20);     // floor(0.1 * 200)
        CHECK(a.test.size() == 40);    // remainder

        std::set<std::string> all = as_set(a.train);
        for (const auto& id : a.val) CHECK(all.insert(id).second);
        for (const auto& id : a.test) CHECK(all.insert(id).second);
        CHECK(all.size() == corpus.documents().size());
    }

    CHECK(plan_fold(corpus, config, 0).train != plan_fold(corpus, config, 1).train);

    EvalConfig other = config;
    other.seed = 100;
    CHECK(plan_fold(corpus, other, 0).train != plan_fold(corpus, config, 0).train);
}

TEST_CASE("too few documents for the requested folds is an error") {
    std::vector<Document> docs;
    for (int i = 0; i < 5; ++i) {
        docs.push_back(test::doc("d" + std::to_string(i), "p", "text", 0,
                                 i % 2 ? Label::false_news : Label::true_news));
    }
    Corpus corpus = Corpus::build(std::move(docs), {});
    EvalConfig config;
    config.folds = 10;
    CHECK_THROWS_AS(plan_fold(corpus, config, 0), ConfigError);
    CHECK_THROWS_AS(evaluate(corpus, config), ConfigError);
}

TEST_CASE("unlabeled documents cannot be evaluated") {
    Corpus corpus = Corpus::build({test::doc("d1", "p", "x", 0, Label::false_news),
                                   test::doc("d2", "p", "y", 0)},
                                  {});
    EvalConfig config;
    config.folds = 1;
    CHECK_THROWS_AS(plan_fold(corpus, config, 0), Error);
}

TEST_CASE("config validation catches bad settings") {
    EvalConfig config;
    config.folds = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = EvalConfig{};
    config.train_fraction = 0.5;  // no longer sums to 1
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = EvalConfig{};
    config.threshold = 1.5;
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = EvalConfig{};
    config.strategies.clear();
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = EvalConfig{};
    config.model_ids = {"content_words", "oracle"};
    CHECK_THROWS_AS(config.validate(), ModelError);

    CHECK_NOTHROW(EvalConfig{}.validate());
}

TEST_CASE("training folds never see labels outside their train slice") {
    Corpus corpus = generate_synthetic(synth_config(2, 120));
    EvalConfig config;
    config.folds = 3;
    config.seed = 7;

    for (int fold = 0; fold < config.folds; ++fold) {
        PreparedFold prepared = prepare_fold(corpus, config, fold);
        std::set<std::string> train = as_set(prepared.plan.train);

        EnrichContext ctx = prepared.enrich_context(config);
        REQUIRE(ctx.visible_label_docs.has_value());
        CHECK(*ctx.visible_label_docs == train);

        // Enrich every test document with the fold's context and scan the
        // history payloads: any label leaking from outside the train slice
        // would show up here.
        for (const std::string& doc_id : prepared.plan.test) {
            EnrichedDocument enriched =
                enrich(corpus, doc_id, corpus.latest_timestamp(), ctx);
            const auto& payload = std::get<PublisherHistoryPayload>(
                enriched.information(InformationKind::publisher_history).payload);
            for (const auto& [sibling, label] : payload.docs) {
                if (label.has_value()) {
                    CAPTURE(sibling);
                    CHECK(train.count(sibling) == 1);
                }
            }
        }
    }
}

TEST_CASE("a cleanly separable corpus is learned by every channel") {
    SynthConfig synth = synth_config(3, 240);
    synth.word_signal = 1.0;
    synth.publisher_signal = 1.0;
    synth.user_signal = 1.0;
    Corpus corpus = generate_synthetic(synth);

    EvalConfig config;
    config.folds = 3;
    config.seed = 11;
    EvalReport report = evaluate(corpus, config);

    CHECK(report.system("content_words").mean_f1 > 0.95);
    CHECK(report.system("dapa").mean_f1 > 0.9);
    CHECK(report.system("bmacc").mean_f1 > 0.9);
    CHECK(report.system("publisher_credibility").mean_f1 > 0.8);
}

TEST_CASE("a zero-signal corpus stays near chance") {
    SynthConfig synth = synth_config(4, 240);
    synth.word_signal = 0.0;
    synth.publisher_signal = 0.0;
    synth.user_signal = 0.0;
    Corpus corpus = generate_synthetic(synth);

    EvalConfig config;
    config.folds = 3;
    config.seed = 11;
    EvalReport report = evaluate(corpus, config);
    for (const SystemSeries& series : report.systems) {
        CAPTURE(series.system);
        CHECK(series.mean_f1 < 0.65);
    }
}

TEST_CASE("evaluation reports are seed-deterministic") {
    Corpus corpus = generate_synthetic(synth_config(5, 150));
    EvalConfig config;
    config.folds = 4;
    config.seed = 21;

    EvalReport a = evaluate(corpus, config);
    EvalReport b = evaluate(corpus, config);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(to_csv(a) == to_csv(b));

    config.seed = 22;
    EvalReport c = evaluate(corpus, config);
    CHECK(to_json(a).dump() != to_json(c).dump());
}

TEST_CASE("reports carry one series per base model and strategy") {
    Corpus corpus = generate_synthetic(synth_config(6, 120));
    EvalConfig config;
    config.folds = 2;
    EvalReport report = evaluate(corpus, config);

    std::vector<std::string> expected = {"content_words", "publisher_credibility",
                                         "user_credibility", "dapa", "bmacc", "max", "av"};
    REQUIRE(report.systems.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(report.systems[i].system == expected[i]);
        CHECK(report.systems[i].fold_f1.size() == 2);
        double mean = (report.systems[i].fold_f1[0] + report.systems[i].fold_f1[1]) / 2;
        CHECK(report.systems[i].mean_f1 == doctest::Approx(mean).epsilon(1e-12));
    }
    CHECK_THROWS_AS(report.system("nonesuch"), Error);

    std::string csv = to_csv(report);
    CHECK(csv.find("system,fold,f1,accuracy") == 0);
    CHECK(csv.find("dapa,mean,") != std::string::npos);
}

TEST_CASE("a restricted model set restricts the report") {
    Corpus corpus = generate_synthetic(synth_config(6, 120));
    EvalConfig config;
    config.folds = 2;
    config.model_ids = {"content_words"};
    config.strategies = {Strategy::dapa};
    EvalReport report = evaluate(corpus, config);
    REQUIRE(report.systems.size() == 2);
    CHECK(report.systems[0].system == "content_words");
    CHECK(report.systems[1].system == "dapa");
}

TEST_CASE("degradation splits test documents by publisher familiarity") {
    SynthConfig synth = synth_config(7, 400);
    synth.new_publisher_doc_fraction = 0.3;
    synth.publisher_signal = 0.9;
    Corpus corpus = generate_synthetic(synth);

    EvalConfig config;
    config.folds = 3;
    config.seed = 13;
    DegradationReport report = degrade(corpus, config, Factor::publisher_type);

    CHECK(report.factor == Factor::publisher_type);
    CHECK(report.n_reliable > 0);
    CHECK(report.n_unreliable > 0);
    REQUIRE(report.rows.size() == 7);

    // Ranks are ascending in the signed diff and shared on exact ties.
    std::vector<DegradationRow> rows = report.rows;
    std::sort(rows.begin(), rows.end(),
              [](const DegradationRow& a, const DegradationRow& b) { return a.diff < b.diff; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int expected_rank = 1;
        for (const DegradationRow& other : rows) {
            if (other.diff < rows[i].diff) ++expected_rank;
        }
        CHECK(rows[i].rank == expected_rank);
    }

    for (const DegradationRow& row : report.rows) {
        CHECK(row.diff == doctest::Approx(row.f1_reliable - row.f1_unreliable).epsilon(1e-12));
    }
    CHECK(report.row("dapa").system == "dapa");
    CHECK_THROWS_AS(report.row("nonesuch"), Error);
}

TEST_CASE("degradation on count factors uses the outer bins") {
    Corpus corpus = generate_synthetic(synth_config(8, 300));
    EvalConfig config;
    config.folds = 2;
    config.seed = 5;
    DegradationReport report = degrade(corpus, config, Factor::item_count);
    CHECK(report.n_reliable > 0);
    CHECK(report.n_unreliable > 0);

    CHECK_THROWS_AS(degrade(corpus, config, Factor::word_count), ConfigError);
    CHECK_THROWS_AS(degrade(corpus, config, Factor::document_age), ConfigError);
}

TEST_CASE("degradation fails loudly when a partition is empty") {
    // Two prolific publishers: both are certain to appear in every training
    // slice, so no test document ever lands on the unfamiliar side.
    SynthConfig synth = synth_config(9, 120);
    synth.n_publishers = 2;
    synth.n_users = 40;
    Corpus corpus = generate_synthetic(synth);
    EvalConfig config;
    config.folds = 1;
    config.seed = 2;
    CHECK_THROWS_AS(degrade(corpus, config, Factor::publisher_type), Error);
}

TEST_CASE("temporal series hold time-invariant channels exactly constant") {
    Corpus corpus = generate_synthetic(synth_config(10, 200));
    EvalConfig config;
    config.folds = 2;
    config.seed = 23;
    TemporalReport report = temporal(corpus, config, {});

    CHECK(report.snapshot_hours == default_snapshot_hours());

    for (const char* constant : {"content_words", "publisher_credibility"}) {
        const TemporalSeries& series = report.system(constant);
        REQUIRE(series.f1.size() == report.snapshot_hours.size());
        for (double f1 : series.f1) CHECK(f1 == series.f1.front());
        for (double r : series.mean_reliability) {
            CHECK(r == series.mean_reliability.front());
        }
    }

    const TemporalSeries& user = report.system("user_credibility");
    REQUIRE(user.mean_reliability.size() == report.snapshot_hours.size());
    for (std::size_t i = 1; i < user.mean_reliability.size(); ++i) {
        CHECK(user.mean_reliability[i] >= user.mean_reliability[i - 1] - 1e-12);
    }
    CHECK(user.mean_reliability.back() > user.mean_reliability.front());

    const TemporalSeries& dapa_series = report.system("dapa");
    CHECK(dapa_series.mean_reliability.empty());  // aggregators have none
    REQUIRE(dapa_series.f1.size() == report.snapshot_hours.size());
}

TEST_CASE("temporal snapshots validate and default sensibly") {
    Corpus corpus = generate_synthetic(synth_config(11, 80));
    EvalConfig config;
    config.folds = 1;
    CHECK_THROWS_AS(temporal(corpus, config, {-1.0}), ConfigError);

    TemporalReport report = temporal(corpus, config, {0.0, 24.0});
    CHECK(report.snapshot_hours == std::vector<double>{0.0, 24.0});
    std::string csv = to_csv(report);
    CHECK(csv.find("system,hours,f1,mean_reliability") == 0);
}

}  // TEST_SUITE
