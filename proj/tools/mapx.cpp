// Command-line front end: synthesize corpora, train and persist models, score
// and explain documents, and run the evaluation experiments. Every artifact
// directory is written with a run_manifest.json recording the resolved
// configuration, so runs are reproducible from their outputs.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mapx/corpus.hpp"
#include "mapx/dataset.hpp"
#include "mapx/error.hpp"
#include "mapx/eval.hpp"
#include "mapx/explain.hpp"
#include "mapx/metrics.hpp"
#include "mapx/model_store.hpp"
#include "mapx/models.hpp"
#include "mapx/pipeline.hpp"
#include "mapx/reliability.hpp"
#include "mapx/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw mapx::Error("cannot write '" + path.string() + "'");
    out << text;
}

void write_manifest(const std::string& dir, const std::string& command,
                    ordered_json config, ordered_json inputs,
                    const std::vector<std::string>& outputs) {
    ordered_json manifest;
    manifest["format_version"] = 1;
    manifest["command"] = command;
    manifest["config"] = std::move(config);
    manifest["inputs"] = std::move(inputs);
    manifest["outputs"] = outputs;
    write_text(fs::path(dir) / "run_manifest.json", manifest.dump(2) + "\n");
}

std::vector<mapx::Strategy> parse_strategies(const std::vector<std::string>& names) {
    std::vector<mapx::Strategy> strategies;
    for (const std::string& name : names) {
        strategies.push_back(mapx::strategy_from_string(name));
    }
    return strategies;
}

// Per-document observation times: publish_time + at_hours when given,
// otherwise the corpus-wide latest event.
std::vector<mapx::Timestamp> observe_times(const mapx::Corpus& corpus,
                                           const std::vector<std::string>& doc_ids,
                                           std::optional<double> at_hours) {
    std::vector<mapx::Timestamp> times;
    times.reserve(doc_ids.size());
    for (const std::string& doc_id : doc_ids) {
        if (at_hours) {
            times.push_back(corpus.document(doc_id).publish_time +
                            static_cast<mapx::Timestamp>(
                                std::llround(*at_hours * mapx::kSecondsPerHour)));
        } else {
            times.push_back(corpus.latest_timestamp());
        }
    }
    return times;
}

ordered_json score_to_json(const mapx::DocumentScore& score) {
    ordered_json record;
    record["doc_id"] = score.doc_id;
    record["observe_at"] = score.observe_at;
    record["prob_false"] = score.aggregate.prob_false;
    record["strategy"] = mapx::to_string(score.aggregate.strategy);
    if (score.aggregate.degraded) record["degraded"] = true;
    record["per_model"] = ordered_json::array();
    for (std::size_t i = 0; i < score.predictions.size(); ++i) {
        const mapx::Prediction& pred = score.predictions[i];
        const mapx::ModelContribution& contrib = score.aggregate.per_model[i];
        record["per_model"].push_back({{"model_id", pred.model_id},
                                       {"prob_false", pred.prob_false},
                                       {"model_reliability", pred.model_reliability},
                                       {"weight", contrib.weight},
                                       {"share", contrib.share}});
    }
    if (score.explanation) record["explanation"] = mapx::to_json(*score.explanation);
    return record;
}

struct SynthArgs {
    std::string out;
    std::string name = "synthetic";
    mapx::SynthConfig config;
    double new_pub_word_signal = -1.0;  // sentinel: unset
    double new_pub_user_signal = -1.0;
};

int run_synth(const SynthArgs& args) {
    mapx::SynthConfig config = args.config;
    if (args.new_pub_word_signal >= 0.0) config.new_pub_word_signal = args.new_pub_word_signal;
    if (args.new_pub_user_signal >= 0.0) config.new_pub_user_signal = args.new_pub_user_signal;

    mapx::Corpus corpus = mapx::generate_synthetic(config);
    mapx::save_corpus(corpus, args.out, args.name);

    long long false_docs = 0;
    for (const mapx::Document& doc : corpus.documents()) {
        if (doc.label == mapx::Label::false_news) ++false_docs;
    }

    ordered_json resolved;
    resolved["name"] = args.name;
    resolved["seed"] = config.seed;
    resolved["n_publishers"] = config.n_publishers;
    resolved["n_documents"] = config.n_documents;
    resolved["n_users"] = config.n_users;
    resolved["false_rate"] = config.false_rate;
    resolved["engagement_rate_per_hour"] = config.engagement_rate_per_hour;
    resolved["horizon_hours"] = config.horizon_hours;
    resolved["word_signal"] = config.word_signal;
    resolved["publisher_signal"] = config.publisher_signal;
    resolved["user_signal"] = config.user_signal;
    resolved["new_publisher_doc_fraction"] = config.new_publisher_doc_fraction;
    if (config.new_pub_word_signal) resolved["new_pub_word_signal"] = *config.new_pub_word_signal;
    if (config.new_pub_user_signal) resolved["new_pub_user_signal"] = *config.new_pub_user_signal;
    write_manifest(args.out, "synth", resolved, ordered_json::object(),
                   {"documents.jsonl", "items.jsonl", "manifest.json"});

    std::cout << "wrote " << corpus.documents().size() << " documents ("
              << false_docs << " false), " << corpus.items().size() << " items, "
              << corpus.publishers().size() << " publishers, " << corpus.users().size()
              << " users to " << args.out << "\n";
    return 0;
}

struct TrainArgs {
    std::string data;
    std::string model_dir;
    std::vector<std::string> models;
    std::uint64_t seed = 1;
    double val_fraction = 0.1;
    std::string reliability_path;
};

int run_train(const TrainArgs& args) {
    mapx::Corpus corpus = mapx::load_corpus_dir(args.data);

    mapx::ModelBundle bundle;
    if (!args.reliability_path.empty()) {
        bundle.table = mapx::ReliabilityTable::from_json_file(args.reliability_path);
    }

    std::vector<std::string> doc_ids;
    for (const mapx::Document& doc : corpus.documents()) {
        if (!doc.label) {
            throw mapx::CorpusError("document '" + doc.doc_id +
                                    "' has no label; training needs a labeled corpus");
        }
        doc_ids.push_back(doc.doc_id);
    }
    if (doc_ids.empty()) throw mapx::CorpusError("corpus has no documents");

    // Hold out a validation slice for the standalone model scores; small
    // corpora (floor(fraction*n) == 0) train on everything.
    mapx::Rng rng(mapx::mix_seed(args.seed, 0));
    for (std::size_t i = doc_ids.size() - 1; i > 0; --i) {
        std::size_t j = mapx::next_below(rng, i + 1);
        std::swap(doc_ids[i], doc_ids[j]);
    }
    std::size_t n_val =
        static_cast<std::size_t>(args.val_fraction * static_cast<double>(doc_ids.size()));
    std::vector<std::string> val_ids(doc_ids.begin(), doc_ids.begin() + n_val);
    std::vector<std::string> train_ids(doc_ids.begin() + n_val, doc_ids.end());
    std::sort(train_ids.begin(), train_ids.end());
    std::sort(val_ids.begin(), val_ids.end());

    for (const std::string& doc_id : train_ids) {
        bundle.training_publisher_ids.insert(corpus.document(doc_id).publisher_id);
        for (const mapx::Item* item : corpus.items_for_document(doc_id, mapx::kTimestampMax)) {
            bundle.training_user_ids.insert(item->user_id);
        }
    }

    mapx::EnrichContext ctx = bundle.enrich_context();
    ctx.visible_label_docs = std::set<std::string>(train_ids.begin(), train_ids.end());
    mapx::Timestamp full = corpus.latest_timestamp();

    std::vector<mapx::EnrichedDocument> train_docs =
        mapx::enrich_batch(corpus, train_ids, full, ctx);
    std::vector<mapx::Label> train_labels;
    for (const std::string& doc_id : train_ids) {
        train_labels.push_back(*corpus.document(doc_id).label);
    }

    std::vector<std::string> model_ids =
        args.models.empty() ? mapx::registered_model_ids() : args.models;
    for (const std::string& model_id : model_ids) {
        std::unique_ptr<mapx::BaseModel> model = mapx::make_model(model_id);
        model->train(train_docs, train_labels);
        bundle.models.push_back(std::move(model));
    }

    if (!val_ids.empty()) {
        std::vector<mapx::EnrichedDocument> val_docs =
            mapx::enrich_batch(corpus, val_ids, full, ctx);
        for (auto& model : bundle.models) {
            mapx::Confusion confusion;
            for (std::size_t i = 0; i < val_docs.size(); ++i) {
                mapx::Prediction pred = model->predict(val_docs[i]);
                confusion.add(pred.prob_false >= 0.5, *corpus.document(val_ids[i]).label);
            }
            model->set_validation_score(confusion.f1());
        }
    }

    mapx::save_model_bundle(bundle, args.model_dir);

    ordered_json resolved;
    resolved["data"] = args.data;
    resolved["seed"] = args.seed;
    resolved["val_fraction"] = args.val_fraction;
    resolved["models"] = model_ids;
    resolved["n_train_documents"] = train_ids.size();
    resolved["n_val_documents"] = val_ids.size();
    if (!args.reliability_path.empty()) resolved["reliability"] = args.reliability_path;
    ordered_json inputs;
    inputs["data"] = args.data;
    std::vector<std::string> outputs = {"index.json"};
    for (const auto& model : bundle.models) {
        outputs.push_back(std::string(model->model_id()) + ".json");
    }
    write_manifest(args.model_dir, "train", resolved, inputs, outputs);

    std::cout << "trained " << bundle.models.size() << " models on " << train_ids.size()
              << " documents -> " << args.model_dir << "\n";
    return 0;
}

struct PredictArgs {
    std::string data;
    std::string model_dir;
    std::string out;
    std::string aggregator = "dapa";
    double at_hours = -1.0;  // sentinel: observe at the corpus' latest event
    bool with_explanations = false;
    std::string reliability_path;
};

int run_predict(const PredictArgs& args) {
    mapx::Corpus corpus = mapx::load_corpus_dir(args.data);
    mapx::ModelBundle bundle = mapx::load_model_bundle(args.model_dir);
    if (!args.reliability_path.empty()) {
        bundle.table = mapx::ReliabilityTable::from_json_file(args.reliability_path);
    }
    mapx::Strategy strategy = mapx::strategy_from_string(args.aggregator);

    std::vector<std::string> doc_ids;
    for (const mapx::Document& doc : corpus.documents()) doc_ids.push_back(doc.doc_id);

    std::optional<double> at_hours;
    if (args.at_hours >= 0.0) at_hours = args.at_hours;
    std::vector<mapx::Timestamp> times = observe_times(corpus, doc_ids, at_hours);

    mapx::EnrichContext ctx = bundle.enrich_context();
    std::vector<const mapx::BaseModel*> models = bundle.model_ptrs();
    std::vector<mapx::DocumentScore> scores = mapx::score_documents(
        corpus, doc_ids, times, models, ctx, strategy, args.with_explanations);

    std::string lines;
    for (const mapx::DocumentScore& score : scores) {
        lines += score_to_json(score).dump() + "\n";
    }
    write_text(fs::path(args.out) / "predictions.jsonl", lines);

    ordered_json resolved;
    resolved["data"] = args.data;
    resolved["model_dir"] = args.model_dir;
    resolved["aggregator"] = args.aggregator;
    if (at_hours) resolved["at_hours"] = *at_hours;
    resolved["explain"] = args.with_explanations;
    if (!args.reliability_path.empty()) resolved["reliability"] = args.reliability_path;
    ordered_json inputs;
    inputs["data"] = args.data;
    inputs["model_dir"] = args.model_dir;
    write_manifest(args.out, "predict", resolved, inputs, {"predictions.jsonl"});

    std::cout << "scored " << scores.size() << " documents -> "
              << (fs::path(args.out) / "predictions.jsonl").string() << "\n";
    return 0;
}

struct ExplainArgs {
    std::string data;
    std::string model_dir;
    std::string doc_id;
    std::string aggregator = "dapa";
    double at_hours = -1.0;
    std::string format = "json";
    std::string out;
};

int run_explain(const ExplainArgs& args) {
    if (args.format != "json" && args.format != "text") {
        throw mapx::ConfigError("unknown format '" + args.format + "' (use json or text)");
    }
    mapx::Corpus corpus = mapx::load_corpus_dir(args.data);
    mapx::ModelBundle bundle = mapx::load_model_bundle(args.model_dir);
    mapx::Strategy strategy = mapx::strategy_from_string(args.aggregator);

    std::optional<double> at_hours;
    if (args.at_hours >= 0.0) at_hours = args.at_hours;
    std::vector<std::string> doc_ids = {args.doc_id};
    std::vector<mapx::Timestamp> times = observe_times(corpus, doc_ids, at_hours);

    mapx::EnrichContext ctx = bundle.enrich_context();
    std::vector<const mapx::BaseModel*> models = bundle.model_ptrs();
    mapx::DocumentScore score =
        mapx::score_document(corpus, args.doc_id, times[0], models, bundle.descriptors(), ctx,
                             strategy, true);

    std::string rendered = args.format == "json" ? mapx::render_json(*score.explanation) + "\n"
                                                 : mapx::render_text(*score.explanation);
    if (args.out.empty()) {
        std::cout << rendered;
    } else {
        write_text(args.out, rendered);
    }
    return 0;
}

struct EvalArgs {
    std::string data;
    std::string out;
    mapx::EvalConfig config;
    std::vector<std::string> aggregators = {"dapa", "bmacc", "max", "av"};
    std::string reliability_path;
    std::string factor;                  // degrade only
    std::vector<double> snapshot_hours;  // temporal only
};

mapx::EvalConfig resolve_eval_config(const EvalArgs& args, mapx::ReliabilityTable& table) {
    mapx::EvalConfig config = args.config;
    config.strategies = parse_strategies(args.aggregators);
    if (!args.reliability_path.empty()) {
        table = mapx::ReliabilityTable::from_json_file(args.reliability_path);
        config.table = &table;
    }
    return config;
}

ordered_json eval_config_json(const EvalArgs& args, const mapx::EvalConfig& config) {
    ordered_json resolved;
    resolved["data"] = args.data;
    resolved["folds"] = config.folds;
    resolved["seed"] = config.seed;
    resolved["split"] = {config.train_fraction, config.val_fraction, config.test_fraction};
    resolved["threshold"] = config.threshold;
    resolved["aggregators"] = args.aggregators;
    resolved["models"] = config.resolved_model_ids();
    if (!args.reliability_path.empty()) resolved["reliability"] = args.reliability_path;
    return resolved;
}

int run_evaluate(const EvalArgs& args) {
    mapx::Corpus corpus = mapx::load_corpus_dir(args.data);
    mapx::ReliabilityTable table;
    mapx::EvalConfig config = resolve_eval_config(args, table);

    mapx::EvalReport report = mapx::evaluate(corpus, config);
    write_text(fs::path(args.out) / "evaluation.json", mapx::to_json(report).dump(2) + "\n");
    write_text(fs::path(args.out) / "evaluation.csv", mapx::to_csv(report));

    ordered_json inputs;
    inputs["data"] = args.data;
    write_manifest(args.out, "evaluate", eval_config_json(args, config), inputs,
                   {"evaluation.json", "evaluation.csv"});

    std::printf("%-24s %8s %8s\n", "system", "mean_f1", "mean_acc");
    for (const mapx::SystemSeries& series : report.systems) {
        std::printf("%-24s %8.4f %8.4f\n", series.system.c_str(), series.mean_f1,
                    series.mean_accuracy);
    }
    return 0;
}

int run_degrade(const EvalArgs& args) {
    mapx::Corpus corpus = mapx::load_corpus_dir(args.data);
    mapx::ReliabilityTable table;
    mapx::EvalConfig config = resolve_eval_config(args, table);
    mapx::Factor factor = mapx::factor_from_string(args.factor);

    mapx::DegradationReport report = mapx::degrade(corpus, config, factor);
    write_text(fs::path(args.out) / "degradation.json", mapx::to_json(report).dump(2) + "\n");
    write_text(fs::path(args.out) / "degradation.csv", mapx::to_csv(report));

    ordered_json resolved = eval_config_json(args, config);
    resolved["factor"] = args.factor;
    ordered_json inputs;
    inputs["data"] = args.data;
    write_manifest(args.out, "degrade", resolved, inputs,
                   {"degradation.json", "degradation.csv"});

    std::printf("factor %s: %lld reliable, %lld unreliable test documents\n",
                mapx::to_string(report.factor), report.n_reliable, report.n_unreliable);
    for (const mapx::DegradationRow& row : report.rows) {
        std::printf("%-24s %.2f -> %.2f (%+.2f)[%d]\n", row.system.c_str(), row.f1_reliable,
                    row.f1_unreliable, row.diff, row.rank);
    }
    return 0;
}

int run_temporal(const EvalArgs& args) {
    mapx::Corpus corpus = mapx::load_corpus_dir(args.data);
    mapx::ReliabilityTable table;
    mapx::EvalConfig config = resolve_eval_config(args, table);

    mapx::TemporalReport report = mapx::temporal(corpus, config, args.snapshot_hours);
    write_text(fs::path(args.out) / "temporal.json", mapx::to_json(report).dump(2) + "\n");
    write_text(fs::path(args.out) / "temporal.csv", mapx::to_csv(report));

    ordered_json resolved = eval_config_json(args, config);
    resolved["snapshots"] = report.snapshot_hours;
    ordered_json inputs;
    inputs["data"] = args.data;
    write_manifest(args.out, "temporal", resolved, inputs, {"temporal.json", "temporal.csv"});

    std::printf("%-24s", "system");
    for (double h : report.snapshot_hours) std::printf(" f1@%gh", h);
    std::printf("\n");
    for (const mapx::TemporalSeries& series : report.systems) {
        std::printf("%-24s", series.system.c_str());
        for (double f1 : series.f1) std::printf(" %6.4f", f1);
        std::printf("\n");
    }
    return 0;
}

void add_eval_flags(CLI::App* cmd, EvalArgs& args) {
    cmd->add_option("--data", args.data, "corpus directory")->required();
    cmd->add_option("--out", args.out, "output directory")->required();
    cmd->add_option("--folds", args.config.folds, "number of folds");
    cmd->add_option("--seed", args.config.seed, "random seed");
    cmd->add_option("--threshold", args.config.threshold, "classification threshold");
    cmd->add_option("--aggregator", args.aggregators, "aggregation strategies")
        ->delimiter(',');
    cmd->add_option("--models", args.config.model_ids, "base model ids")->delimiter(',');
    cmd->add_option("--reliability", args.reliability_path, "reliability table JSON");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"model-agnostic false-information scoring pipeline"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
    synth->add_option("--out", synth_args.out, "output corpus directory")->required();
    synth->add_option("--name", synth_args.name, "corpus name");
    synth->add_option("--seed", synth_args.config.seed, "random seed");
    synth->add_option("--docs", synth_args.config.n_documents, "number of documents");
    synth->add_option("--publishers", synth_args.config.n_publishers, "number of publishers");
    synth->add_option("--users", synth_args.config.n_users, "number of users");
    synth->add_option("--false-rate", synth_args.config.false_rate, "P(label = false news)");
    synth->add_option("--engagement-rate", synth_args.config.engagement_rate_per_hour,
                      "mean items per hour");
    synth->add_option("--horizon-hours", synth_args.config.horizon_hours,
                      "engagement window length");
    synth->add_option("--word-signal", synth_args.config.word_signal,
                      "how predictive words are of the label, 0..1");
    synth->add_option("--publisher-signal", synth_args.config.publisher_signal,
                      "how predictive publishers are, 0..1");
    synth->add_option("--user-signal", synth_args.config.user_signal,
                      "how predictive engaging users are, 0..1");
    synth->add_option("--new-publisher-fraction", synth_args.config.new_publisher_doc_fraction,
                      "fraction of documents from single-document publishers");
    synth->add_option("--new-pub-word-signal", synth_args.new_pub_word_signal,
                      "word signal override on the new-publisher side");
    synth->add_option("--new-pub-user-signal", synth_args.new_pub_user_signal,
                      "user signal override on the new-publisher side");

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "train models and save a model directory");
    train->add_option("--data", train_args.data, "labeled corpus directory")->required();
    train->add_option("--model-dir", train_args.model_dir, "output model directory")->required();
    train->add_option("--models", train_args.models, "model ids to train (default: all)")
        ->delimiter(',');
    train->add_option("--seed", train_args.seed, "random seed for the validation split");
    train->add_option("--val-fraction", train_args.val_fraction,
                      "held-out fraction for validation scores");
    train->add_option("--reliability", train_args.reliability_path, "reliability table JSON");

    PredictArgs predict_args;
    CLI::App* predict = app.add_subcommand("predict", "score every document in a corpus");
    predict->add_option("--data", predict_args.data, "corpus directory")->required();
    predict->add_option("--model-dir", predict_args.model_dir, "model directory")->required();
    predict->add_option("--out", predict_args.out, "output directory")->required();
    predict->add_option("--aggregator", predict_args.aggregator, "dapa, bmacc, max, or av");
    predict->add_option("--at-hours", predict_args.at_hours,
                        "observe each document this many hours after publication");
    predict->add_flag("--explain", predict_args.with_explanations,
                      "attach an explanation to every record");
    predict->add_option("--reliability", predict_args.reliability_path,
                        "reliability table JSON (overrides the trained table)");

    ExplainArgs explain_args;
    CLI::App* explain = app.add_subcommand("explain", "explain one document's prediction");
    explain->add_option("--data", explain_args.data, "corpus directory")->required();
    explain->add_option("--model-dir", explain_args.model_dir, "model directory")->required();
    explain->add_option("--doc", explain_args.doc_id, "document id")->required();
    explain->add_option("--aggregator", explain_args.aggregator, "dapa, bmacc, max, or av");
    explain->add_option("--at-hours", explain_args.at_hours,
                        "observe the document this many hours after publication");
    explain->add_option("--format", explain_args.format, "json or text");
    explain->add_option("--out", explain_args.out, "write here instead of stdout");

    EvalArgs evaluate_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validated accuracy and F1");
    add_eval_flags(evaluate, evaluate_args);

    EvalArgs degrade_args;
    CLI::App* degrade = app.add_subcommand("degrade",
                                           "F1 on reliable vs unreliable test partitions");
    add_eval_flags(degrade, degrade_args);
    degrade->add_option("--factor", degrade_args.factor,
                        "publisher_type, item_per_user, or item_count")
        ->required();

    EvalArgs temporal_args;
    CLI::App* temporal = app.add_subcommand("temporal", "F1 across observation snapshots");
    add_eval_flags(temporal, temporal_args);
    temporal->add_option("--snapshots", temporal_args.snapshot_hours,
                         "snapshot hours (default 0,1,6,24,72,168)")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth(synth_args);
        if (train->parsed()) return run_train(train_args);
        if (predict->parsed()) return run_predict(predict_args);
        if (explain->parsed()) return run_explain(explain_args);
        if (evaluate->parsed()) return run_evaluate(evaluate_args);
        if (degrade->parsed()) return run_degrade(degrade_args);
        if (temporal->parsed()) return run_temporal(temporal_args);
    } catch (const std::exception& e) {
        std::cerr << "mapx: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
