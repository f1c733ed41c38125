#include "mapx/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>

#include "mapx/error.hpp"
#include "mapx/metrics.hpp"
#include "mapx/pipeline.hpp"
#include "mapx/rng.hpp"

namespace mapx {

void EvalConfig::validate() const {
    if (folds < 1) throw ConfigError("folds must be at least 1");
    if (train_fraction < 0 || val_fraction < 0 || test_fraction < 0) {
        throw ConfigError("split fractions must be nonnegative");
    }
    double sum = train_fraction + val_fraction + test_fraction;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("split fractions sum to " + std::to_string(sum) + ", expected 1");
    }
    if (threshold < 0.0 || threshold > 1.0) throw ConfigError("threshold must be in [0, 1]");
    if (strategies.empty()) throw ConfigError("no aggregation strategies selected");
    for (const std::string& id : model_ids) make_model(id);  // throws on unknown ids
}

std::vector<std::string> EvalConfig::resolved_model_ids() const {
    return model_ids.empty() ? registered_model_ids() : model_ids;
}

namespace {

const ReliabilityTable& table_of(const EvalConfig& config) {
    return config.table ? *config.table : default_reliability_table();
}

std::vector<std::string> labeled_doc_ids(const Corpus& corpus) {
    std::vector<std::string> ids;
    ids.reserve(corpus.documents().size());
    for (const Document& doc : corpus.documents()) {
        if (!doc.label) {
            throw CorpusError("document '" + doc.doc_id + "' has no label; evaluation needs "
                              "fully labeled corpora");
        }
        ids.push_back(doc.doc_id);
    }
    return ids;
}

std::vector<Timestamp> same_time(std::size_t n, Timestamp t) {
    return std::vector<Timestamp>(n, t);
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
}

}  // namespace

FoldPlan plan_fold(const Corpus& corpus, const EvalConfig& config, int fold) {
    config.validate();
    std::vector<std::string> ids = labeled_doc_ids(corpus);
    std::size_t n = ids.size();
    if (n < static_cast<std::size_t>(config.folds)) {
        throw ConfigError("corpus has " + std::to_string(n) + " documents but " +
                          std::to_string(config.folds) + " folds were requested");
    }

    Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(fold)));
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = next_below(rng, i + 1);
        std::swap(ids[i], ids[j]);
    }

    std::size_t n_train = static_cast<std::size_t>(config.train_fraction * static_cast<double>(n));
    std::size_t n_val = static_cast<std::size_t>(config.val_fraction * static_cast<double>(n));
    std::size_t n_test = n - n_train - n_val;
    if (n_train == 0 || n_test == 0 || (config.val_fraction > 0 && n_val == 0)) {
        throw ConfigError("corpus with " + std::to_string(n) +
                          " documents leaves an empty train/val/test slice");
    }

    FoldPlan plan;
    plan.train.assign(ids.begin(), ids.begin() + n_train);
    plan.val.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
    plan.test.assign(ids.begin() + n_train + n_val, ids.end());
    return plan;
}

EnrichContext PreparedFold::enrich_context(const EvalConfig& config) const {
    EnrichContext ctx;
    ctx.training_publisher_ids = train_publisher_ids;
    ctx.training_user_ids = train_user_ids;
    ctx.visible_label_docs = std::set<std::string>(plan.train.begin(), plan.train.end());
    ctx.table = &table_of(config);
    return ctx;
}

PreparedFold prepare_fold(const Corpus& corpus, const EvalConfig& config, int fold) {
    PreparedFold prepared;
    prepared.plan = plan_fold(corpus, config, fold);

    for (const std::string& doc_id : prepared.plan.train) {
        prepared.train_publisher_ids.insert(corpus.document(doc_id).publisher_id);
        for (const Item* item : corpus.items_for_document(doc_id, kTimestampMax)) {
            prepared.train_user_ids.insert(item->user_id);
        }
    }

    EnrichContext ctx = prepared.enrich_context(config);
    Timestamp full = corpus.latest_timestamp();

    std::vector<EnrichedDocument> train_docs =
        enrich_batch(corpus, prepared.plan.train, full, ctx);
    std::vector<Label> train_labels;
    train_labels.reserve(prepared.plan.train.size());
    for (const std::string& doc_id : prepared.plan.train) {
        train_labels.push_back(*corpus.document(doc_id).label);
    }

    for (const std::string& model_id : config.resolved_model_ids()) {
        std::unique_ptr<BaseModel> model = make_model(model_id);
        model->train(train_docs, train_labels);
        prepared.models.push_back(std::move(model));
    }

    // Validation slice sets each model's standalone score (F1 at the
    // configured threshold), which in turn weighs it under bmacc.
    if (!prepared.plan.val.empty()) {
        std::vector<EnrichedDocument> val_docs = enrich_batch(corpus, prepared.plan.val, full, ctx);
        for (auto& model : prepared.models) {
            Confusion confusion;
            for (std::size_t i = 0; i < val_docs.size(); ++i) {
                Prediction pred = model->predict(val_docs[i]);
                confusion.add(pred.prob_false >= config.threshold,
                              *corpus.document(prepared.plan.val[i]).label);
            }
            model->set_validation_score(confusion.f1());
        }
    }

    for (const auto& model : prepared.models) prepared.descriptors.push_back(model->descriptor());
    return prepared;
}

namespace {

struct FoldScores {
    // Test-slice scores carrying per-model predictions; aggregate holds the
    // first strategy, others recomputed from the predictions.
    std::vector<DocumentScore> scores;
    std::vector<Label> labels;
    PreparedFold prepared;
};

FoldScores score_fold(const Corpus& corpus, const EvalConfig& config, int fold) {
    FoldScores out;
    out.prepared = prepare_fold(corpus, config, fold);
    EnrichContext ctx = out.prepared.enrich_context(config);

    std::vector<const BaseModel*> models;
    for (const auto& model : out.prepared.models) models.push_back(model.get());

    std::vector<Timestamp> observe_at =
        same_time(out.prepared.plan.test.size(), corpus.latest_timestamp());
    out.scores = score_documents_serial(corpus, out.prepared.plan.test, observe_at, models, ctx,
                                        config.strategies.front(), false);
    for (const std::string& doc_id : out.prepared.plan.test) {
        out.labels.push_back(*corpus.document(doc_id).label);
    }
    return out;
}

// System evaluation order: base models first, then strategies.
std::vector<std::string> system_names(const EvalConfig& config) {
    std::vector<std::string> names = config.resolved_model_ids();
    for (Strategy strategy : config.strategies) names.emplace_back(to_string(strategy));
    return names;
}

// prob_false of each system for one scored document.
std::map<std::string, double> system_probs(const DocumentScore& score, const EvalConfig& config,
                                           std::span<const BaseModelDescriptor> descriptors) {
    std::map<std::string, double> probs;
    for (const Prediction& pred : score.predictions) probs[pred.model_id] = pred.prob_false;
    for (Strategy strategy : config.strategies) {
        if (strategy == score.aggregate.strategy) {
            probs[to_string(strategy)] = score.aggregate.prob_false;
        } else {
            probs[to_string(strategy)] =
                aggregate(strategy, score.predictions, descriptors).prob_false;
        }
    }
    return probs;
}

template <typename FoldFn>
void run_folds(const EvalConfig& config, FoldFn&& fn) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int fold = 0; fold < config.folds; ++fold) {
        try {
            fn(fold);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

const SystemSeries& EvalReport::system(const std::string& name) const {
    for (const SystemSeries& series : systems) {
        if (series.system == name) return series;
    }
    throw Error("no system '" + name + "' in the evaluation report");
}

EvalReport evaluate(const Corpus& corpus, const EvalConfig& config) {
    config.validate();

    EvalReport report;
    report.folds = config.folds;
    report.seed = config.seed;
    report.n_documents = static_cast<int>(corpus.documents().size());

    std::vector<std::string> names = system_names(config);
    std::map<std::string, SystemSeries> by_system;
    for (const std::string& name : names) {
        by_system[name].system = name;
        by_system[name].fold_f1.resize(config.folds, 0.0);
        by_system[name].fold_accuracy.resize(config.folds, 0.0);
    }

    run_folds(config, [&](int fold) {
        FoldScores fold_scores = score_fold(corpus, config, fold);
        std::map<std::string, Confusion> confusions;
        for (std::size_t i = 0; i < fold_scores.scores.size(); ++i) {
            for (const auto& [system, prob] :
                 system_probs(fold_scores.scores[i], config, fold_scores.prepared.descriptors)) {
                confusions[system].add(prob >= config.threshold, fold_scores.labels[i]);
            }
        }
        for (const auto& [system, confusion] : confusions) {
            by_system.at(system).fold_f1[fold] = confusion.f1();
            by_system.at(system).fold_accuracy[fold] = confusion.accuracy();
        }
    });

    for (const std::string& name : names) {
        SystemSeries& series = by_system.at(name);
        series.mean_f1 = mean_of(series.fold_f1);
        series.mean_accuracy = mean_of(series.fold_accuracy);
        report.systems.push_back(std::move(series));
    }
    return report;
}

const DegradationRow& DegradationReport::row(const std::string& system) const {
    for (const DegradationRow& r : rows) {
        if (r.system == system) return r;
    }
    throw Error("no system '" + system + "' in the degradation report");
}

DegradationReport degrade(const Corpus& corpus, const EvalConfig& config, Factor factor) {
    config.validate();
    if (factor != Factor::publisher_type && factor != Factor::item_per_user &&
        factor != Factor::item_count) {
        throw ConfigError(std::string("degradation by '") + to_string(factor) +
                          "' is not supported (use publisher_type, item_per_user, or "
                          "item_count)");
    }
    const ReliabilityTable& table = table_of(config);

    DegradationReport report;
    report.factor = factor;

    std::vector<std::string> names = system_names(config);
    // confusions[side][system], side 0 = reliable, 1 = unreliable
    std::map<std::string, Confusion> confusions[2];
    long long counts[2] = {0, 0};

    run_folds(config, [&](int fold) {
        FoldScores fold_scores = score_fold(corpus, config, fold);
        Timestamp full = corpus.latest_timestamp();

        std::map<std::string, Confusion> local[2];
        long long local_counts[2] = {0, 0};
        for (std::size_t i = 0; i < fold_scores.scores.size(); ++i) {
            const std::string& doc_id = fold_scores.scores[i].doc_id;
            int side;
            if (factor == Factor::publisher_type) {
                const std::string& publisher = corpus.document(doc_id).publisher_id;
                side = fold_scores.prepared.train_publisher_ids.count(publisher) ? 0 : 1;
            } else {
                auto items = corpus.items_for_document(doc_id, full);
                double value;
                if (factor == Factor::item_count) {
                    value = static_cast<double>(items.size());
                } else {
                    std::set<std::string> users;
                    for (const Item* item : items) users.insert(item->user_id);
                    value = users.empty()
                                ? 0.0
                                : static_cast<double>(items.size()) /
                                      static_cast<double>(users.size());
                }
                const PiecewiseBins& bins = table.bins(factor);
                if (value >= bins.edges.back()) {
                    side = 0;
                } else if (value < bins.edges.front()) {
                    side = 1;
                } else {
                    continue;  // mid-bin documents sit out this experiment
                }
            }
            ++local_counts[side];
            for (const auto& [system, prob] :
                 system_probs(fold_scores.scores[i], config, fold_scores.prepared.descriptors)) {
                local[side][system].add(prob >= config.threshold, fold_scores.labels[i]);
            }
        }
#pragma omp critical
        {
            for (int side = 0; side < 2; ++side) {
                counts[side] += local_counts[side];
                for (const auto& [system, confusion] : local[side]) {
                    confusions[side][system].merge(confusion);
                }
            }
        }
    });

    report.n_reliable = counts[0];
    report.n_unreliable = counts[1];
    if (counts[0] == 0 || counts[1] == 0) {
        throw Error(std::string("degradation by '") + to_string(factor) + "': the " +
                    (counts[0] == 0 ? "reliable" : "unreliable") + " partition is empty");
    }

    for (const std::string& name : names) {
        DegradationRow row;
        row.system = name;
        row.f1_reliable = confusions[0][name].f1();
        row.f1_unreliable = confusions[1][name].f1();
        row.diff = row.f1_reliable - row.f1_unreliable;
        report.rows.push_back(std::move(row));
    }
    for (DegradationRow& row : report.rows) {
        int rank = 1;
        for (const DegradationRow& other : report.rows) {
            if (other.diff < row.diff) ++rank;
        }
        row.rank = rank;
    }
    return report;
}

const TemporalSeries& TemporalReport::system(const std::string& name) const {
    for (const TemporalSeries& series : systems) {
        if (series.system == name) return series;
    }
    throw Error("no system '" + name + "' in the temporal report");
}

TemporalReport temporal(const Corpus& corpus, const EvalConfig& config,
                        std::vector<double> snapshot_hours) {
    config.validate();
    if (snapshot_hours.empty()) snapshot_hours = default_snapshot_hours();
    for (double h : snapshot_hours) {
        if (h < 0) throw ConfigError("snapshot hours must be nonnegative");
    }

    TemporalReport report;
    report.snapshot_hours = snapshot_hours;

    std::vector<std::string> names = system_names(config);
    std::size_t n_snapshots = snapshot_hours.size();
    // Pooled across folds: confusions[snapshot][system]; reliability sums per
    // base model per snapshot.
    std::vector<std::map<std::string, Confusion>> confusions(n_snapshots);
    std::vector<std::map<std::string, double>> reliability_sums(n_snapshots);
    std::vector<long long> scored(n_snapshots, 0);

    run_folds(config, [&](int fold) {
        PreparedFold prepared = prepare_fold(corpus, config, fold);
        EnrichContext ctx = prepared.enrich_context(config);
        std::vector<const BaseModel*> models;
        for (const auto& model : prepared.models) models.push_back(model.get());

        std::vector<Label> labels;
        for (const std::string& doc_id : prepared.plan.test) {
            labels.push_back(*corpus.document(doc_id).label);
        }

        for (std::size_t s = 0; s < n_snapshots; ++s) {
            std::vector<Timestamp> observe_at;
            observe_at.reserve(prepared.plan.test.size());
            for (const std::string& doc_id : prepared.plan.test) {
                observe_at.push_back(corpus.document(doc_id).publish_time +
                                     static_cast<Timestamp>(
                                         std::llround(snapshot_hours[s] * kSecondsPerHour)));
            }
            std::vector<DocumentScore> scores =
                score_documents_serial(corpus, prepared.plan.test, observe_at, models, ctx,
                                       config.strategies.front(), false);

            std::map<std::string, Confusion> local;
            std::map<std::string, double> local_reliability;
            for (std::size_t i = 0; i < scores.size(); ++i) {
                for (const auto& [system, prob] :
                     system_probs(scores[i], config, prepared.descriptors)) {
                    local[system].add(prob >= config.threshold, labels[i]);
                }
                for (const Prediction& pred : scores[i].predictions) {
                    local_reliability[pred.model_id] += pred.model_reliability;
                }
            }
#pragma omp critical
            {
                scored[s] += static_cast<long long>(scores.size());
                for (const auto& [system, confusion] : local) {
                    confusions[s][system].merge(confusion);
                }
                for (const auto& [model_id, sum] : local_reliability) {
                    reliability_sums[s][model_id] += sum;
                }
            }
        }
    });

    for (const std::string& name : names) {
        TemporalSeries series;
        series.system = name;
        bool is_model = reliability_sums[0].count(name) > 0;
        for (std::size_t s = 0; s < n_snapshots; ++s) {
            series.f1.push_back(confusions[s][name].f1());
            if (is_model && scored[s] > 0) {
                series.mean_reliability.push_back(reliability_sums[s][name] /
                                                  static_cast<double>(scored[s]));
            }
        }
        report.systems.push_back(std::move(series));
    }
    return report;
}

// --- report serialization ----------------------------------------------------

namespace {

std::string csv_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const EvalReport& report) {
    nlohmann::ordered_json out;
    out["folds"] = report.folds;
    out["seed"] = report.seed;
    out["n_documents"] = report.n_documents;
    out["systems"] = nlohmann::ordered_json::array();
    for (const SystemSeries& series : report.systems) {
        out["systems"].push_back({{"system", series.system},
                                  {"fold_f1", series.fold_f1},
                                  {"fold_accuracy", series.fold_accuracy},
                                  {"mean_f1", series.mean_f1},
                                  {"mean_accuracy", series.mean_accuracy}});
    }
    return out;
}

std::string to_csv(const EvalReport& report) {
    std::string out = "system,fold,f1,accuracy\n";
    for (const SystemSeries& series : report.systems) {
        for (std::size_t fold = 0; fold < series.fold_f1.size(); ++fold) {
            out += series.system + "," + std::to_string(fold) + "," +
                   csv_number(series.fold_f1[fold]) + "," +
                   csv_number(series.fold_accuracy[fold]) + "\n";
        }
        out += series.system + ",mean," + csv_number(series.mean_f1) + "," +
               csv_number(series.mean_accuracy) + "\n";
    }
    return out;
}

nlohmann::ordered_json to_json(const DegradationReport& report) {
    nlohmann::ordered_json out;
    out["factor"] = to_string(report.factor);
    out["n_reliable"] = report.n_reliable;
    out["n_unreliable"] = report.n_unreliable;
    out["rows"] = nlohmann::ordered_json::array();
    for (const DegradationRow& row : report.rows) {
        out["rows"].push_back({{"system", row.system},
                               {"f1_reliable", row.f1_reliable},
                               {"f1_unreliable", row.f1_unreliable},
                               {"diff", row.diff},
                               {"rank", row.rank}});
    }
    return out;
}

std::string to_csv(const DegradationReport& report) {
    std::string out = "system,f1_reliable,f1_unreliable,diff,rank\n";
    for (const DegradationRow& row : report.rows) {
        out += row.system + "," + csv_number(row.f1_reliable) + "," +
               csv_number(row.f1_unreliable) + "," + csv_number(row.diff) + "," +
               std::to_string(row.rank) + "\n";
    }
    return out;
}

nlohmann::ordered_json to_json(const TemporalReport& report) {
    nlohmann::ordered_json out;
    out["snapshot_hours"] = report.snapshot_hours;
    out["systems"] = nlohmann::ordered_json::array();
    for (const TemporalSeries& series : report.systems) {
        nlohmann::ordered_json entry;
        entry["system"] = series.system;
        entry["f1"] = series.f1;
        if (!series.mean_reliability.empty()) {
            entry["mean_reliability"] = series.mean_reliability;
        }
        out["systems"].push_back(std::move(entry));
    }
    return out;
}

std::string to_csv(const TemporalReport& report) {
    std::string out = "system,hours,f1,mean_reliability\n";
    for (const TemporalSeries& series : report.systems) {
        for (std::size_t s = 0; s < report.snapshot_hours.size(); ++s) {
            out += series.system + "," + csv_number(report.snapshot_hours[s]) + "," +
                   csv_number(series.f1[s]) + ",";
            if (!series.mean_reliability.empty()) out += csv_number(series.mean_reliability[s]);
            out += "\n";
        }
    }
    return out;
}

}  // namespace mapx
