#pragma once

// Evaluation harness: seeded Monte Carlo cross-validation with a
// train/validation/test split per fold, reliability-degradation comparisons,
// and temporal snapshot analysis. "Systems" are the individual base models
// plus each aggregation strategy over all of them.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mapx/aggregate.hpp"
#include "mapx/corpus.hpp"
#include "mapx/dataset.hpp"
#include "mapx/models.hpp"
#include "mapx/reliability.hpp"

namespace mapx {

struct EvalConfig {
    int folds = 10;
    double train_fraction = 0.70;
    double val_fraction = 0.10;
    double test_fraction = 0.20;
    std::uint64_t seed = 1;
    std::vector<Strategy> strategies = {Strategy::dapa, Strategy::bmacc, Strategy::max_conf,
                                        Strategy::av};
    std::vector<std::string> model_ids;  // empty -> all registered models
    double threshold = 0.5;              // prob_false >= threshold -> predicted false
    const ReliabilityTable* table = nullptr;

    void validate() const;
    std::vector<std::string> resolved_model_ids() const;
};

struct FoldPlan {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

// Fresh seeded shuffle and split for the given fold index. Requires every
// document to be labeled and every slice to be nonempty.
FoldPlan plan_fold(const Corpus& corpus, const EvalConfig& config, int fold);

// One fold's trained state: models fitted on the train slice (validation
// scores from the val slice) and the membership sets that define "existing"
// publishers/users and which labels history payloads may reveal.
struct PreparedFold {
    FoldPlan plan;
    std::set<std::string> train_publisher_ids;
    std::set<std::string> train_user_ids;
    std::vector<std::unique_ptr<BaseModel>> models;
    std::vector<BaseModelDescriptor> descriptors;

    EnrichContext enrich_context(const EvalConfig& config) const;
};

PreparedFold prepare_fold(const Corpus& corpus, const EvalConfig& config, int fold);

struct SystemSeries {
    std::string system;
    std::vector<double> fold_f1;
    std::vector<double> fold_accuracy;
    double mean_f1 = 0.0;
    double mean_accuracy = 0.0;
};

struct EvalReport {
    int folds = 0;
    std::uint64_t seed = 0;
    int n_documents = 0;
    std::vector<SystemSeries> systems;

    const SystemSeries& system(const std::string& name) const;
};

EvalReport evaluate(const Corpus& corpus, const EvalConfig& config);

struct DegradationRow {
    std::string system;
    double f1_reliable = 0.0;
    double f1_unreliable = 0.0;
    double diff = 0.0;  // f1_reliable - f1_unreliable, signed
    int rank = 0;       // ascending by diff; ties share a rank
};

struct DegradationReport {
    Factor factor = Factor::publisher_type;
    long long n_reliable = 0;
    long long n_unreliable = 0;
    std::vector<DegradationRow> rows;

    const DegradationRow& row(const std::string& system) const;
};

// factor must be publisher_type, item_per_user, or item_count. Test documents
// are split into a reliable partition (existing publisher / top bin) and an
// unreliable one (new publisher / bottom bin); mid-bin documents are left out.
DegradationReport degrade(const Corpus& corpus, const EvalConfig& config, Factor factor);

struct TemporalSeries {
    std::string system;
    std::vector<double> f1;                // one per snapshot
    std::vector<double> mean_reliability;  // base models only; empty otherwise
};

struct TemporalReport {
    std::vector<double> snapshot_hours;
    std::vector<TemporalSeries> systems;

    const TemporalSeries& system(const std::string& name) const;
};

inline const std::vector<double>& default_snapshot_hours() {
    static const std::vector<double> hours = {0, 1, 6, 24, 72, 168};
    return hours;
}

// Each document is scored at observe_at = publish_time + h hours for every h
// in snapshot_hours; confusions pool across folds.
TemporalReport temporal(const Corpus& corpus, const EvalConfig& config,
                        std::vector<double> snapshot_hours);

nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const DegradationReport& report);
nlohmann::ordered_json to_json(const TemporalReport& report);

std::string to_csv(const EvalReport& report);
std::string to_csv(const DegradationReport& report);
std::string to_csv(const TemporalReport& report);

}  // namespace mapx
