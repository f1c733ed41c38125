#pragma once

// Aggregation strategies combining base-model predictions into one falsehood
// probability. dapa weights each model by the reliability of its inputs for
// the specific document; bmacc weights by held-out validation performance;
// max_conf picks the most confident model; av is the plain mean.

#include <span>
#include <string>
#include <vector>

#include "mapx/models.hpp"

namespace mapx {

enum class Strategy { dapa, bmacc, max_conf, av };

inline constexpr Strategy kAllStrategies[] = {Strategy::dapa, Strategy::bmacc,
                                              Strategy::max_conf, Strategy::av};

// CLI spellings: dapa, bmacc, max, av.
const char* to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& s);

struct ModelContribution {
    std::string model_id;
    double prob_false = 0.0;
    double weight = 0.0;
    double share = 0.0;  // weight / total weight; 0 when the total was 0
};

struct AggregateResult {
    double prob_false = 0.0;
    Strategy strategy = Strategy::dapa;
    std::vector<ModelContribution> per_model;
    // All weights were zero and the result fell back to the plain mean.
    bool degraded = false;
    // max_conf saw multiple equally confident models and picked the
    // lexicographically lowest id.
    bool tie = false;
};

AggregateResult dapa(std::span<const Prediction> predictions);
AggregateResult bmacc(std::span<const Prediction> predictions,
                      std::span<const BaseModelDescriptor> descriptors);
AggregateResult max_conf(std::span<const Prediction> predictions);
AggregateResult av(std::span<const Prediction> predictions);

AggregateResult aggregate(Strategy strategy, std::span<const Prediction> predictions,
                          std::span<const BaseModelDescriptor> descriptors);

}  // namespace mapx
