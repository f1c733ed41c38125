#include "mapx/aggregate.hpp"

#include <cmath>

#include "mapx/error.hpp"

namespace mapx {

const char* to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::dapa: return "dapa";
        case Strategy::bmacc: return "bmacc";
        case Strategy::max_conf: return "max";
        case Strategy::av: return "av";
    }
    throw Error("unknown aggregation strategy");
}

Strategy strategy_from_string(const std::string& s) {
    for (Strategy strategy : kAllStrategies) {
        if (s == to_string(strategy)) return strategy;
    }
    throw ParseError("unknown aggregation strategy '" + s + "'");
}

namespace {

void check_predictions(std::span<const Prediction> predictions) {
    if (predictions.empty()) throw Error("nothing to aggregate: no predictions");
    for (const Prediction& pred : predictions) {
        if (!(pred.prob_false >= 0.0 && pred.prob_false <= 1.0)) {
            throw Error("prediction of '" + pred.model_id + "' outside [0, 1]");
        }
        if (!(pred.model_reliability >= 0.0)) {
            throw Error("negative reliability for '" + pred.model_id + "'");
        }
    }
}

// Weighted mean with the zero-total fallback to the plain mean. Weights are
// reported as given; shares only when the total is positive.
AggregateResult weighted_mean(Strategy strategy, std::span<const Prediction> predictions,
                              std::span<const double> weights) {
    AggregateResult result;
    result.strategy = strategy;
    result.per_model.reserve(predictions.size());

    double total_weight = 0.0;
    for (double w : weights) total_weight += w;

    double accum = 0.0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        ModelContribution contrib;
        contrib.model_id = predictions[i].model_id;
        contrib.prob_false = predictions[i].prob_false;
        contrib.weight = weights[i];
        contrib.share = total_weight > 0.0 ? weights[i] / total_weight : 0.0;
        result.per_model.push_back(std::move(contrib));

        accum += total_weight > 0.0 ? weights[i] * predictions[i].prob_false
                                    : predictions[i].prob_false;
    }
    if (total_weight > 0.0) {
        result.prob_false = accum / total_weight;
    } else {
        result.prob_false = accum / static_cast<double>(predictions.size());
        result.degraded = true;
    }
    return result;
}

}  // namespace

AggregateResult dapa(std::span<const Prediction> predictions) {
    check_predictions(predictions);
    std::vector<double> weights;
    weights.reserve(predictions.size());
    for (const Prediction& pred : predictions) weights.push_back(pred.model_reliability);
    return weighted_mean(Strategy::dapa, predictions, weights);
}

AggregateResult bmacc(std::span<const Prediction> predictions,
                      std::span<const BaseModelDescriptor> descriptors) {
    check_predictions(predictions);
    std::vector<double> weights;
    weights.reserve(predictions.size());
    for (const Prediction& pred : predictions) {
        const BaseModelDescriptor* found = nullptr;
        for (const BaseModelDescriptor& desc : descriptors) {
            if (desc.model_id == pred.model_id) {
                found = &desc;
                break;
            }
        }
        if (!found) throw Error("no descriptor for model '" + pred.model_id + "'");
        weights.push_back(found->validation_score);
    }
    return weighted_mean(Strategy::bmacc, predictions, weights);
}

AggregateResult max_conf(std::span<const Prediction> predictions) {
    check_predictions(predictions);

    size_t best = 0;
    bool tie = false;
    double best_dist = std::abs(predictions[0].prob_false - 0.5);
    for (size_t i = 1; i < predictions.size(); ++i) {
        double dist = std::abs(predictions[i].prob_false - 0.5);
        if (dist > best_dist) {
            best = i;
            best_dist = dist;
            tie = false;
        } else if (dist == best_dist) {
            tie = true;
            if (predictions[i].model_id < predictions[best].model_id) best = i;
        }
    }

    AggregateResult result;
    result.strategy = Strategy::max_conf;
    result.prob_false = predictions[best].prob_false;
    result.tie = tie;
    for (size_t i = 0; i < predictions.size(); ++i) {
        result.per_model.push_back({predictions[i].model_id, predictions[i].prob_false,
                                    i == best ? 1.0 : 0.0, i == best ? 1.0 : 0.0});
    }
    return result;
}

AggregateResult av(std::span<const Prediction> predictions) {
    check_predictions(predictions);
    std::vector<double> weights(predictions.size(), 1.0);
    return weighted_mean(Strategy::av, predictions, weights);
}

AggregateResult aggregate(Strategy strategy, std::span<const Prediction> predictions,
                          std::span<const BaseModelDescriptor> descriptors) {
    switch (strategy) {
        case Strategy::dapa: return dapa(predictions);
        case Strategy::bmacc: return bmacc(predictions, descriptors);
        case Strategy::max_conf: return max_conf(predictions);
        case Strategy::av: return av(predictions);
    }
    throw Error("unknown aggregation strategy");
}

}  // namespace mapx
