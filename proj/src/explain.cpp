#include "mapx/explain.hpp"

#include <cmath>
#include <map>

#include "json.hpp"
#include "mapx/error.hpp"

namespace mapx {

Explanation explain(std::span<const Prediction> predictions, const EnrichedDocument& doc,
                    const AggregateResult& aggregate,
                    std::span<const BaseModelDescriptor> descriptors) {
    if (predictions.empty()) throw Error("nothing to explain: no predictions");

    Explanation expl;
    expl.doc_id = doc.doc_id;
    expl.observe_at = doc.observe_at;

    // Tier 1: the model whose inputs were most reliable for this document.
    const Prediction* top = &predictions[0];
    for (const Prediction& pred : predictions.subspan(1)) {
        if (pred.model_reliability > top->model_reliability) {
            top = &pred;
        } else if (pred.model_reliability == top->model_reliability) {
            expl.tie = true;
            if (pred.model_id < top->model_id) top = &pred;
        }
    }
    expl.tier1_model_id = top->model_id;

    const ModelContribution* contrib = nullptr;
    for (const ModelContribution& c : aggregate.per_model) {
        if (c.model_id == top->model_id) {
            contrib = &c;
            break;
        }
    }
    if (!contrib) throw Error("aggregate result carries no entry for '" + top->model_id + "'");
    expl.tier1_share = contrib->share;

    const BaseModelDescriptor* desc = nullptr;
    for (const BaseModelDescriptor& d : descriptors) {
        if (d.model_id == top->model_id) {
            desc = &d;
            break;
        }
    }
    if (!desc) throw Error("no descriptor for model '" + top->model_id + "'");

    // Tier 2: among the informations the tier-1 model consumed, the network
    // with the highest mean reliability.
    std::map<Network, std::pair<double, int>> by_network;  // sum, count
    for (InformationKind kind : desc->consumes) {
        const Information& info = doc.information(kind);
        auto& [sum, count] = by_network[network_of(kind)];
        sum += info.reliability;
        ++count;
    }
    bool first = true;
    for (const auto& [network, sum_count] : by_network) {  // map order: content < context
        double mean = sum_count.first / sum_count.second;
        if (first || mean > expl.tier2_avg_reliability) {
            expl.tier2_network = network;
            expl.tier2_avg_reliability = mean;
            first = false;
        } else if (mean == expl.tier2_avg_reliability) {
            expl.tie = true;
        }
    }

    // Tier 3: the single most reliable consumed information; tier 4 is its
    // factor readings.
    const Information* top_info = nullptr;
    for (InformationKind kind : desc->consumes) {
        const Information& info = doc.information(kind);
        if (!top_info || info.reliability > top_info->reliability) {
            top_info = &info;
        } else if (info.reliability == top_info->reliability) {
            expl.tie = true;
            if (std::string(to_string(info.kind)) < to_string(top_info->kind)) top_info = &info;
        }
    }
    expl.tier3_information = top_info->kind;
    expl.tier3_reliability = top_info->reliability;
    expl.tier4_factors = top_info->factors;

    return expl;
}

namespace {

nlohmann::ordered_json factor_to_json(const FactorReading& reading) {
    nlohmann::ordered_json out;
    out["factor"] = to_string(reading.factor);
    if (reading.factor == Factor::publisher_type) {
        out["category"] = reading.category;
    } else {
        out["value"] = reading.value;
    }
    out["score"] = reading.score;
    return out;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string format_factor_value(const FactorReading& reading) {
    if (reading.factor == Factor::publisher_type) return reading.category;
    double rounded = std::round(reading.value);
    if (std::abs(reading.value - rounded) < 1e-9) {
        return std::to_string(static_cast<long long>(rounded));
    }
    return format_fixed(reading.value, 2);
}

}  // namespace

nlohmann::ordered_json to_json(const Explanation& explanation) {
    nlohmann::ordered_json out;
    out["doc_id"] = explanation.doc_id;
    out["observe_at"] = explanation.observe_at;
    out["tier1"] = {{"model_id", explanation.tier1_model_id},
                    {"share", explanation.tier1_share}};
    out["tier2"] = {{"network", to_string(explanation.tier2_network)},
                    {"avg_reliability", explanation.tier2_avg_reliability}};
    out["tier3"] = {{"information", to_string(explanation.tier3_information)},
                    {"reliability", explanation.tier3_reliability}};
    out["tier4"] = nlohmann::ordered_json::array();
    for (const FactorReading& reading : explanation.tier4_factors) {
        out["tier4"].push_back(factor_to_json(reading));
    }
    out["tie"] = explanation.tie;
    return out;
}

std::string render_json(const Explanation& explanation) {
    return to_json(explanation).dump(2);
}

std::string render_text(const Explanation& explanation) {
    std::string out;
    out += "T1 model: " + explanation.tier1_model_id + " contributed " +
           format_fixed(explanation.tier1_share * 100.0, 0) +
           "% of the aggregated prediction\n";
    out += "T2 network: " + std::string(to_string(explanation.tier2_network)) +
           ", average reliability " + format_fixed(explanation.tier2_avg_reliability, 2) + "\n";
    out += "T3 information: " + std::string(to_string(explanation.tier3_information)) +
           ", reliability " + format_fixed(explanation.tier3_reliability, 2) + "\n";
    out += "T4 factors:";
    for (const FactorReading& reading : explanation.tier4_factors) {
        out += " " + std::string(to_string(reading.factor)) + "=" +
               format_factor_value(reading) + " -> " + format_fixed(reading.score, 2);
    }
    out += "\n";
    return out;
}

}  // namespace mapx
