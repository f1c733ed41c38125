#pragma once

// Hierarchical four-tier explanation of an aggregated prediction: the most
// reliable model and its contribution share, the network and information that
// made it reliable, and the raw factor readings behind that information.

#include <span>
#include <string>
#include <vector>

#include "mapx/aggregate.hpp"
#include "mapx/enrich.hpp"
#include "mapx/models.hpp"

namespace mapx {

struct Explanation {
    std::string doc_id;
    Timestamp observe_at = 0;

    std::string tier1_model_id;
    double tier1_share = 0.0;

    Network tier2_network = Network::content;
    double tier2_avg_reliability = 0.0;

    InformationKind tier3_information = InformationKind::words;
    double tier3_reliability = 0.0;

    std::vector<FactorReading> tier4_factors;

    // Some argmax above was decided by the lexicographic tie-break.
    bool tie = false;
};

// aggregate must come from the same predictions (its per-model shares are
// reported in tier 1). Descriptors supply each model's consumed informations.
Explanation explain(std::span<const Prediction> predictions, const EnrichedDocument& doc,
                    const AggregateResult& aggregate,
                    std::span<const BaseModelDescriptor> descriptors);

nlohmann::ordered_json to_json(const Explanation& explanation);

std::string render_json(const Explanation& explanation);
std::string render_text(const Explanation& explanation);

}  // namespace mapx
