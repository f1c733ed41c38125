#pragma once

// On-disk model directory: one JSON state file per model plus an index.json
// carrying descriptors, the training-time publisher/user sets, and the
// reliability table the models were trained against.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mapx/enrich.hpp"
#include "mapx/models.hpp"
#include "mapx/reliability.hpp"

namespace mapx {

struct ModelBundle {
    std::vector<std::unique_ptr<BaseModel>> models;
    std::set<std::string> training_publisher_ids;
    std::set<std::string> training_user_ids;
    ReliabilityTable table;

    std::vector<const BaseModel*> model_ptrs() const;
    std::vector<BaseModelDescriptor> descriptors() const;
    // Context for enriching documents consistently with training. The bundle
    // must outlive the returned context (it points at the bundle's table).
    EnrichContext enrich_context() const;
};

void save_model_bundle(const ModelBundle& bundle, const std::string& dir);
ModelBundle load_model_bundle(const std::string& dir);

}  // namespace mapx
