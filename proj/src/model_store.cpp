#include "mapx/model_store.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "mapx/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace mapx {

namespace {

constexpr int kFormatVersion = 1;

ordered_json reliability_to_json(const ReliabilityTable& table) {
    ordered_json out;
    for (Factor factor : kAllFactors) {
        if (factor == Factor::publisher_type) {
            out["publisher_type"] = {
                {"new", table.lookup(PublisherType::new_publisher)},
                {"existing", table.lookup(PublisherType::existing)},
            };
            continue;
        }
        const PiecewiseBins& bins = table.bins(factor);
        out[to_string(factor)] = {{"edges", bins.edges}, {"scores", bins.scores}};
    }
    return out;
}

}  // namespace

std::vector<const BaseModel*> ModelBundle::model_ptrs() const {
    std::vector<const BaseModel*> ptrs;
    ptrs.reserve(models.size());
    for (const auto& model : models) ptrs.push_back(model.get());
    return ptrs;
}

std::vector<BaseModelDescriptor> ModelBundle::descriptors() const {
    std::vector<BaseModelDescriptor> out;
    out.reserve(models.size());
    for (const auto& model : models) out.push_back(model->descriptor());
    return out;
}

EnrichContext ModelBundle::enrich_context() const {
    EnrichContext ctx;
    ctx.training_publisher_ids = training_publisher_ids;
    ctx.training_user_ids = training_user_ids;
    ctx.table = &table;
    return ctx;
}

void save_model_bundle(const ModelBundle& bundle, const std::string& dir) {
    if (bundle.models.empty()) throw ModelError("refusing to save an empty model bundle");
    fs::create_directories(dir);

    ordered_json index;
    index["format_version"] = kFormatVersion;
    index["models"] = ordered_json::array();
    for (const auto& model : bundle.models) {
        if (!model->trained()) {
            throw ModelError(std::string(model->model_id()) + ": model is not trained");
        }
        std::string file = std::string(model->model_id()) + ".json";
        ordered_json consumes = ordered_json::array();
        for (InformationKind kind : model->consumes()) consumes.push_back(to_string(kind));
        index["models"].push_back({{"model_id", model->model_id()},
                                   {"file", file},
                                   {"consumes", consumes},
                                   {"network", to_string(model->network())},
                                   {"validation_score", model->validation_score()}});

        std::ofstream out(fs::path(dir) / file);
        out << model->state_to_json().dump(2) << "\n";
    }
    index["training"] = {
        {"publisher_ids", bundle.training_publisher_ids},
        {"user_ids", bundle.training_user_ids},
    };
    index["reliability"] = reliability_to_json(bundle.table);

    std::ofstream out(fs::path(dir) / "index.json");
    out << index.dump(2) << "\n";
}

ModelBundle load_model_bundle(const std::string& dir) {
    fs::path index_path = fs::path(dir) / "index.json";
    std::ifstream in(index_path);
    if (!in) throw ModelError("cannot open '" + index_path.string() + "'");
    json index = json::parse(in, nullptr, false);
    if (index.is_discarded()) throw ParseError(index_path.string() + ": invalid JSON");

    int version = index.value("format_version", -1);
    if (version != kFormatVersion) {
        throw ModelError(index_path.string() + ": unsupported format version " +
                         std::to_string(version));
    }

    ModelBundle bundle;
    for (const json& entry : index.at("models")) {
        std::string model_id = entry.at("model_id").get<std::string>();
        std::unique_ptr<BaseModel> model = make_model(model_id);

        fs::path state_path = fs::path(dir) / entry.at("file").get<std::string>();
        std::ifstream state_in(state_path);
        if (!state_in) throw ModelError("cannot open '" + state_path.string() + "'");
        json state = json::parse(state_in, nullptr, false);
        if (state.is_discarded()) throw ParseError(state_path.string() + ": invalid JSON");
        if (state.value("model_id", "") != model_id) {
            throw ModelError(state_path.string() + ": state belongs to '" +
                             state.value("model_id", "?") + "', expected '" + model_id + "'");
        }
        model->state_from_json(state);
        model->set_validation_score(entry.at("validation_score").get<double>());
        bundle.models.push_back(std::move(model));
    }

    const json& training = index.at("training");
    for (const json& id : training.at("publisher_ids")) {
        bundle.training_publisher_ids.insert(id.get<std::string>());
    }
    for (const json& id : training.at("user_ids")) {
        bundle.training_user_ids.insert(id.get<std::string>());
    }
    bundle.table = ReliabilityTable::from_json_text(index.at("reliability").dump(),
                                                    index_path.string());
    return bundle;
}

}  // namespace mapx
