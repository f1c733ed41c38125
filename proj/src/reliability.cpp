#include "mapx/reliability.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mapx {

const char* to_string(Factor f) {
    switch (f) {
        case Factor::word_count: return "word_count";
        case Factor::publisher_type: return "publisher_type";
        case Factor::document_count: return "document_count";
        case Factor::item_count: return "item_count";
        case Factor::item_per_user: return "item_per_user";
        case Factor::document_age: return "document_age";
    }
    return "word_count";
}

Factor factor_from_string(const std::string& s) {
    for (Factor f : kAllFactors)
        if (s == to_string(f)) return f;
    throw ConfigError("unknown reliability factor '" + s + "'");
}

const char* to_string(PublisherType t) {
    return t == PublisherType::new_publisher ? "new" : "existing";
}

double PiecewiseBins::score(double value) const {
    std::size_t i = 0;
    while (i < edges.size() && value >= edges[i]) ++i;
    return scores[i];
}

void PiecewiseBins::validate(const std::string& factor_name) const {
    if (scores.size() != edges.size() + 1)
        throw ConfigError(factor_name + ": need exactly edges+1 scores");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] <= edges[i - 1])
            throw ConfigError(factor_name + ": bin edges must be strictly ascending");
    for (double s : scores)
        if (s < 0.0 || s > 1.0)
            throw ConfigError(factor_name + ": scores must lie in [0,1]");
}

ReliabilityTable::ReliabilityTable() {
    // Integer count bins use the published integer ranges directly; the
    // fractional factors close the published gaps with half-open intervals
    // at the midpoint of each gap.
    word_count_ = {{26, 101, 301, 601}, {0.0, 0.4, 0.6, 0.8, 0.6}};
    document_count_ = {{2, 11, 51}, {0.1, 0.4, 0.5, 1.0}};
    item_count_ = {{2, 11, 51}, {0.1, 0.4, 0.5, 1.0}};
    item_per_user_ = {{2, 4, 9}, {0.1, 0.2, 0.5, 1.0}};
    document_age_ = {{0.085, 1.5, 7.5}, {0.01, 0.1, 0.4, 1.0}};
}

namespace {

PiecewiseBins bins_from_json(const nlohmann::json& j, const std::string& name) {
    PiecewiseBins bins;
    bins.edges = j.at("edges").get<std::vector<double>>();
    bins.scores = j.at("scores").get<std::vector<double>>();
    bins.validate(name);
    return bins;
}

}  // namespace

ReliabilityTable ReliabilityTable::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open reliability table '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str(), path);
}

ReliabilityTable ReliabilityTable::from_json_text(const std::string& text,
                                                  const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": reliability table must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "publisher_type" && key != "word_count" && key != "document_count" &&
            key != "item_count" && key != "item_per_user" && key != "document_age") {
            throw ConfigError(origin + ": unknown reliability factor '" + key + "'");
        }
    }
    ReliabilityTable table;
    try {
        if (j.contains("word_count")) table.word_count_ = bins_from_json(j["word_count"], "word_count");
        if (j.contains("document_count"))
            table.document_count_ = bins_from_json(j["document_count"], "document_count");
        if (j.contains("item_count")) table.item_count_ = bins_from_json(j["item_count"], "item_count");
        if (j.contains("item_per_user"))
            table.item_per_user_ = bins_from_json(j["item_per_user"], "item_per_user");
        if (j.contains("document_age"))
            table.document_age_ = bins_from_json(j["document_age"], "document_age");
        if (j.contains("publisher_type")) {
            const auto& pt = j["publisher_type"];
            table.new_publisher_ = pt.at("new").get<double>();
            table.existing_publisher_ = pt.at("existing").get<double>();
            if (table.new_publisher_ < 0 || table.new_publisher_ > 1 ||
                table.existing_publisher_ < 0 || table.existing_publisher_ > 1)
                throw ConfigError("publisher_type: scores must lie in [0,1]");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    return table;
}

const PiecewiseBins& ReliabilityTable::bins(Factor factor) const {
    switch (factor) {
        case Factor::word_count: return word_count_;
        case Factor::document_count: return document_count_;
        case Factor::item_count: return item_count_;
        case Factor::item_per_user: return item_per_user_;
        case Factor::document_age: return document_age_;
        case Factor::publisher_type: break;
    }
    throw ConfigError("publisher_type has no numeric bins");
}

double ReliabilityTable::lookup(Factor factor, double value) const {
    if (factor == Factor::publisher_type)
        throw ConfigError("publisher_type takes a categorical value");
    if (value < 0.0)
        throw ConfigError(std::string(to_string(factor)) + ": negative value " +
                          std::to_string(value));
    return bins(factor).score(value);
}

double ReliabilityTable::lookup(PublisherType type) const {
    return type == PublisherType::new_publisher ? new_publisher_ : existing_publisher_;
}

const ReliabilityTable& default_reliability_table() {
    static const ReliabilityTable defaults;
    return defaults;
}

double reliability_lookup(Factor factor, double value) {
    return default_reliability_table().lookup(factor, value);
}

double reliability_lookup(PublisherType type) {
    return default_reliability_table().lookup(type);
}

}  // namespace mapx
