#include "mapx/models.hpp"

#include <cmath>
#include <set>

#include "mapx/error.hpp"

namespace mapx {

const char* to_string(ModelNetwork network) {
    switch (network) {
        case ModelNetwork::content: return "content";
        case ModelNetwork::context: return "context";
        case ModelNetwork::hybrid: return "hybrid";
    }
    throw Error("unknown model network");
}

void BaseModel::train(std::span<const EnrichedDocument> docs, std::span<const Label> labels) {
    if (docs.empty()) throw ModelError(std::string(model_id()) + ": training set is empty");
    if (docs.size() != labels.size()) {
        throw ModelError(std::string(model_id()) + ": " + std::to_string(docs.size()) +
                         " documents vs " + std::to_string(labels.size()) + " labels");
    }
    fit(docs, labels);
    trained_ = true;
}

Prediction BaseModel::predict(const EnrichedDocument& doc) const {
    if (!trained_) throw ModelError(std::string(model_id()) + ": model is not trained");

    Prediction pred;
    pred.model_id = model_id();
    pred.prob_false = score(doc);

    double total = 0.0;
    for (InformationKind kind : consumes()) total += doc.information(kind).reliability;
    pred.model_reliability = total / static_cast<double>(consumes().size());
    return pred;
}

void BaseModel::set_validation_score(double score) {
    if (score < 0.0 || score > 1.0) {
        throw ModelError(std::string(model_id()) + ": validation score " +
                         std::to_string(score) + " outside [0, 1]");
    }
    validation_score_ = score;
}

ModelNetwork BaseModel::network() const {
    bool content = false;
    bool context = false;
    for (InformationKind kind : consumes()) {
        (network_of(kind) == Network::content ? content : context) = true;
    }
    if (content && context) return ModelNetwork::hybrid;
    return context ? ModelNetwork::context : ModelNetwork::content;
}

BaseModelDescriptor BaseModel::descriptor() const {
    return {model_id(), consumes(), network(), validation_score_};
}

// --- content_words ---------------------------------------------------------

const std::vector<InformationKind>& ContentWordsModel::consumes() const {
    static const std::vector<InformationKind> kinds = {InformationKind::words};
    return kinds;
}

void ContentWordsModel::fit(std::span<const EnrichedDocument> docs, std::span<const Label> labels) {
    class_docs_ = {0, 0};
    token_totals_ = {0, 0};
    token_counts_ = {};

    for (size_t i = 0; i < docs.size(); ++i) {
        int cls = static_cast<int>(labels[i]);
        ++class_docs_[cls];
        const auto& payload =
            std::get<WordsPayload>(docs[i].information(InformationKind::words).payload);
        for (const auto& [token, count] : payload.token_counts) {
            token_counts_[cls][token] += count;
            token_totals_[cls] += count;
        }
    }
    if (class_docs_[0] == 0 || class_docs_[1] == 0) {
        throw ModelError("content_words: training set has only one class");
    }

    std::set<std::string> vocab;
    for (const auto& counts : token_counts_) {
        for (const auto& [token, count] : counts) vocab.insert(token);
    }
    vocab_size_ = static_cast<long long>(vocab.size());
}

double ContentWordsModel::score(const EnrichedDocument& doc) const {
    const auto& payload = std::get<WordsPayload>(doc.information(InformationKind::words).payload);

    // log P(false|doc) - log P(true|doc); the shared evidence term cancels.
    double log_odds = std::log(static_cast<double>(class_docs_[1])) -
                      std::log(static_cast<double>(class_docs_[0]));
    for (const auto& [token, count] : payload.token_counts) {
        auto in_false = token_counts_[1].find(token);
        auto in_true = token_counts_[0].find(token);
        bool known = in_false != token_counts_[1].end() || in_true != token_counts_[0].end();
        if (!known) continue;

        long long false_count = in_false == token_counts_[1].end() ? 0 : in_false->second;
        long long true_count = in_true == token_counts_[0].end() ? 0 : in_true->second;
        double log_false = std::log((static_cast<double>(false_count) + 1.0) /
                                    static_cast<double>(token_totals_[1] + vocab_size_));
        double log_true = std::log((static_cast<double>(true_count) + 1.0) /
                                   static_cast<double>(token_totals_[0] + vocab_size_));
        log_odds += static_cast<double>(count) * (log_false - log_true);
    }
    return 1.0 / (1.0 + std::exp(-log_odds));
}

nlohmann::ordered_json ContentWordsModel::state_to_json() const {
    nlohmann::ordered_json tokens[2];
    for (int cls = 0; cls < 2; ++cls) {
        tokens[cls] = nlohmann::ordered_json::object();
        for (const auto& [token, count] : token_counts_[cls]) tokens[cls][token] = count;
    }
    return {{"model_id", model_id()},
            {"class_docs", {class_docs_[0], class_docs_[1]}},
            {"token_totals", {token_totals_[0], token_totals_[1]}},
            {"tokens_true_news", tokens[0]},
            {"tokens_false_news", tokens[1]}};
}

void ContentWordsModel::state_from_json(const nlohmann::json& state) {
    class_docs_ = {state.at("class_docs").at(0).get<long long>(),
                   state.at("class_docs").at(1).get<long long>()};
    token_totals_ = {state.at("token_totals").at(0).get<long long>(),
                     state.at("token_totals").at(1).get<long long>()};
    token_counts_ = {};
    const char* keys[2] = {"tokens_true_news", "tokens_false_news"};
    std::set<std::string> vocab;
    for (int cls = 0; cls < 2; ++cls) {
        for (const auto& [token, count] : state.at(keys[cls]).items()) {
            token_counts_[cls][token] = count.get<long long>();
            vocab.insert(token);
        }
    }
    vocab_size_ = static_cast<long long>(vocab.size());
    trained_ = true;
}

// --- publisher_credibility --------------------------------------------------

const std::vector<InformationKind>& PublisherCredibilityModel::consumes() const {
    static const std::vector<InformationKind> kinds = {InformationKind::publisher_history};
    return kinds;
}

void PublisherCredibilityModel::fit(std::span<const EnrichedDocument> docs,
                                    std::span<const Label> labels) {
    publishers_.clear();
    long long false_total = 0;
    for (size_t i = 0; i < docs.size(); ++i) {
        const auto& payload = std::get<PublisherHistoryPayload>(
            docs[i].information(InformationKind::publisher_history).payload);
        PublisherStats& stats = publishers_[payload.publisher_id];
        ++stats.docs;
        if (labels[i] == Label::false_news) {
            ++stats.false_docs;
            ++false_total;
        }
    }
    prior_ = static_cast<double>(false_total) / static_cast<double>(docs.size());
}

double PublisherCredibilityModel::score(const EnrichedDocument& doc) const {
    const auto& payload = std::get<PublisherHistoryPayload>(
        doc.information(InformationKind::publisher_history).payload);
    auto it = publishers_.find(payload.publisher_id);
    if (it == publishers_.end()) return prior_;
    const PublisherStats& stats = it->second;
    return (static_cast<double>(stats.false_docs) + kSmoothingBeta * prior_) /
           (static_cast<double>(stats.docs) + kSmoothingBeta);
}

nlohmann::ordered_json PublisherCredibilityModel::state_to_json() const {
    nlohmann::ordered_json publishers = nlohmann::ordered_json::object();
    for (const auto& [id, stats] : publishers_) {
        publishers[id] = {{"docs", stats.docs}, {"false_docs", stats.false_docs}};
    }
    return {{"model_id", model_id()}, {"prior", prior_}, {"publishers", publishers}};
}

void PublisherCredibilityModel::state_from_json(const nlohmann::json& state) {
    publishers_.clear();
    prior_ = state.at("prior").get<double>();
    for (const auto& [id, stats] : state.at("publishers").items()) {
        publishers_[id] = {stats.at("docs").get<long long>(),
                           stats.at("false_docs").get<long long>()};
    }
    trained_ = true;
}

// --- user_credibility -------------------------------------------------------

const std::vector<InformationKind>& UserCredibilityModel::consumes() const {
    static const std::vector<InformationKind> kinds = {InformationKind::user_history};
    return kinds;
}

void UserCredibilityModel::fit(std::span<const EnrichedDocument> docs,
                               std::span<const Label> labels) {
    users_.clear();
    long long false_total = 0;
    for (size_t i = 0; i < docs.size(); ++i) {
        const auto& payload = std::get<UserHistoryPayload>(
            docs[i].information(InformationKind::user_history).payload);
        for (const auto& [user_id, items] : payload.items_per_user) {
            UserStats& stats = users_[user_id];
            stats.items += items;
            if (labels[i] == Label::false_news) stats.false_items += items;
        }
        if (labels[i] == Label::false_news) ++false_total;
    }
    prior_ = static_cast<double>(false_total) / static_cast<double>(docs.size());
}

double UserCredibilityModel::score(const EnrichedDocument& doc) const {
    const auto& payload =
        std::get<UserHistoryPayload>(doc.information(InformationKind::user_history).payload);
    if (payload.items_per_user.empty()) return prior_;

    double weighted = 0.0;
    double weight_total = 0.0;
    for (const auto& [user_id, items] : payload.items_per_user) {
        auto it = users_.find(user_id);
        long long seen = it == users_.end() ? 0 : it->second.items;
        long long false_seen = it == users_.end() ? 0 : it->second.false_items;
        double user_score = (static_cast<double>(false_seen) + kSmoothingBeta * prior_) /
                            (static_cast<double>(seen) + kSmoothingBeta);
        weighted += static_cast<double>(items) * user_score;
        weight_total += static_cast<double>(items);
    }
    return weighted / weight_total;
}

nlohmann::ordered_json UserCredibilityModel::state_to_json() const {
    nlohmann::ordered_json users = nlohmann::ordered_json::object();
    for (const auto& [id, stats] : users_) {
        users[id] = {{"items", stats.items}, {"false_items", stats.false_items}};
    }
    return {{"model_id", model_id()}, {"prior", prior_}, {"users", users}};
}

void UserCredibilityModel::state_from_json(const nlohmann::json& state) {
    users_.clear();
    prior_ = state.at("prior").get<double>();
    for (const auto& [id, stats] : state.at("users").items()) {
        users_[id] = {stats.at("items").get<long long>(),
                      stats.at("false_items").get<long long>()};
    }
    trained_ = true;
}

// --- registry ---------------------------------------------------------------

const std::vector<std::string>& registered_model_ids() {
    static const std::vector<std::string> ids = {"content_words", "publisher_credibility",
                                                 "user_credibility"};
    return ids;
}

std::unique_ptr<BaseModel> make_model(const std::string& model_id) {
    if (model_id == "content_words") return std::make_unique<ContentWordsModel>();
    if (model_id == "publisher_credibility") return std::make_unique<PublisherCredibilityModel>();
    if (model_id == "user_credibility") return std::make_unique<UserCredibilityModel>();
    throw ModelError("unknown model id '" + model_id + "'");
}

}  // namespace mapx
