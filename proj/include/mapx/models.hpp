#pragma once

// Pluggable base models. Each model consumes one or more informations from an
// enriched document and emits a probability that the document is false news.
// Three reference models ship in-repo: a multinomial naive Bayes over the
// document words, and smoothed credibility scores for publishers and users.

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mapx/corpus.hpp"
#include "mapx/enrich.hpp"

namespace mapx {

// Laplace-style smoothing for the credibility models: score = (hits + beta *
// prior) / (n + beta), which pins unseen entities at the training prior.
inline constexpr double kSmoothingBeta = 2.0;

enum class ModelNetwork { content, context, hybrid };

const char* to_string(ModelNetwork network);

struct BaseModelDescriptor {
    std::string model_id;
    std::vector<InformationKind> consumes;
    ModelNetwork network = ModelNetwork::content;
    double validation_score = 1.0;
};

struct Prediction {
    std::string model_id;
    double prob_false = 0.0;
    // Mean reliability of the informations this model consumed, at the
    // document's observation time.
    double model_reliability = 0.0;
};

class BaseModel {
public:
    virtual ~BaseModel() = default;

    virtual const char* model_id() const = 0;
    virtual const std::vector<InformationKind>& consumes() const = 0;

    void train(std::span<const EnrichedDocument> docs, std::span<const Label> labels);
    Prediction predict(const EnrichedDocument& doc) const;

    bool trained() const { return trained_; }

    // Held-out performance, filled in by the evaluation harness after
    // training; weighs this model under the bmacc aggregator. Defaults to 1.
    double validation_score() const { return validation_score_; }
    void set_validation_score(double score);

    ModelNetwork network() const;
    BaseModelDescriptor descriptor() const;

    virtual nlohmann::ordered_json state_to_json() const = 0;
    virtual void state_from_json(const nlohmann::json& state) = 0;

protected:
    virtual void fit(std::span<const EnrichedDocument> docs, std::span<const Label> labels) = 0;
    virtual double score(const EnrichedDocument& doc) const = 0;

    bool trained_ = false;
    double validation_score_ = 1.0;
};

// Multinomial naive Bayes with add-one smoothing over the word multiset;
// tokens unseen in training are skipped. Needs both classes in training.
class ContentWordsModel : public BaseModel {
public:
    const char* model_id() const override { return "content_words"; }
    const std::vector<InformationKind>& consumes() const override;

    nlohmann::ordered_json state_to_json() const override;
    void state_from_json(const nlohmann::json& state) override;

protected:
    void fit(std::span<const EnrichedDocument> docs, std::span<const Label> labels) override;
    double score(const EnrichedDocument& doc) const override;

private:
    // Index 0 = true news, 1 = false news (matches the Label enum values).
    std::array<long long, 2> class_docs_{0, 0};
    std::array<long long, 2> token_totals_{0, 0};
    std::array<std::map<std::string, long long>, 2> token_counts_;
    long long vocab_size_ = 0;
};

// Smoothed false fraction of the publisher's training documents; publishers
// unseen in training score the global prior.
class PublisherCredibilityModel : public BaseModel {
public:
    const char* model_id() const override { return "publisher_credibility"; }
    const std::vector<InformationKind>& consumes() const override;

    nlohmann::ordered_json state_to_json() const override;
    void state_from_json(const nlohmann::json& state) override;

protected:
    void fit(std::span<const EnrichedDocument> docs, std::span<const Label> labels) override;
    double score(const EnrichedDocument& doc) const override;

private:
    struct PublisherStats {
        long long docs = 0;
        long long false_docs = 0;
    };
    std::map<std::string, PublisherStats> publishers_;
    double prior_ = 0.5;
};

// Per-user smoothed false fraction of training engagements; a document scores
// the item-count-weighted mean over its engaging users visible at the
// observation time, or the prior when nobody has engaged yet.
class UserCredibilityModel : public BaseModel {
public:
    const char* model_id() const override { return "user_credibility"; }
    const std::vector<InformationKind>& consumes() const override;

    nlohmann::ordered_json state_to_json() const override;
    void state_from_json(const nlohmann::json& state) override;

protected:
    void fit(std::span<const EnrichedDocument> docs, std::span<const Label> labels) override;
    double score(const EnrichedDocument& doc) const override;

private:
    struct UserStats {
        long long items = 0;
        long long false_items = 0;
    };
    std::map<std::string, UserStats> users_;
    double prior_ = 0.5;
};

const std::vector<std::string>& registered_model_ids();
std::unique_ptr<BaseModel> make_model(const std::string& model_id);

}  // namespace mapx
