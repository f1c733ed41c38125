#include "mapx/pipeline.hpp"

#include <exception>

#include "mapx/error.hpp"

namespace mapx {

std::vector<BaseModelDescriptor> descriptors_of(std::span<const BaseModel* const> models) {
    std::vector<BaseModelDescriptor> descriptors;
    descriptors.reserve(models.size());
    for (const BaseModel* model : models) descriptors.push_back(model->descriptor());
    return descriptors;
}

DocumentScore score_document(const Corpus& corpus, const std::string& doc_id,
                             Timestamp observe_at, std::span<const BaseModel* const> models,
                             std::span<const BaseModelDescriptor> descriptors,
                             const EnrichContext& ctx, Strategy strategy, bool with_explanation) {
    if (models.empty()) throw ModelError("no models to score with");

    DocumentScore score;
    score.doc_id = doc_id;
    score.observe_at = observe_at;

    EnrichedDocument enriched = enrich(corpus, doc_id, observe_at, ctx);
    score.predictions.reserve(models.size());
    for (const BaseModel* model : models) score.predictions.push_back(model->predict(enriched));
    score.aggregate = aggregate(strategy, score.predictions, descriptors);
    if (with_explanation) {
        score.explanation = explain(score.predictions, enriched, score.aggregate, descriptors);
    }
    return score;
}

namespace {

std::vector<DocumentScore> score_all(const Corpus& corpus, std::span<const std::string> doc_ids,
                                     std::span<const Timestamp> observe_at,
                                     std::span<const BaseModel* const> models,
                                     const EnrichContext& ctx, Strategy strategy,
                                     bool with_explanations, bool parallel) {
    if (doc_ids.size() != observe_at.size()) {
        throw Error("doc_ids and observe_at lengths differ");
    }
    std::vector<BaseModelDescriptor> descriptors = descriptors_of(models);
    std::vector<DocumentScore> scores(doc_ids.size());

    std::exception_ptr failure;
    std::int64_t n = static_cast<std::int64_t>(doc_ids.size());
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            scores[i] = score_document(corpus, doc_ids[i], observe_at[i], models, descriptors,
                                       ctx, strategy, with_explanations);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return scores;
}

}  // namespace

std::vector<DocumentScore> score_documents(const Corpus& corpus,
                                           std::span<const std::string> doc_ids,
                                           std::span<const Timestamp> observe_at,
                                           std::span<const BaseModel* const> models,
                                           const EnrichContext& ctx, Strategy strategy,
                                           bool with_explanations) {
    return score_all(corpus, doc_ids, observe_at, models, ctx, strategy, with_explanations, true);
}

std::vector<DocumentScore> score_documents_serial(const Corpus& corpus,
                                                  std::span<const std::string> doc_ids,
                                                  std::span<const Timestamp> observe_at,
                                                  std::span<const BaseModel* const> models,
                                                  const EnrichContext& ctx, Strategy strategy,
                                                  bool with_explanations) {
    return score_all(corpus, doc_ids, observe_at, models, ctx, strategy, with_explanations,
                     false);
}

}  // namespace mapx
