#pragma once

// End-to-end scoring: enrich each document at its observation time, predict
// with every model, aggregate, optionally explain. score_documents runs the
// per-document work in parallel when OpenMP is enabled; score_documents_serial
// is the plain-loop reference, and the two produce bitwise-identical results.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapx/aggregate.hpp"
#include "mapx/corpus.hpp"
#include "mapx/enrich.hpp"
#include "mapx/explain.hpp"
#include "mapx/models.hpp"

namespace mapx {

struct DocumentScore {
    std::string doc_id;
    Timestamp observe_at = 0;
    std::vector<Prediction> predictions;
    AggregateResult aggregate;
    std::optional<Explanation> explanation;
};

std::vector<BaseModelDescriptor> descriptors_of(std::span<const BaseModel* const> models);

DocumentScore score_document(const Corpus& corpus, const std::string& doc_id,
                             Timestamp observe_at, std::span<const BaseModel* const> models,
                             std::span<const BaseModelDescriptor> descriptors,
                             const EnrichContext& ctx, Strategy strategy, bool with_explanation);

// observe_at is per document, aligned with doc_ids.
std::vector<DocumentScore> score_documents(const Corpus& corpus,
                                           std::span<const std::string> doc_ids,
                                           std::span<const Timestamp> observe_at,
                                           std::span<const BaseModel* const> models,
                                           const EnrichContext& ctx, Strategy strategy,
                                           bool with_explanations);

std::vector<DocumentScore> score_documents_serial(const Corpus& corpus,
                                                  std::span<const std::string> doc_ids,
                                                  std::span<const Timestamp> observe_at,
                                                  std::span<const BaseModel* const> models,
                                                  const EnrichContext& ctx, Strategy strategy,
                                                  bool with_explanations);

}  // namespace mapx
