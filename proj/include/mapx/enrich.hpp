#pragma once

// Enrichment: turn a document into per-information feature bundles, each
// carrying a reliability score derived from its reliability factors. Pure
// functions over an immutable corpus; safe to run across documents in
// parallel.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mapx/corpus.hpp"
#include "mapx/reliability.hpp"

namespace mapx {

enum class InformationKind { words, publisher_history, user_history };

inline constexpr InformationKind kAllInformationKinds[] = {
    InformationKind::words,
    InformationKind::publisher_history,
    InformationKind::user_history,
};

enum class Network { content, context };

const char* to_string(InformationKind kind);
InformationKind information_kind_from_string(const std::string& s);
const char* to_string(Network network);

// words and publisher_history are content features; user_history is context.
Network network_of(InformationKind kind);

// One measured reliability factor: numeric factors carry value, the
// categorical publisher_type carries category.
struct FactorReading {
    Factor factor;
    double value = 0.0;
    std::string category;
    double score = 0.0;
};

struct WordsPayload {
    std::map<std::string, int> token_counts;
    int word_count = 0;
};

struct PublisherHistoryPayload {
    std::string publisher_id;
    // (doc_id, label when visible) for every other document of the publisher.
    std::vector<std::pair<std::string, std::optional<Label>>> docs;
};

struct UserHistoryPayload {
    // Engaging user -> number of items visible at observe_at.
    std::map<std::string, int> items_per_user;
    int item_count = 0;
};

struct Information {
    InformationKind kind = InformationKind::words;
    std::variant<WordsPayload, PublisherHistoryPayload, UserHistoryPayload> payload;
    std::vector<FactorReading> factors;
    double reliability = 0.0;  // arithmetic mean of factor scores
};

struct EnrichedDocument {
    std::string doc_id;
    Timestamp observe_at = 0;
    std::vector<Information> informations;  // exactly one per kind, enum order

    const Information& information(InformationKind kind) const;
};

// Cross-document enrichment context. training_* sets define "existing"
// entities; visible_label_docs restricts which labels may appear in history
// payloads (absent means every label in the corpus is visible).
struct EnrichContext {
    std::set<std::string> training_publisher_ids;
    std::set<std::string> training_user_ids;
    std::optional<std::set<std::string>> visible_label_docs;
    const ReliabilityTable* table = nullptr;  // compiled defaults when null
};

// Lowercased tokens split on maximal runs of non-alphanumeric bytes
// (bytes >= 0x80 count as word bytes so UTF-8 text stays intact).
std::vector<std::string> tokenize(const std::string& text);

EnrichedDocument enrich(const Corpus& corpus, const std::string& doc_id, Timestamp observe_at,
                        const EnrichContext& ctx);

std::vector<EnrichedDocument> enrich_batch(const Corpus& corpus,
                                           std::span<const std::string> doc_ids,
                                           Timestamp observe_at, const EnrichContext& ctx);

}  // namespace mapx
