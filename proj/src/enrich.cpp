#include "mapx/enrich.hpp"

#include <algorithm>
#include <cctype>

#include "mapx/error.hpp"

namespace mapx {

const char* to_string(InformationKind kind) {
    switch (kind) {
        case InformationKind::words: return "words";
        case InformationKind::publisher_history: return "publisher_history";
        case InformationKind::user_history: return "user_history";
    }
    throw Error("unknown information kind");
}

InformationKind information_kind_from_string(const std::string& s) {
    for (InformationKind kind : kAllInformationKinds) {
        if (s == to_string(kind)) return kind;
    }
    throw ParseError("unknown information kind '" + s + "'");
}

const char* to_string(Network network) {
    return network == Network::content ? "content" : "context";
}

Network network_of(InformationKind kind) {
    return kind == InformationKind::user_history ? Network::context : Network::content;
}

const Information& EnrichedDocument::information(InformationKind kind) const {
    for (const Information& info : informations) {
        if (info.kind == kind) return info;
    }
    throw Error("document '" + doc_id + "' has no '" + to_string(kind) + "' information");
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        bool word_byte = c >= 0x80 || std::isalnum(c);
        if (word_byte) {
            current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                                       : static_cast<char>(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

namespace {

double mean_score(const std::vector<FactorReading>& factors) {
    double total = 0.0;
    for (const FactorReading& reading : factors) total += reading.score;
    return factors.empty() ? 0.0 : total / static_cast<double>(factors.size());
}

Information make_words(const Document& doc, const ReliabilityTable& table) {
    WordsPayload payload;
    for (std::string& token : tokenize(doc.text)) ++payload.token_counts[std::move(token)];
    payload.word_count = 0;
    for (const auto& [token, count] : payload.token_counts) payload.word_count += count;

    Information info;
    info.kind = InformationKind::words;
    double count = static_cast<double>(payload.word_count);
    info.factors.push_back({Factor::word_count, count, "",
                            table.lookup(Factor::word_count, count)});
    info.payload = std::move(payload);
    info.reliability = mean_score(info.factors);
    return info;
}

Information make_publisher_history(const Corpus& corpus, const Document& doc,
                                   const EnrichContext& ctx, const ReliabilityTable& table) {
    PublisherHistoryPayload payload;
    payload.publisher_id = doc.publisher_id;
    for (const Document* other : corpus.publisher_history(doc.publisher_id, doc.doc_id)) {
        std::optional<Label> label = other->label;
        if (ctx.visible_label_docs && !ctx.visible_label_docs->count(other->doc_id)) label.reset();
        payload.docs.emplace_back(other->doc_id, label);
    }

    Information info;
    info.kind = InformationKind::publisher_history;
    bool existing = ctx.training_publisher_ids.count(doc.publisher_id) > 0;
    PublisherType type = existing ? PublisherType::existing : PublisherType::new_publisher;
    info.factors.push_back({Factor::publisher_type, 0.0, to_string(type), table.lookup(type)});
    double doc_count = static_cast<double>(payload.docs.size());
    info.factors.push_back({Factor::document_count, doc_count, "",
                            table.lookup(Factor::document_count, doc_count)});
    info.payload = std::move(payload);
    info.reliability = mean_score(info.factors);
    return info;
}

Information make_user_history(const Corpus& corpus, const Document& doc, Timestamp observe_at,
                              const ReliabilityTable& table) {
    UserHistoryPayload payload;
    for (const Item* item : corpus.items_for_document(doc.doc_id, observe_at)) {
        ++payload.items_per_user[item->user_id];
        ++payload.item_count;
    }

    Information info;
    info.kind = InformationKind::user_history;
    double count = static_cast<double>(payload.item_count);
    double users = static_cast<double>(payload.items_per_user.size());
    double per_user = users > 0.0 ? count / users : 0.0;
    double age_days = static_cast<double>(observe_at - doc.publish_time) / kSecondsPerDay;
    info.factors.push_back({Factor::item_count, count, "",
                            table.lookup(Factor::item_count, count)});
    info.factors.push_back({Factor::item_per_user, per_user, "",
                            table.lookup(Factor::item_per_user, per_user)});
    info.factors.push_back({Factor::document_age, age_days, "",
                            table.lookup(Factor::document_age, age_days)});
    info.payload = std::move(payload);
    info.reliability = mean_score(info.factors);
    return info;
}

}  // namespace

EnrichedDocument enrich(const Corpus& corpus, const std::string& doc_id, Timestamp observe_at,
                        const EnrichContext& ctx) {
    const Document& doc = corpus.document(doc_id);
    if (observe_at < doc.publish_time) {
        throw Error("observe time precedes publish time of document '" + doc_id + "'");
    }
    const ReliabilityTable& table = ctx.table ? *ctx.table : default_reliability_table();

    EnrichedDocument enriched;
    enriched.doc_id = doc_id;
    enriched.observe_at = observe_at;
    enriched.informations.push_back(make_words(doc, table));
    enriched.informations.push_back(make_publisher_history(corpus, doc, ctx, table));
    enriched.informations.push_back(make_user_history(corpus, doc, observe_at, table));
    return enriched;
}

std::vector<EnrichedDocument> enrich_batch(const Corpus& corpus,
                                           std::span<const std::string> doc_ids,
                                           Timestamp observe_at, const EnrichContext& ctx) {
    std::vector<EnrichedDocument> out;
    out.reserve(doc_ids.size());
    for (const std::string& doc_id : doc_ids) {
        out.push_back(enrich(corpus, doc_id, observe_at, ctx));
    }
    return out;
}

}  // namespace mapx
