#pragma once

// In-memory content network (publishers -> documents) and context network
// (users, items, typed engagements) with time-filtered views. A Corpus is
// immutable after construction and safe for concurrent reads.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mapx/error.hpp"

namespace mapx {

using Timestamp = std::int64_t;  // seconds since epoch

inline constexpr Timestamp kTimestampMax = std::numeric_limits<Timestamp>::max();
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;

enum class Label : int { true_news = 0, false_news = 1 };

enum class ItemKind { post, share, like, comment };

const char* to_string(ItemKind kind);
ItemKind item_kind_from_string(const std::string& s);

struct Document {
    std::string doc_id;
    std::string publisher_id;
    std::string text;
    Timestamp publish_time = 0;
    std::optional<Label> label;
};

struct Item {
    std::string item_id;
    std::string doc_id;
    std::string user_id;
    Timestamp timestamp = 0;
    ItemKind kind = ItemKind::post;
    std::optional<std::string> parent_item_id;
    std::optional<std::string> text;
};

// Derived from document foreign keys; document_ids sorted by id.
struct Publisher {
    std::string publisher_id;
    std::vector<std::string> document_ids;
};

// Derived from item foreign keys; item_ids sorted by id.
struct User {
    std::string user_id;
    std::vector<std::string> item_ids;
};

class Corpus {
public:
    Corpus() = default;

    // Validates identifiers and referential integrity; synthesizes publishers
    // and users from foreign keys. Input order does not matter: collections
    // are canonically sorted by identifier.
    static Corpus build(std::vector<Document> documents, std::vector<Item> items);

    const std::vector<Document>& documents() const { return documents_; }
    const std::vector<Item>& items() const { return items_; }
    const std::vector<Publisher>& publishers() const { return publishers_; }
    const std::vector<User>& users() const { return users_; }

    bool has_document(const std::string& doc_id) const;
    const Document& document(const std::string& doc_id) const;
    const Publisher& publisher(const std::string& publisher_id) const;
    const User& user(const std::string& user_id) const;
    const Item& item(const std::string& item_id) const;

    // Items of the document with timestamp <= observe_at, ordered by
    // (timestamp, item_id). Monotone in observe_at.
    std::vector<const Item*> items_for_document(const std::string& doc_id,
                                                Timestamp observe_at) const;

    // All documents of the publisher except exclude_doc, ordered by doc_id.
    std::vector<const Document*> publisher_history(const std::string& publisher_id,
                                                   const std::string& exclude_doc) const;

    // Latest event in the corpus (item timestamps and publish times); used as
    // the default observation horizon. Returns 0 for an empty corpus.
    Timestamp latest_timestamp() const { return latest_timestamp_; }

private:
    std::vector<Document> documents_;
    std::vector<Item> items_;
    std::vector<Publisher> publishers_;
    std::vector<User> users_;
    std::unordered_map<std::string, std::size_t> doc_index_;
    std::unordered_map<std::string, std::size_t> item_index_;
    std::unordered_map<std::string, std::size_t> publisher_index_;
    std::unordered_map<std::string, std::size_t> user_index_;
    // Per document, item indices ordered by (timestamp, item_id).
    std::vector<std::vector<std::size_t>> doc_item_indices_;
    Timestamp latest_timestamp_ = 0;
};

// Operation-style alias for Corpus::build.
Corpus build_corpus(std::vector<Document> documents, std::vector<Item> items);

}  // namespace mapx
