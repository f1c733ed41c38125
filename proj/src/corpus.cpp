#include "mapx/corpus.hpp"

#include <algorithm>

namespace mapx {

const char* to_string(ItemKind kind) {
    switch (kind) {
        case ItemKind::post: return "post";
        case ItemKind::share: return "share";
        case ItemKind::like: return "like";
        case ItemKind::comment: return "comment";
    }
    return "post";
}

ItemKind item_kind_from_string(const std::string& s) {
    if (s == "post") return ItemKind::post;
    if (s == "share") return ItemKind::share;
    if (s == "like") return ItemKind::like;
    if (s == "comment") return ItemKind::comment;
    throw CorpusError("unknown item kind '" + s + "'");
}

Corpus Corpus::build(std::vector<Document> documents, std::vector<Item> items) {
    Corpus corpus;

    std::sort(documents.begin(), documents.end(),
              [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.item_id < b.item_id; });
    corpus.documents_ = std::move(documents);
    corpus.items_ = std::move(items);

    for (std::size_t i = 0; i < corpus.documents_.size(); ++i) {
        const Document& doc = corpus.documents_[i];
        if (doc.doc_id.empty()) throw CorpusError("document with empty doc_id");
        if (doc.publisher_id.empty())
            throw CorpusError("document '" + doc.doc_id + "' has empty publisher_id");
        if (!corpus.doc_index_.emplace(doc.doc_id, i).second)
            throw CorpusError("duplicate document id '" + doc.doc_id + "'");
    }
    for (std::size_t i = 0; i < corpus.items_.size(); ++i) {
        const Item& item = corpus.items_[i];
        if (item.item_id.empty()) throw CorpusError("item with empty item_id");
        if (!corpus.item_index_.emplace(item.item_id, i).second)
            throw CorpusError("duplicate item id '" + item.item_id + "'");
    }

    // Synthesize publishers and users from foreign keys. Documents and items
    // are already id-sorted, so the derived back-reference lists are too.
    for (const Document& doc : corpus.documents_) {
        auto [it, inserted] = corpus.publisher_index_.emplace(doc.publisher_id, corpus.publishers_.size());
        if (inserted) corpus.publishers_.push_back(Publisher{doc.publisher_id, {}});
        corpus.publishers_[it->second].document_ids.push_back(doc.doc_id);
    }
    for (const Item& item : corpus.items_) {
        if (item.user_id.empty())
            throw CorpusError("item '" + item.item_id + "' has empty user_id");
        auto doc_it = corpus.doc_index_.find(item.doc_id);
        if (doc_it == corpus.doc_index_.end())
            throw CorpusError("item '" + item.item_id + "' references unknown document '" +
                              item.doc_id + "'");
        const Document& doc = corpus.documents_[doc_it->second];
        if (item.timestamp < doc.publish_time)
            throw CorpusError("item '" + item.item_id + "' predates publication of '" +
                              item.doc_id + "'");
        if (item.parent_item_id) {
            auto parent_it = corpus.item_index_.find(*item.parent_item_id);
            if (parent_it == corpus.item_index_.end())
                throw CorpusError("item '" + item.item_id + "' references unknown parent '" +
                                  *item.parent_item_id + "'");
            if (corpus.items_[parent_it->second].doc_id != item.doc_id)
                throw CorpusError("item '" + item.item_id + "' has parent on a different document");
        }
        auto [it, inserted] = corpus.user_index_.emplace(item.user_id, corpus.users_.size());
        if (inserted) corpus.users_.push_back(User{item.user_id, {}});
        corpus.users_[it->second].item_ids.push_back(item.item_id);
    }

    // Sort the derived entities by id and rebuild their indices.
    std::sort(corpus.publishers_.begin(), corpus.publishers_.end(),
              [](const Publisher& a, const Publisher& b) { return a.publisher_id < b.publisher_id; });
    corpus.publisher_index_.clear();
    for (std::size_t i = 0; i < corpus.publishers_.size(); ++i)
        corpus.publisher_index_.emplace(corpus.publishers_[i].publisher_id, i);
    std::sort(corpus.users_.begin(), corpus.users_.end(),
              [](const User& a, const User& b) { return a.user_id < b.user_id; });
    corpus.user_index_.clear();
    for (std::size_t i = 0; i < corpus.users_.size(); ++i)
        corpus.user_index_.emplace(corpus.users_[i].user_id, i);

    // Time-ordered engagement adjacency per document.
    corpus.doc_item_indices_.resize(corpus.documents_.size());
    for (std::size_t i = 0; i < corpus.items_.size(); ++i)
        corpus.doc_item_indices_[corpus.doc_index_.at(corpus.items_[i].doc_id)].push_back(i);
    for (auto& indices : corpus.doc_item_indices_) {
        std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
            const Item& ia = corpus.items_[a];
            const Item& ib = corpus.items_[b];
            if (ia.timestamp != ib.timestamp) return ia.timestamp < ib.timestamp;
            return ia.item_id < ib.item_id;
        });
    }

    for (const Document& doc : corpus.documents_)
        corpus.latest_timestamp_ = std::max(corpus.latest_timestamp_, doc.publish_time);
    for (const Item& item : corpus.items_)
        corpus.latest_timestamp_ = std::max(corpus.latest_timestamp_, item.timestamp);

    return corpus;
}

bool Corpus::has_document(const std::string& doc_id) const {
    return doc_index_.count(doc_id) > 0;
}

const Document& Corpus::document(const std::string& doc_id) const {
    auto it = doc_index_.find(doc_id);
    if (it == doc_index_.end()) throw CorpusError("unknown document '" + doc_id + "'");
    return documents_[it->second];
}

const Publisher& Corpus::publisher(const std::string& publisher_id) const {
    auto it = publisher_index_.find(publisher_id);
    if (it == publisher_index_.end()) throw CorpusError("unknown publisher '" + publisher_id + "'");
    return publishers_[it->second];
}

const User& Corpus::user(const std::string& user_id) const {
    auto it = user_index_.find(user_id);
    if (it == user_index_.end()) throw CorpusError("unknown user '" + user_id + "'");
    return users_[it->second];
}

const Item& Corpus::item(const std::string& item_id) const {
    auto it = item_index_.find(item_id);
    if (it == item_index_.end()) throw CorpusError("unknown item '" + item_id + "'");
    return items_[it->second];
}

std::vector<const Item*> Corpus::items_for_document(const std::string& doc_id,
                                                    Timestamp observe_at) const {
    auto it = doc_index_.find(doc_id);
    if (it == doc_index_.end()) throw CorpusError("unknown document '" + doc_id + "'");
    std::vector<const Item*> out;
    for (std::size_t idx : doc_item_indices_[it->second]) {
        const Item& item = items_[idx];
        if (item.timestamp > observe_at) break;  // indices are time-ordered
        out.push_back(&item);
    }
    return out;
}

std::vector<const Document*> Corpus::publisher_history(const std::string& publisher_id,
                                                       const std::string& exclude_doc) const {
    const Publisher& pub = publisher(publisher_id);
    std::vector<const Document*> out;
    out.reserve(pub.document_ids.size());
    for (const std::string& id : pub.document_ids) {
        if (id == exclude_doc) continue;
        out.push_back(&document(id));
    }
    return out;
}

Corpus build_corpus(std::vector<Document> documents, std::vector<Item> items) {
    return Corpus::build(std::move(documents), std::move(items));
}

}  // namespace mapx
