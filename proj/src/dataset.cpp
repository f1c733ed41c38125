#include "mapx/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mapx/error.hpp"
#include "mapx/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace mapx {

namespace {

std::string at_line(const std::string& path, int line) {
    return path + ":" + std::to_string(line);
}

const json& require_field(const json& record, const char* field, const std::string& where) {
    auto it = record.find(field);
    if (it == record.end()) throw ParseError(where + ": missing field '" + field + "'");
    return *it;
}

std::string require_string(const json& record, const char* field, const std::string& where) {
    const json& value = require_field(record, field, where);
    if (!value.is_string()) throw ParseError(where + ": field '" + field + "' is not a string");
    return value.get<std::string>();
}

std::int64_t require_int(const json& record, const char* field, const std::string& where) {
    const json& value = require_field(record, field, where);
    if (!value.is_number_integer()) {
        throw ParseError(where + ": field '" + field + "' is not an integer");
    }
    return value.get<std::int64_t>();
}

json parse_line(const std::string& line, const std::string& where) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded()) throw ParseError(where + ": invalid JSON");
    if (!record.is_object()) throw ParseError(where + ": record is not a JSON object");
    return record;
}

template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        fn(line, line_no);
    }
}

Document parse_document(const json& record, const std::string& where) {
    Document doc;
    doc.doc_id = require_string(record, "doc_id", where);
    doc.publisher_id = require_string(record, "publisher_id", where);
    doc.text = require_string(record, "text", where);
    doc.publish_time = require_int(record, "publish_time", where);
    if (auto it = record.find("label"); it != record.end() && !it->is_null()) {
        std::int64_t label = require_int(record, "label", where);
        if (label != 0 && label != 1) {
            throw ParseError(where + ": label must be 0 or 1, got " + std::to_string(label));
        }
        doc.label = static_cast<Label>(label);
    }
    return doc;
}

Item parse_item(const json& record, const std::string& where) {
    Item item;
    item.item_id = require_string(record, "item_id", where);
    item.doc_id = require_string(record, "doc_id", where);
    item.user_id = require_string(record, "user_id", where);
    item.timestamp = require_int(record, "timestamp", where);
    try {
        item.kind = item_kind_from_string(require_string(record, "kind", where));
    } catch (const CorpusError&) {
        throw ParseError(where + ": unknown item kind '" +
                         require_string(record, "kind", where) + "'");
    }
    if (auto it = record.find("parent_item_id"); it != record.end() && !it->is_null()) {
        item.parent_item_id = require_string(record, "parent_item_id", where);
    }
    if (auto it = record.find("text"); it != record.end() && !it->is_null()) {
        item.text = require_string(record, "text", where);
    }
    return item;
}

}  // namespace

CorpusManifest manifest_for_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw CorpusError("'" + dir + "' is not a directory");

    CorpusManifest manifest;
    fs::path manifest_path = fs::path(dir) / "manifest.json";
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        json record = json::parse(in, nullptr, false);
        if (record.is_discarded()) {
            throw ParseError(manifest_path.string() + ": invalid JSON");
        }
        std::string where = manifest_path.string();
        manifest.name = require_string(record, "name", where);
        manifest.documents_path = (fs::path(dir) / require_string(record, "documents", where)).string();
        manifest.items_path = (fs::path(dir) / require_string(record, "items", where)).string();
    } else {
        manifest.name = fs::path(dir).filename().string();
        manifest.documents_path = (fs::path(dir) / "documents.jsonl").string();
        manifest.items_path = (fs::path(dir) / "items.jsonl").string();
    }
    return manifest;
}

Corpus load_corpus(const CorpusManifest& manifest) {
    std::vector<Document> documents;
    for_each_line(manifest.documents_path, [&](const std::string& line, int line_no) {
        std::string where = at_line(manifest.documents_path, line_no);
        documents.push_back(parse_document(parse_line(line, where), where));
    });

    std::vector<Item> items;
    if (fs::exists(manifest.items_path)) {
        for_each_line(manifest.items_path, [&](const std::string& line, int line_no) {
            std::string where = at_line(manifest.items_path, line_no);
            items.push_back(parse_item(parse_line(line, where), where));
        });
    }
    return Corpus::build(std::move(documents), std::move(items));
}

Corpus load_corpus_dir(const std::string& dir) {
    return load_corpus(manifest_for_dir(dir));
}

void save_corpus(const Corpus& corpus, const std::string& dir, const std::string& name) {
    fs::create_directories(dir);

    std::ofstream docs_out(fs::path(dir) / "documents.jsonl");
    for (const Document& doc : corpus.documents()) {
        ordered_json record;
        record["doc_id"] = doc.doc_id;
        record["publisher_id"] = doc.publisher_id;
        record["text"] = doc.text;
        record["publish_time"] = doc.publish_time;
        if (doc.label) record["label"] = static_cast<int>(*doc.label);
        docs_out << record.dump() << "\n";
    }

    std::ofstream items_out(fs::path(dir) / "items.jsonl");
    for (const Item& item : corpus.items()) {
        ordered_json record;
        record["item_id"] = item.item_id;
        record["doc_id"] = item.doc_id;
        record["user_id"] = item.user_id;
        record["timestamp"] = item.timestamp;
        record["kind"] = to_string(item.kind);
        if (item.parent_item_id) record["parent_item_id"] = *item.parent_item_id;
        if (item.text) record["text"] = *item.text;
        items_out << record.dump() << "\n";
    }

    ordered_json manifest;
    manifest["name"] = name;
    manifest["documents"] = "documents.jsonl";
    manifest["items"] = "items.jsonl";
    manifest["label_semantics"] = {{"0", "true-news"}, {"1", "false-news"}};
    std::ofstream manifest_out(fs::path(dir) / "manifest.json");
    manifest_out << manifest.dump(2) << "\n";
}

void SynthConfig::validate() const {
    auto check_unit = [](double v, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError(std::string(field) + " must be in [0, 1], got " +
                              std::to_string(v));
        }
    };
    if (n_publishers <= 0) throw ConfigError("n_publishers must be positive");
    if (n_documents <= 0) throw ConfigError("n_documents must be positive");
    if (n_users <= 0) throw ConfigError("n_users must be positive");
    if (horizon_hours <= 0.0) throw ConfigError("horizon_hours must be positive");
    if (engagement_rate_per_hour < 0.0) {
        throw ConfigError("engagement_rate_per_hour must be nonnegative");
    }
    check_unit(false_rate, "false_rate");
    check_unit(word_signal, "word_signal");
    check_unit(publisher_signal, "publisher_signal");
    check_unit(user_signal, "user_signal");
    check_unit(new_publisher_doc_fraction, "new_publisher_doc_fraction");
    if (new_pub_word_signal) check_unit(*new_pub_word_signal, "new_pub_word_signal");
    if (new_pub_user_signal) check_unit(*new_pub_user_signal, "new_pub_user_signal");
}

namespace {

// Deterministic pseudo-words ("belu", "rona", ...) so synthetic text looks
// like text; index n yields the n-th distinct word.
std::string pseudo_word(int n) {
    static const char* syllables[] = {"ba", "re", "mo", "ti", "lu", "ka", "se", "do", "vi", "na",
                                      "pel", "gor", "mi", "ta", "ru", "fen", "so", "da", "li", "ve"};
    constexpr int n_syl = 20;
    std::string word = syllables[n % n_syl];
    word += syllables[(n / n_syl) % n_syl];
    if (n >= n_syl * n_syl) word += syllables[(n / (n_syl * n_syl)) % n_syl];
    return word;
}

std::string padded(const char* prefix, int n, int width) {
    std::string digits = std::to_string(n);
    std::string out = prefix;
    out += std::string(width > static_cast<int>(digits.size())
                           ? width - static_cast<int>(digits.size())
                           : 0,
                       '0');
    out += digits;
    return out;
}

}  // namespace

Corpus generate_synthetic(const SynthConfig& config) {
    config.validate();
    Rng rng(config.seed);

    constexpr int kLabelVocab = 40;    // per class
    constexpr int kNeutralVocab = 160;
    std::vector<std::string> false_vocab, true_vocab, neutral_vocab;
    for (int i = 0; i < kLabelVocab; ++i) false_vocab.push_back(pseudo_word(i));
    for (int i = 0; i < kLabelVocab; ++i) true_vocab.push_back(pseudo_word(kLabelVocab + i));
    for (int i = 0; i < kNeutralVocab; ++i) {
        neutral_vocab.push_back(pseudo_word(2 * kLabelVocab + i));
    }

    std::vector<bool> publisher_affinity(config.n_publishers);
    for (int p = 0; p < config.n_publishers; ++p) {
        publisher_affinity[p] = next_bernoulli(rng, config.false_rate);
    }
    std::vector<bool> user_affinity(config.n_users);
    std::vector<int> false_users, true_users, all_users;
    for (int u = 0; u < config.n_users; ++u) {
        user_affinity[u] = next_bernoulli(rng, config.false_rate);
        (user_affinity[u] ? false_users : true_users).push_back(u);
        all_users.push_back(u);
    }

    constexpr Timestamp kEpoch = 1600000000;
    std::vector<Document> documents;
    std::vector<Item> items;
    int solo_counter = 0;
    int item_counter = 0;

    for (int d = 0; d < config.n_documents; ++d) {
        Document doc;
        doc.doc_id = padded("doc_", d, 5);
        doc.publish_time = kEpoch + static_cast<Timestamp>(d) * 3600;

        bool solo = next_bernoulli(rng, config.new_publisher_doc_fraction);
        bool affinity;
        if (solo) {
            doc.publisher_id = padded("pub_solo_", solo_counter++, 5);
            affinity = next_bernoulli(rng, config.false_rate);
        } else {
            int p = static_cast<int>(next_below(rng, config.n_publishers));
            doc.publisher_id = padded("pub_", p, 3);
            affinity = publisher_affinity[p];
        }
        bool is_false = next_bernoulli(rng, config.publisher_signal)
                            ? affinity
                            : next_bernoulli(rng, config.false_rate);
        doc.label = is_false ? Label::false_news : Label::true_news;

        double word_signal = solo && config.new_pub_word_signal ? *config.new_pub_word_signal
                                                                : config.word_signal;
        double user_signal = solo && config.new_pub_user_signal ? *config.new_pub_user_signal
                                                                : config.user_signal;

        // Document length mixture spreads word counts over the reliability
        // bins, weighted toward the mid-length bins.
        double length_draw = next_unit(rng);
        int length;
        if (length_draw < 0.10) {
            length = 12 + static_cast<int>(next_below(rng, 12));
        } else if (length_draw < 0.60) {
            length = 40 + static_cast<int>(next_below(rng, 60));
        } else if (length_draw < 0.85) {
            length = 150 + static_cast<int>(next_below(rng, 140));
        } else if (length_draw < 0.95) {
            length = 330 + static_cast<int>(next_below(rng, 250));
        } else {
            length = 620 + static_cast<int>(next_below(rng, 160));
        }
        const std::vector<std::string>& label_vocab = is_false ? false_vocab : true_vocab;
        std::string text;
        for (int w = 0; w < length; ++w) {
            const std::vector<std::string>& vocab =
                next_bernoulli(rng, word_signal) ? label_vocab : neutral_vocab;
            if (w > 0) text += ' ';
            text += vocab[next_below(rng, vocab.size())];
        }
        doc.text = std::move(text);
        documents.push_back(std::move(doc));

        // Engagement: item count from a popularity-scaled Poisson, spread
        // uniformly over the horizon; the engaging-user pool size targets an
        // items-per-user mixture so that factor's bins are all populated.
        double popularity_draw = next_unit(rng);
        double popularity = popularity_draw < 0.25 ? 0.05 : popularity_draw < 0.75 ? 1.0 : 5.0;
        int n_items = next_poisson(
            rng, config.engagement_rate_per_hour * config.horizon_hours * popularity);

        double ipu_draw = next_unit(rng);
        double ipu_target = ipu_draw < 0.4 ? 1.0 : ipu_draw < 0.7 ? 2.5 : ipu_draw < 0.9 ? 6.0 : 12.0;
        int pool_size = std::max(1, static_cast<int>(std::llround(n_items / ipu_target)));

        std::vector<int> pool;
        std::set<int> seen;
        int attempts = 0;
        while (static_cast<int>(pool.size()) < pool_size && attempts < 4 * pool_size + 16) {
            ++attempts;
            const std::vector<int>& candidates =
                next_bernoulli(rng, user_signal) ? (is_false ? false_users : true_users)
                                                 : all_users;
            if (candidates.empty()) continue;
            int user = candidates[next_below(rng, candidates.size())];
            if (seen.insert(user).second) pool.push_back(user);
        }
        if (pool.empty()) pool.push_back(static_cast<int>(next_below(rng, config.n_users)));

        int first_item_of_doc = static_cast<int>(items.size());
        for (int k = 0; k < n_items; ++k) {
            Item item;
            item.item_id = padded("item_", item_counter++, 7);
            item.doc_id = documents.back().doc_id;
            item.user_id = padded("user_", pool[next_below(rng, pool.size())], 4);
            double offset_hours = next_unit(rng) * config.horizon_hours;
            item.timestamp = documents.back().publish_time +
                             static_cast<Timestamp>(std::llround(offset_hours * 3600.0));

            double kind_draw = next_unit(rng);
            if (kind_draw < 0.45) {
                item.kind = ItemKind::post;
            } else if (kind_draw < 0.70) {
                item.kind = ItemKind::share;
            } else if (kind_draw < 0.90) {
                item.kind = ItemKind::like;
            } else if (static_cast<int>(items.size()) > first_item_of_doc) {
                item.kind = ItemKind::comment;
                const Item& parent = items[first_item_of_doc + static_cast<int>(next_below(
                                               rng, items.size() - first_item_of_doc))];
                item.parent_item_id = parent.item_id;
                item.timestamp = std::max(item.timestamp, parent.timestamp);
            } else {
                item.kind = ItemKind::post;
            }
            items.push_back(std::move(item));
        }
    }

    return Corpus::build(std::move(documents), std::move(items));
}

}  // namespace mapx
