#pragma once

// Shared test scaffolding: record builders and a scratch directory.

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "mapx/corpus.hpp"

namespace test {

// RAII scratch directory under the system temp root.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "mapx_test_XXXXXX").string();
        path = ::mkdtemp(tmpl.data());
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path.string(); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

inline mapx::Document doc(std::string id, std::string publisher, std::string text,
                          mapx::Timestamp publish_time,
                          std::optional<mapx::Label> label = std::nullopt) {
    mapx::Document d;
    d.doc_id = std::move(id);
    d.publisher_id = std::move(publisher);
    d.text = std::move(text);
    d.publish_time = publish_time;
    d.label = label;
    return d;
}

inline mapx::Item item(std::string id, std::string doc_id, std::string user,
                       mapx::Timestamp timestamp,
                       mapx::ItemKind kind = mapx::ItemKind::post,
                       std::optional<std::string> parent = std::nullopt) {
    mapx::Item it;
    it.item_id = std::move(id);
    it.doc_id = std::move(doc_id);
    it.user_id = std::move(user);
    it.timestamp = timestamp;
    it.kind = kind;
    it.parent_item_id = std::move(parent);
    return it;
}

}  // namespace test
