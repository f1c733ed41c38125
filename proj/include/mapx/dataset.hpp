#pragma once

// Corpus file format (JSON Lines, one record per line) and the synthetic
// corpus generator used by the experiments.

#include <cstdint>
#include <optional>
#include <string>

#include "mapx/corpus.hpp"

namespace mapx {

struct CorpusManifest {
    std::string name;
    std::string documents_path;
    std::string items_path;
};

// Reads dir/manifest.json when present; otherwise assumes documents.jsonl and
// items.jsonl inside dir.
CorpusManifest manifest_for_dir(const std::string& dir);

Corpus load_corpus(const CorpusManifest& manifest);
Corpus load_corpus_dir(const std::string& dir);

// Writes documents.jsonl, items.jsonl, and manifest.json into dir (created if
// missing). Records are ordered by identifier, so save/load round-trips and
// equal corpora serialize to identical bytes.
void save_corpus(const Corpus& corpus, const std::string& dir, const std::string& name);

struct SynthConfig {
    int n_publishers = 20;
    int n_documents = 500;
    int n_users = 200;
    double false_rate = 0.3;
    // Mean engagement items per hour for a typical document; per-document
    // popularity multipliers spread item counts across the reliability bins.
    double engagement_rate_per_hour = 0.25;
    double horizon_hours = 168.0;
    std::uint64_t seed = 1;

    // How strongly each channel predicts the label, 0 (noise) to 1.
    double word_signal = 0.5;
    double publisher_signal = 0.5;
    double user_signal = 0.5;

    // Fraction of documents published by throwaway single-document publishers
    // (unobserved in any training fold that excludes the document), with
    // optional channel overrides on that side. Models the reliable/unreliable
    // publisher split of the degradation experiment.
    double new_publisher_doc_fraction = 0.0;
    std::optional<double> new_pub_word_signal;
    std::optional<double> new_pub_user_signal;

    void validate() const;
};

Corpus generate_synthetic(const SynthConfig& config);

}  // namespace mapx
