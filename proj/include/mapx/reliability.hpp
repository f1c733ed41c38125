#pragma once

// Reliability factor scoring: piecewise-constant bins mapping each measurable
// factor (word_count, document_count, ...) to a score in [0, 1]. The compiled
// defaults can be overridden per factor from a JSON config so experiments can
// ablate the bins.

#include <string>
#include <vector>

#include "mapx/error.hpp"

namespace mapx {

enum class Factor {
    word_count,
    publisher_type,
    document_count,
    item_count,
    item_per_user,
    document_age,
};

inline constexpr Factor kAllFactors[] = {
    Factor::word_count,   Factor::publisher_type, Factor::document_count,
    Factor::item_count,   Factor::item_per_user,  Factor::document_age,
};

const char* to_string(Factor f);
Factor factor_from_string(const std::string& s);

enum class PublisherType { new_publisher, existing };

const char* to_string(PublisherType t);

// value < edges[0] -> scores[0]; edges[i-1] <= value < edges[i] -> scores[i];
// value >= edges.back() -> scores.back(). Requires ascending edges and
// scores.size() == edges.size() + 1.
struct PiecewiseBins {
    std::vector<double> edges;
    std::vector<double> scores;

    double score(double value) const;
    void validate(const std::string& factor_name) const;
};

class ReliabilityTable {
public:
    // Compiled-in default bins.
    ReliabilityTable();

    // Loads per-factor overrides from a JSON file; factors not named keep
    // their defaults.
    static ReliabilityTable from_json_file(const std::string& path);
    static ReliabilityTable from_json_text(const std::string& text, const std::string& origin);

    // Numeric factors. Negative counts/ages are rejected; publisher_type is
    // not a numeric factor and is rejected here.
    double lookup(Factor factor, double value) const;
    double lookup(PublisherType type) const;

    const PiecewiseBins& bins(Factor factor) const;

private:
    PiecewiseBins word_count_;
    PiecewiseBins document_count_;
    PiecewiseBins item_count_;
    PiecewiseBins item_per_user_;
    PiecewiseBins document_age_;
    double new_publisher_ = 0.1;
    double existing_publisher_ = 1.0;
};

// Shared instance of the compiled defaults.
const ReliabilityTable& default_reliability_table();

// Lookup against the compiled defaults.
double reliability_lookup(Factor factor, double value);
double reliability_lookup(PublisherType type);

}  // namespace mapx
