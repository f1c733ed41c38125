#pragma once

// Binary classification metrics with false news as the positive class.

#include "mapx/corpus.hpp"

namespace mapx {

struct Confusion {
    long long tp = 0;  // predicted false, was false
    long long fp = 0;  // predicted false, was true
    long long tn = 0;
    long long fn = 0;

    void add(bool predicted_false, Label actual);
    void merge(const Confusion& other);
    long long total() const { return tp + fp + tn + fn; }

    // All return 0 when undefined (empty counts / zero denominators).
    double accuracy() const;
    double precision() const;
    double recall() const;
    double f1() const;
};

}  // namespace mapx
