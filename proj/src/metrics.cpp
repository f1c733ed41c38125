#include "mapx/metrics.hpp"

namespace mapx {

void Confusion::add(bool predicted_false, Label actual) {
    if (actual == Label::false_news) {
        ++(predicted_false ? tp : fn);
    } else {
        ++(predicted_false ? fp : tn);
    }
}

void Confusion::merge(const Confusion& other) {
    tp += other.tp;
    fp += other.fp;
    tn += other.tn;
    fn += other.fn;
}

double Confusion::accuracy() const {
    long long n = total();
    return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double Confusion::precision() const {
    long long denom = tp + fp;
    return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double Confusion::recall() const {
    long long denom = tp + fn;
    return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double Confusion::f1() const {
    double p = precision();
    double r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace mapx
