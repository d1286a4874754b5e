#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dts/chunking.hpp"
#include "dts/errors.hpp"

namespace dts {

// Transition is the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Throws LengthMismatch, EmptyInput.
ConfusionMatrix confusion(std::span<const ChunkLabel> gold, std::span<const ChunkLabel> pred);

// Any ratio whose denominator is zero is reported as 0.
PrfScores precision_recall_f1(const ConfusionMatrix& cm);

// Chance-corrected agreement over an arbitrary finite label set. Returns 1
// when both raters used one identical label throughout (chance agreement 1).
// Throws LengthMismatch, EmptyInput.
template <typename T>
double cohen_kappa(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size())
        throw LengthMismatch("kappa inputs differ in length: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    if (a.empty()) throw EmptyInput("kappa needs at least one item");
    const double n = static_cast<double>(a.size());
    std::map<T, std::size_t> ma, mb;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++ma[a[i]];
        ++mb[b[i]];
        if (a[i] == b[i]) ++agree;
    }
    const double po = static_cast<double>(agree) / n;
    double pe = 0.0;
    for (const auto& [label, count] : ma)
        if (auto it = mb.find(label); it != mb.end())
            pe += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
    if (pe == 1.0) return 1.0;
    return (po - pe) / (1.0 - pe);
}

template <typename T>
double cohen_kappa(const std::vector<T>& a, const std::vector<T>& b) {
    return cohen_kappa(std::span<const T>(a), std::span<const T>(b));
}

// Sample Pearson correlation, clamped to [-1, 1]. Throws LengthMismatch,
// EmptyInput (fewer than two points) and DegenerateInput (a constant variable).
double pearson(std::span<const double> x, std::span<const double> y);

nlohmann::json to_json(const ConfusionMatrix& cm);

// One model/split row: confusion counts plus precision, recall and F1.
struct EvalReport {
    std::string model;
    std::string split;
    ConfusionMatrix confusion;
    PrfScores scores;
};

EvalReport make_report(std::string model, std::string split, const ConfusionMatrix& cm);
nlohmann::json to_json(const EvalReport& report);

}  // namespace dts
