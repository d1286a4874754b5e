#include "dts/metrics.hpp"

#include <numeric>

namespace dts {

ConfusionMatrix confusion(std::span<const ChunkLabel> gold, std::span<const ChunkLabel> pred) {
    if (gold.size() != pred.size())
        throw LengthMismatch("gold has " + std::to_string(gold.size()) + " labels, predictions have " +
                             std::to_string(pred.size()));
    if (gold.empty()) throw EmptyInput("confusion needs at least one label pair");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const bool g = gold[i] == ChunkLabel::Transition;
        const bool p = pred[i] == ChunkLabel::Transition;
        if (g && p)
            ++cm.tp;
        else if (!g && p)
            ++cm.fp;
        else if (g && !p)
            ++cm.fn;
        else
            ++cm.tn;
    }
    return cm;
}

PrfScores precision_recall_f1(const ConfusionMatrix& cm) {
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    PrfScores s;
    s.precision = ratio(cm.tp, cm.tp + cm.fp);
    s.recall = ratio(cm.tp, cm.tp + cm.fn);
    s.f1 = (s.precision + s.recall) == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw LengthMismatch("pearson inputs differ in length: " + std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()));
    if (x.size() < 2) throw EmptyInput("pearson needs at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("pearson is undefined for a constant variable");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
    return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

EvalReport make_report(std::string model, std::string split, const ConfusionMatrix& cm) {
    return {std::move(model), std::move(split), cm, precision_recall_f1(cm)};
}

nlohmann::json to_json(const EvalReport& r) {
    return {{"model", r.model},
            {"split", r.split},
            {"confusion", to_json(r.confusion)},
            {"precision", r.scores.precision},
            {"recall", r.scores.recall},
            {"f1", r.scores.f1}};
}

}  // namespace dts
