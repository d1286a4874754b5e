// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// The corpus-level checks run only when DTS_SWITCHBOARD_CORPUS points at the
// annotated transcripts; otherwise they print SKIP.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dts/analytics.hpp"
#include "dts/chunking.hpp"
#include "dts/classifier.hpp"
#include "dts/corpus.hpp"
#include "dts/metrics.hpp"
#include "dts/texttiling.hpp"
#include "support/fixtures.hpp"
#include "support/nb_oracle.hpp"

using namespace dts;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            outcome_.pass = false;
            if (!outcome_.detail.empty()) outcome_.detail += "; ";
            outcome_.detail += what;
        }
    }
    void note(const std::string& what) {
        if (!outcome_.detail.empty()) outcome_.detail += "; ";
        outcome_.detail += what;
    }
    Outcome outcome() const { return outcome_; }

private:
    Outcome outcome_;
};

std::string num(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << v;
    return os.str();
}

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << title << " (" << num(secs, 3) << " s)";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << std::endl;
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Outcome ac1_oracle() {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto f = dts::testing::random_nb_fixture(rng);
        const auto model = train_nb(f.train);
        c.expect(model.vocabulary.size() <= 5 && f.train.size() <= 10, "fixture exceeds |V|<=5, <=10 chunks");
        for (const auto& probe : f.probes) {
            const auto got = predict_nb(model, Chunk{"A", 1, 1, probe, ChunkLabel::Continuation});
            const auto want = dts::testing::brute_force_posterior(f.train, model.vocabulary.tokens(), 1.0, probe);
            worst = std::max({worst, std::abs(got.posterior[0] - want[0]), std::abs(got.posterior[1] - want[1])});
        }
    }
    const double secs = elapsed_since(start);
    std::ostringstream dev;
    dev << std::scientific << worst;
    c.expect(worst <= 1e-9, "max deviation " + dev.str());
    c.expect(secs < 1.0, "runtime " + num(secs, 3) + " s");
    c.note("max |log-space - direct| = " + dev.str());
    return c.outcome();
}

Outcome ac2_separable() {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    const auto corpus = dts::testing::separable_corpus(2024, 50);
    const auto parts = split_corpus(corpus, SplitSpec{0.7, 0.1, 0.2, 42});
    const auto train = chunk_all(parts.train);
    const auto model = train_nb(train);
    std::vector<ChunkLabel> gold, pred;
    for (const auto& ch : chunk_all(parts.test)) {
        gold.push_back(ch.gold_label);
        pred.push_back(predict_nb(model, ch).label);
    }
    const auto cm = confusion(gold, pred);
    const auto s = precision_recall_f1(cm);
    const double secs = elapsed_since(start);
    c.expect(s.precision == 1.0, "precision " + num(s.precision));
    c.expect(s.recall == 1.0, "recall " + num(s.recall));
    c.expect(secs < 5.0, "runtime " + num(secs, 3) + " s");
    c.note("held-out " + std::to_string(parts.test.size()) + " conversations, " + std::to_string(cm.total()) +
           " chunks, P=" + num(s.precision) + " R=" + num(s.recall));
    return c.outcome();
}

// The prediction for a clean break is the last chunk of the first topic, so
// distance is measured from there.
bool recovered(const dts::testing::TwoTopicConversation& tt, const TilingConfig& cfg) {
    const auto result = segment_chunks(chunk_conversation(tt.conversation), cfg);
    const auto& t = result.transition_chunks;
    if (t.size() != 1) return false;
    const long diff = static_cast<long>(t[0]) - static_cast<long>(tt.break_chunk - 1);
    return diff >= -1 && diff <= 1;
}

Outcome ac3_tiling() {
    Checker c;
    const TilingConfig cfg;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(3);
    int hits = 0;
    for (int i = 0; i < 20; ++i) hits += recovered(dts::testing::two_topic_conversation(rng, "tt" + std::to_string(i)), cfg);
    const double secs = elapsed_since(start);
    c.expect(hits >= 18, std::to_string(hits) + "/20 recovered");
    c.expect(secs < 5.0, "runtime " + num(secs, 3) + " s");
    c.note(std::to_string(hits) + "/20 with exactly one transition within one chunk of the break");

    // Context only: the rate over a larger sample from other seeds.
    int wide = 0;
    for (std::uint64_t seed = 100; seed < 150; ++seed) {
        std::mt19937_64 r(seed);
        for (int i = 0; i < 20; ++i) wide += recovered(dts::testing::two_topic_conversation(r, "w"), cfg);
    }
    c.note("rate over 1000 further conversations " + num(wide / 10.0, 1) + "%");
    return c.outcome();
}

Outcome ac4_metrics() {
    Checker c;
    const auto s = precision_recall_f1({3, 1, 2, 0});
    c.expect(s.precision == 0.75, "precision " + num(s.precision, 6));
    c.expect(s.recall == 0.6, "recall " + num(s.recall, 6));
    c.expect(std::abs(s.f1 - 0.6667) <= 1e-4, "f1 " + num(s.f1, 6));
    const std::vector<char> a{'T', 'T', 'F', 'F'}, b{'T', 'F', 'T', 'F'};
    const double k = cohen_kappa(a, b);
    c.expect(k == 0.0, "kappa " + std::to_string(k));
    const std::vector<double> x{1, 2, 3, 4}, y{5, 7, 9, 11}, z{1, 3, 2, 4};
    const double r1 = pearson(x, y), r2 = pearson(x, z);
    c.expect(std::abs(r1 - 1.0) <= 1e-12, "pearson(y=2x+3) " + std::to_string(r1));
    c.expect(std::abs(r2 - 0.8) <= 1e-12, "pearson fixture " + std::to_string(r2));
    return c.outcome();
}

Outcome ac5_analytics() {
    Checker c;
    std::mt19937_64 rng(5);
    std::vector<Conversation> corpus;
    for (int i = 0; i < 200; ++i) corpus.push_back(dts::testing::random_conversation(rng, "r" + std::to_string(i)));
    int bad = 0;
    for (const auto& a : analyze_corpus(corpus)) {
        const auto sum = std::accumulate(a.turns_per_topic.begin(), a.turns_per_topic.end(), std::size_t{0});
        if (sum != a.length || a.turns_per_topic.size() != a.n_transitions + 1) ++bad;
    }
    c.expect(bad == 0, std::to_string(bad) + " conversations break segment accounting");
    double total = 0;
    for (const auto& [d, pct] : transition_share(corpus).percentages) total += pct;
    c.expect(std::abs(total - 100.0) <= 1e-9, "histogram sums to " + std::to_string(total));
    return c.outcome();
}

Outcome ac6_stats() {
    Checker c;
    // 10 conversations, 216 turns, 76 transitions.
    const std::size_t lengths[] = {18, 20, 22, 24, 26, 19, 21, 23, 25, 18};
    const std::size_t transitions[] = {7, 8, 8, 8, 8, 7, 7, 8, 8, 7};
    std::vector<Conversation> corpus;
    for (std::size_t i = 0; i < 10; ++i) {
        std::vector<dts::testing::TurnSpec> turns;
        for (std::size_t t = 0; t < lengths[i]; ++t) {
            LabelSet labels;
            if (t >= 1 && t <= transitions[i]) labels.insert(Label::C);
            turns.push_back({t % 2 ? "B" : "A", "text", labels});
        }
        corpus.push_back(dts::testing::make_conversation("ood" + std::to_string(i), turns));
    }
    const auto s = corpus_stats(corpus);
    c.expect(s.n_conversations == 10, "n_conversations");
    c.expect(s.n_turns == 216, "n_turns " + std::to_string(s.n_turns));
    c.expect(s.avg_turns_per_conversation == 21.6, "avg " + std::to_string(s.avg_turns_per_conversation));
    c.expect(s.avg_transitions_per_conversation == 7.6, "avg transitions " + std::to_string(s.avg_transitions_per_conversation));
    return c.outcome();
}

Outcome ac7_determinism() {
    Checker c;
    const auto corpus = dts::testing::separable_corpus(77, 30);
    auto model_bytes = [&] {
        const auto parts = split_corpus(corpus, SplitSpec{});
        return serialize_model(train_nb(chunk_all(parts.train)));
    };
    c.expect(model_bytes() == model_bytes(), "model files differ");

    std::mt19937_64 rng(9);
    const TilingConfig cfg;
    for (int i = 0; i < 10; ++i) {
        const auto conv = dts::testing::random_conversation(rng, "d" + std::to_string(i), 120);
        const auto chunks = chunk_conversation(conv);
        const auto a = segment_chunks(chunks, cfg);
        const auto b = segment_chunks(chunks, cfg);
        c.expect(a.labels == b.labels && a.transition_chunks == b.transition_chunks, "tiling differs on " + conv.id);
    }
    return c.outcome();
}

Outcome ac8_corpus(const std::string& path) {
    Checker c;
    const auto corpus = load_corpus(path);
    const auto s = corpus_stats(corpus);
    c.expect(s.n_conversations == 215, "conversations " + std::to_string(s.n_conversations));
    c.expect(s.n_turns == 20566, "turns " + std::to_string(s.n_turns));
    c.expect(std::lround(s.avg_turns_per_conversation) == 96, "avg turns " + num(s.avg_turns_per_conversation, 2));
    c.expect(std::lround(s.avg_transitions_per_conversation) == 8,
             "avg transitions " + num(s.avg_transitions_per_conversation, 2));
    c.expect(s.avg_turns_per_transition && std::lround(*s.avg_turns_per_transition) == 12, "avg turns per transition");
    c.expect(s.min_turns == 33 && s.max_turns == 242,
             "shortest/longest " + std::to_string(s.min_turns) + "/" + std::to_string(s.max_turns));

    const double r = length_vs_transitions(corpus).pearson_r;
    c.expect(std::abs(r - 0.75) <= 0.01, "pearson r " + num(r));
    const double d0 = transition_share(corpus).equal_share_percent;
    c.expect(std::abs(d0 - 15.0) <= 2.0, "equal share " + num(d0, 2) + "%");

    const auto parts = split_corpus(corpus, SplitSpec{});
    const auto model = train_nb(chunk_all(parts.train));
    const auto test_chunks = chunk_all(parts.test);
    std::vector<ChunkLabel> gold, nb_pred;
    for (const auto& ch : test_chunks) {
        gold.push_back(ch.gold_label);
        nb_pred.push_back(predict_nb(model, ch).label);
    }
    const double nb_p = precision_recall_f1(confusion(gold, nb_pred)).precision;
    c.expect(std::abs(nb_p - 0.83) <= 0.05, "naive bayes precision " + num(nb_p));

    ConfusionMatrix tiling;
    const TilingConfig cfg;
    for (const auto& conv : parts.test) {
        const auto chunks = chunk_conversation(conv);
        std::vector<ChunkLabel> g;
        for (const auto& ch : chunks) g.push_back(ch.gold_label);
        tiling += confusion(g, segment_chunks(chunks, cfg).labels);
    }
    const double tt_p = precision_recall_f1(tiling).precision;
    c.expect(std::abs(tt_p - 0.18) <= 0.05, "texttiling precision " + num(tt_p));
    c.note("r=" + num(r) + " d0=" + num(d0, 2) + "% nb_p=" + num(nb_p) + " tt_p=" + num(tt_p));
    return c.outcome();
}

}  // namespace

int main() {
    report("AC1", "naive bayes matches direct-probability oracle", ac1_oracle);
    report("AC2", "separable corpus gives precision = recall = 1", ac2_separable);
    report("AC3", "texttiling recovers two-topic breaks", ac3_tiling);
    report("AC4", "metric values are exact", ac4_metrics);
    report("AC5", "analytics segment accounting and histogram mass", ac5_analytics);
    report("AC6", "corpus stats on a 10-conversation, 216-turn fixture", ac6_stats);
    report("AC7", "training and tiling are deterministic", ac7_determinism);

    if (const char* path = std::getenv("DTS_SWITCHBOARD_CORPUS"); path && *path)
        report("AC8", "annotated corpus matches reference figures", [&] { return ac8_corpus(path); });
    else
        std::cout << "SKIP AC8 annotated corpus matches reference figures: DTS_SWITCHBOARD_CORPUS not set"
                  << std::endl;

    std::cout << (failures == 0 ? "acceptance: all criteria passed" : "acceptance: " + std::to_string(failures) +
                                                                          " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
