#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "dts/analytics.hpp"
#include "dts/metrics.hpp"
#include "support/fixtures.hpp"

using namespace dts;
using dts::testing::make_conversation;
using dts::testing::TurnSpec;

namespace fs = std::filesystem;

namespace {

// Alternating two-party conversation of `n` turns with C on the given 1-based turns.
Conversation with_c(std::string id, std::size_t n, std::initializer_list<std::size_t> c_turns) {
    std::vector<TurnSpec> turns;
    for (std::size_t i = 1; i <= n; ++i) {
        LabelSet labels;
        if (std::find(c_turns.begin(), c_turns.end(), i) != c_turns.end()) labels.insert(Label::C);
        turns.push_back({i % 2 ? "A" : "B", "t" + std::to_string(i), labels});
    }
    return make_conversation(std::move(id), turns);
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("dts_analytics_" + tag + "_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("analyze_conversation") {
    SUBCASE("C on turns 3 and 5") {
        const auto a = analyze_conversation(with_c("x", 6, {3, 5}));
        CHECK(a.length == 6);
        CHECK(a.n_transitions == 2);
        CHECK(a.turns_per_topic == std::vector<std::size_t>{2, 2, 2});
        CHECK(a.per_speaker_transitions == std::map<std::string, std::size_t>{{"A", 2}, {"B", 0}});
    }
    SUBCASE("C on turns 3 and 4 split across speakers") {
        const auto a = analyze_conversation(with_c("x", 6, {3, 4}));
        CHECK(a.turns_per_topic == std::vector<std::size_t>{2, 1, 3});
        CHECK(a.per_speaker_transitions == std::map<std::string, std::size_t>{{"A", 1}, {"B", 1}});
    }
    SUBCASE("no C") {
        const auto a = analyze_conversation(with_c("x", 4, {}));
        CHECK(a.n_transitions == 0);
        CHECK(a.turns_per_topic == std::vector<std::size_t>{4});
    }
    SUBCASE("C on turn 1 opens the first segment") {
        const auto a = analyze_conversation(with_c("x", 5, {1, 4}));
        CHECK(a.n_transitions == 1);
        CHECK(a.turns_per_topic == std::vector<std::size_t>{3, 2});
    }
    SUBCASE("X never creates a segment") {
        auto conv = with_c("x", 4, {});
        conv.turns[1].labels.insert(Label::X);
        CHECK(analyze_conversation(conv).turns_per_topic == std::vector<std::size_t>{4});
    }
}

TEST_CASE("length_vs_transitions") {
    std::vector<Conversation> corpus;
    for (std::size_t k = 1; k <= 6; ++k) {
        std::vector<std::size_t> cs;
        std::vector<TurnSpec> turns;
        const std::size_t n = 10 * k;
        for (std::size_t i = 1; i <= n; ++i) {
            LabelSet labels;
            if (i % 10 == 5) labels.insert(Label::C);
            turns.push_back({i % 2 ? "A" : "B", "w", labels});
        }
        corpus.push_back(make_conversation("len" + std::to_string(k), turns));
    }
    const auto lt = length_vs_transitions(corpus);
    REQUIRE(lt.pairs.size() == 6);
    CHECK(lt.pairs[2] == std::pair<std::size_t, std::size_t>{30, 3});
    CHECK(std::abs(lt.pearson_r - 1.0) < 1e-12);

    // lengths 10,20,30,40 with transitions 1,3,2,4: same shape as the 0.8 fixture
    std::vector<Conversation> four{with_c("a", 10, {2}), with_c("b", 20, {2, 3, 4}), with_c("c", 30, {2, 3}),
                                   with_c("d", 40, {2, 3, 4, 5})};
    CHECK(std::abs(length_vs_transitions(four).pearson_r - 0.8) < 1e-12);

    CHECK_THROWS_AS(length_vs_transitions(std::span(four).first(1)), EmptyInput);
    std::vector<Conversation> flat{with_c("a", 10, {2}), with_c("b", 20, {2})};
    CHECK_THROWS_AS(length_vs_transitions(flat), DegenerateInput);
}

TEST_CASE("transition_share") {
    const std::vector<Conversation> corpus{with_c("d0", 6, {3, 4}), with_c("d1a", 6, {3}), with_c("d1b", 6, {4})};
    const auto h = transition_share(corpus);
    CHECK(h.counts == std::map<std::size_t, std::size_t>{{0, 1}, {1, 2}});
    CHECK(h.percentages.at(0) == doctest::Approx(100.0 / 3.0));
    CHECK(h.percentages.at(1) == doctest::Approx(200.0 / 3.0));
    CHECK(std::round(h.percentages.at(0) * 100) / 100 == 33.33);
    CHECK(std::round(h.percentages.at(1) * 100) / 100 == 66.67);
    CHECK(h.equal_share_percent == doctest::Approx(100.0 / 3.0));
    CHECK(h.unequal_share_percent == doctest::Approx(200.0 / 3.0));

    const std::vector<Conversation> even{with_c("e1", 8, {2, 3, 4, 5}), with_c("e2", 8, {3, 4, 5, 6})};
    CHECK(transition_share(even).percentages == std::map<std::size_t, double>{{0, 100.0}});

    CHECK_THROWS_AS(transition_share(std::vector<Conversation>{}), EmptyCorpus);
}

TEST_CASE("turns_per_topic_profile") {
    SUBCASE("uneven conversations") {
        // segments [4,6] and [2,6,8]
        const std::vector<Conversation> corpus{with_c("a", 10, {5}), with_c("b", 16, {3, 9})};
        const auto p = turns_per_topic_profile(corpus);
        REQUIRE(p.size() == 3);
        CHECK(p[0].position == 1);
        CHECK(p[0].samples == 2);
        CHECK(p[0].mean == 3.0);
        CHECK(p[0].stddev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK_FALSE(p[0].low_sample);
        CHECK(p[1].mean == 6.0);
        CHECK(p[1].stddev == 0.0);
        CHECK(p[2].samples == 1);
        CHECK(p[2].mean == 8.0);
        CHECK(p[2].stddev == 0.0);
        CHECK(p[2].low_sample);
    }
    SUBCASE("identical segments") {
        const std::vector<Conversation> corpus{with_c("a", 15, {6, 11}), with_c("b", 15, {6, 11})};
        for (const auto& s : turns_per_topic_profile(corpus)) {
            CHECK(s.mean == 5.0);
            CHECK(s.stddev == 0.0);
        }
    }
    CHECK_THROWS_AS(turns_per_topic_profile(std::vector<Conversation>{}), EmptyCorpus);
}

TEST_CASE("property: segment accounting and order invariance") {
    std::mt19937_64 rng(404);
    std::vector<Conversation> corpus;
    for (int i = 0; i < 200; ++i) corpus.push_back(dts::testing::random_conversation(rng, "r" + std::to_string(i)));
    for (const auto& conv : corpus) {
        const auto a = analyze_conversation(conv);
        CHECK(a.turns_per_topic.size() == a.n_transitions + 1);
        CHECK(std::accumulate(a.turns_per_topic.begin(), a.turns_per_topic.end(), std::size_t{0}) == a.length);
        for (auto n : a.turns_per_topic) CHECK(n > 0);
        std::size_t per_speaker = 0;
        for (const auto& [s, n] : a.per_speaker_transitions) per_speaker += n;
        CHECK(per_speaker == a.n_transitions);
    }
    const auto h = transition_share(corpus);
    double total = 0;
    for (const auto& [d, pct] : h.percentages) total += pct;
    CHECK(std::abs(total - 100.0) < 1e-9);
    CHECK(std::abs(h.equal_share_percent + h.unequal_share_percent - 100.0) < 1e-9);

    auto shuffled = corpus;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(transition_share(shuffled).counts == h.counts);
    const auto p1 = turns_per_topic_profile(corpus);
    const auto p2 = turns_per_topic_profile(shuffled);
    REQUIRE(p1.size() == p2.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1[i].samples == p2[i].samples);
        CHECK(p1[i].mean == doctest::Approx(p2[i].mean).epsilon(1e-12));
        CHECK(p1[i].stddev == doctest::Approx(p2[i].stddev).epsilon(1e-12));
    }
    CHECK(length_vs_transitions(shuffled).pearson_r ==
          doctest::Approx(length_vs_transitions(corpus).pearson_r).epsilon(1e-12));
}

TEST_CASE("export_plot_data") {
    TempDir tmp("export");
    std::mt19937_64 rng(8);
    std::vector<Conversation> corpus;
    for (int i = 0; i < 30; ++i) corpus.push_back(dts::testing::random_conversation(rng, "e" + std::to_string(i)));
    corpus.push_back(with_c("needs,quote", 4, {3}));
    const auto analyses = analyze_corpus(corpus);
    export_plot_data(analyses, tmp.path / "out");

    const auto scatter = read_lines(tmp.path / "out" / kScatterCsv);
    REQUIRE(scatter.size() == corpus.size() + 1);
    CHECK(scatter[0] == "length,n_transitions");
    std::vector<double> xs, ys;
    for (std::size_t i = 1; i < scatter.size(); ++i) {
        std::istringstream row(scatter[i]);
        double x, y;
        char comma;
        row >> x >> comma >> y;
        xs.push_back(x);
        ys.push_back(y);
    }
    CHECK(std::abs(pearson(xs, ys) - length_vs_transitions(analyses).pearson_r) < 1e-9);

    const auto share = read_lines(tmp.path / "out" / kShareCsv);
    CHECK(share[0] == "difference,percentage");
    double total = 0;
    for (std::size_t i = 1; i < share.size(); ++i) total += std::stod(share[i].substr(share[i].find(',') + 1));
    CHECK(std::abs(total - 100.0) < 1e-9);

    const auto turns = read_lines(tmp.path / "out" / kTurnsCsv);
    CHECK(turns[0] == "conversation_id,topic_order,n_turns");
    CHECK(turns.back() == "\"needs,quote\",2,2");
    std::size_t segments = 0;
    for (const auto& a : analyses) segments += a.turns_per_topic.size();
    CHECK(turns.size() == segments + 1);

    TempDir two("two");
    export_plot_data(std::span(analyses).first(2), two.path);
    CHECK(read_lines(two.path / kScatterCsv).size() == 3);

    const fs::path blocker = tmp.path / "file";
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(export_plot_data(analyses, blocker / "sub"), IoError);
}

TEST_CASE("summary_report") {
    const std::vector<Conversation> corpus{with_c("a", 10, {5}), with_c("b", 16, {3, 9})};
    const auto j = summary_report(corpus);
    CHECK(j["stats"]["n_conversations"] == 2);
    CHECK(j["length_vs_transitions"]["n"] == 2);
    CHECK(j["turns_per_topic"].size() == 3);

    const std::vector<Conversation> one{with_c("a", 10, {5})};
    const auto k = summary_report(one);
    CHECK(k["length_vs_transitions"]["pearson_r"].is_null());
    CHECK(k["length_vs_transitions"].contains("error"));
}
