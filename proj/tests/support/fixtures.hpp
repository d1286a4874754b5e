#pragma once

// Synthetic corpora shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "dts/corpus.hpp"

namespace dts::testing {

struct TurnSpec {
    std::string speaker;
    std::string text;
    LabelSet labels;
};

inline Conversation make_conversation(std::string id, const std::vector<TurnSpec>& turns,
                                      std::string source = "fixture") {
    Conversation c{std::move(id), std::move(source), {}};
    for (std::size_t i = 0; i < turns.size(); ++i)
        c.turns.push_back({i + 1, turns[i].speaker, turns[i].text, turns[i].labels});
    return c;
}

inline std::string word(const std::string& prefix, std::size_t i) {
    return prefix + "q" + std::to_string(i);
}

inline std::string random_text(std::mt19937_64& rng, const std::string& prefix, std::size_t vocab,
                               std::size_t min_len, std::size_t max_len) {
    const std::size_t len = min_len + rng() % (max_len - min_len + 1);
    std::string out;
    for (std::size_t i = 0; i < len; ++i) {
        if (i) out += ' ';
        out += word(prefix, rng() % vocab);
    }
    return out;
}

// Valid two-party conversation of 2..max_turns turns with random speaker runs
// and random C / X labels (a C may land on turn 1).
inline Conversation random_conversation(std::mt19937_64& rng, const std::string& id, std::size_t max_turns = 60) {
    const std::size_t n = 2 + rng() % (max_turns - 1);
    std::vector<TurnSpec> turns;
    std::string speaker = rng() % 2 ? "A" : "B";
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && rng() % 3 != 0) speaker = speaker == "A" ? "B" : "A";
        if (i == n - 1 && std::all_of(turns.begin(), turns.end(), [&](const TurnSpec& t) { return t.speaker == speaker; }))
            speaker = speaker == "A" ? "B" : "A";
        LabelSet labels;
        if (rng() % 6 == 0) labels.insert(Label::C);
        if (rng() % 15 == 0) labels.insert(Label::X);
        if (i == 0) labels.insert(Label::S);
        if (i == n - 1) labels.insert(Label::E);
        turns.push_back({speaker, random_text(rng, "w", 30, 1, 8), labels});
    }
    return make_conversation(id, turns);
}

// Chunks alternate speakers; transition chunks draw every token from one
// 20-word vocabulary and continuation chunks from a disjoint one.
inline std::vector<Conversation> separable_corpus(std::uint64_t seed, std::size_t n_conversations = 50) {
    std::mt19937_64 rng(seed);
    std::vector<Conversation> corpus;
    for (std::size_t c = 0; c < n_conversations; ++c) {
        std::vector<TurnSpec> turns;
        const std::size_t n_chunks = 12 + rng() % 12;
        std::vector<bool> transition(n_chunks);
        for (std::size_t k = 1; k < n_chunks; ++k) transition[k] = rng() % 4 == 0;
        if (std::find(transition.begin(), transition.end(), true) == transition.end()) transition[1] = true;
        for (std::size_t k = 0; k < n_chunks; ++k) {
            const std::string speaker = k % 2 ? "B" : "A";
            const std::size_t n_turns = 1 + rng() % 3;
            for (std::size_t t = 0; t < n_turns; ++t) {
                LabelSet labels;
                if (transition[k] && t == 0) labels.insert(Label::C);
                turns.push_back({speaker, random_text(rng, transition[k] ? "shift" : "stay", 20, 3, 10), labels});
            }
        }
        turns.front().labels.insert(Label::S);
        turns.back().labels.insert(Label::E);
        char id[32];
        std::snprintf(id, sizeof id, "sep%03zu", c);
        auto conv = make_conversation(id, turns);
        corpus.push_back(std::move(conv));
    }
    return corpus;
}

struct TwoTopicConversation {
    Conversation conversation;
    std::size_t break_chunk = 0;  // index of the first chunk of the second topic
};

// One turn per chunk, strictly alternating speakers. Topic one uses 50 words,
// topic two a disjoint 50 words; each topic spans `min_chunks`.. chunks.
inline TwoTopicConversation two_topic_conversation(std::mt19937_64& rng, const std::string& id,
                                                   std::size_t min_chunks = 6, std::size_t max_chunks = 10) {
    const std::size_t first = min_chunks + rng() % (max_chunks - min_chunks + 1);
    const std::size_t second = min_chunks + rng() % (max_chunks - min_chunks + 1);
    std::vector<TurnSpec> turns;
    for (std::size_t k = 0; k < first + second; ++k) {
        LabelSet labels;
        if (k == first) labels.insert(Label::C);
        turns.push_back({k % 2 ? "B" : "A", random_text(rng, k < first ? "alpha" : "omega", 50, 10, 30), labels});
    }
    return {make_conversation(id, turns), first};
}

}  // namespace dts::testing
