#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dts/corpus.hpp"

namespace dts {

// Per-conversation view used by the corpus studies. Topic segments start at
// the first turn and at every C turn; a C on turn 1 opens the first segment
// rather than transitioning away from one, so it is not counted as a
// transition here. With that, turns_per_topic has n_transitions + 1 entries,
// none of them zero, summing to length.
struct ConversationAnalysis {
    std::string conversation_id;
    std::size_t length = 0;
    std::size_t n_transitions = 0;
    std::map<std::string, std::size_t> per_speaker_transitions;  // every speaker present, zeros included
    std::vector<std::size_t> turns_per_topic;
};

ConversationAnalysis analyze_conversation(const Conversation& conv);
std::vector<ConversationAnalysis> analyze_corpus(std::span<const Conversation> corpus);

struct LengthTransitions {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (length, n_transitions), input order
    double pearson_r = 0.0;
};

// Propagates pearson's errors (fewer than 2 conversations, constant column).
LengthTransitions length_vs_transitions(std::span<const ConversationAnalysis> analyses);
LengthTransitions length_vs_transitions(std::span<const Conversation> corpus);

// Distribution of |transitions(speaker 1) - transitions(speaker 2)|.
struct ShareHistogram {
    std::map<std::size_t, std::size_t> counts;
    std::map<std::size_t, double> percentages;  // sums to 100
    double equal_share_percent = 0.0;           // d = 0
    double unequal_share_percent = 0.0;         // d >= 1
};

// Throws EmptyCorpus.
ShareHistogram transition_share(std::span<const ConversationAnalysis> analyses);
ShareHistogram transition_share(std::span<const Conversation> corpus);

struct TopicOrderStats {
    std::size_t position = 0;  // 1-based topic order
    std::size_t samples = 0;   // conversations with at least `position` topics
    double mean = 0.0;
    double stddev = 0.0;       // sample (n-1) form; 0 for a single sample
    bool low_sample = false;   // samples < 2
};

// One entry per topic position up to the longest conversation. Throws EmptyCorpus.
std::vector<TopicOrderStats> turns_per_topic_profile(std::span<const ConversationAnalysis> analyses);
std::vector<TopicOrderStats> turns_per_topic_profile(std::span<const Conversation> corpus);

inline constexpr const char* kScatterCsv = "fig2_scatter.csv";
inline constexpr const char* kShareCsv = "fig3_share.csv";
inline constexpr const char* kTurnsCsv = "fig4_turns.csv";

// Writes fig2_scatter.csv, fig3_share.csv and fig4_turns.csv into `dir`
// (created if missing). Throws IoError.
void export_plot_data(std::span<const ConversationAnalysis> analyses, const std::filesystem::path& dir);

// Corpus statistics plus the three study results.
nlohmann::json summary_report(std::span<const Conversation> corpus);

}  // namespace dts
