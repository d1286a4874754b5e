#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dts/errors.hpp"

namespace dts {

// Turn-level annotation labels.
//   S   conversation start
//   E   conversation end
//   GIL greeting / leave-taking
//   C   topic transition
//   X   failed topic transition
enum class Label : std::uint8_t { S, E, GIL, C, X };

inline constexpr Label kAllLabels[] = {Label::S, Label::E, Label::GIL, Label::C, Label::X};

std::string_view to_string(Label label);
// Exact, case-sensitive match. Returns nullopt for anything else.
std::optional<Label> parse_label(std::string_view text);

// Set of labels on a single turn. Duplicates are unrepresentable; iteration
// order is the canonical S, E, GIL, C, X.
class LabelSet {
public:
    LabelSet() = default;
    LabelSet(std::initializer_list<Label> labels) {
        for (Label l : labels) insert(l);
    }

    // Returns false if the label was already present.
    bool insert(Label label) {
        const auto bit = mask(label);
        const bool fresh = (bits_ & bit) == 0;
        bits_ |= bit;
        return fresh;
    }
    bool contains(Label label) const { return (bits_ & mask(label)) != 0; }
    bool empty() const { return bits_ == 0; }
    std::size_t size() const;
    std::vector<Label> to_vector() const;

    friend bool operator==(LabelSet, LabelSet) = default;

private:
    static constexpr std::uint8_t mask(Label l) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(l));
    }
    std::uint8_t bits_ = 0;
};

struct Turn {
    std::size_t index = 0;  // 1-based
    std::string speaker;
    std::string text;
    LabelSet labels;

    bool is_transition() const { return labels.contains(Label::C); }

    friend bool operator==(const Turn&, const Turn&) = default;
};

struct Conversation {
    std::string id;
    std::string source;
    std::vector<Turn> turns;

    // Distinct speakers in order of first appearance.
    std::vector<std::string> speakers() const;

    friend bool operator==(const Conversation&, const Conversation&) = default;
};

// One invariant violation: which rule broke and where (turn 0 = whole conversation).
struct Violation {
    std::string rule;
    std::size_t turn_index = 0;
    std::string message;
};

// Rule names reported in violations.
namespace rules {
inline constexpr std::string_view kEmptyText = "non-empty-text";
inline constexpr std::string_view kIndexSequence = "contiguous-indices";
inline constexpr std::string_view kTwoParty = "two-party";
inline constexpr std::string_view kSingleStart = "single-start";
inline constexpr std::string_view kSingleEnd = "single-end";
inline constexpr std::string_view kStartBeforeEnd = "start-before-end";
}  // namespace rules

// Checks every Turn and Conversation invariant. Empty iff the conversation is valid.
std::vector<Violation> validate(const Conversation& conv);

// Non-fatal observations (currently: missing S or E label).
std::vector<std::string> lint(const Conversation& conv);

// A document parsed without stopping at the first invariant violation.
struct InspectedDocument {
    Conversation conversation;
    std::vector<Violation> violations;  // label problems plus validate()
};

// Throws SchemaError only; every invariant problem lands in `violations`.
InspectedDocument inspect_conversation(const nlohmann::json& doc);

// Parses one transcript document. Throws SchemaError for a malformed
// document and ValidationError for the first invariant violation.
Conversation parse_conversation(std::string_view raw);
Conversation conversation_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Conversation& conv);
std::string serialize_conversation(const Conversation& conv);

// Raw documents of a corpus path, each with a location ("file" or
// "file:line") for error messages. Directory entries are sorted by name.
struct RawDocument {
    std::string location;
    std::string text;
};
std::vector<RawDocument> read_corpus_documents(const std::filesystem::path& path);

// Loads a corpus from a directory of *.json files, a JSON-lines file
// (.jsonl / .ndjson), or a single conversation document. The result is sorted
// by conversation id. Throws IoError when the path cannot be read; schema
// and validation errors are rethrown with the offending file prefixed.
std::vector<Conversation> load_corpus(const std::filesystem::path& path);

struct CorpusStats {
    std::size_t n_conversations = 0;
    std::size_t n_turns = 0;
    std::size_t n_transitions = 0;
    double avg_turns_per_conversation = 0.0;
    double avg_transitions_per_conversation = 0.0;
    // Absent when the corpus has no C-labelled turn.
    std::optional<double> avg_turns_per_transition;
    std::size_t min_turns = 0;
    std::size_t max_turns = 0;
};

// Counts a transition for every turn carrying C; X is not a transition.
// Throws EmptyCorpus on an empty list.
CorpusStats corpus_stats(std::span<const Conversation> corpus);

nlohmann::json to_json(const CorpusStats& stats);
// Five-row summary table, averages rounded to `decimals` places.
std::string format_stats_table(const CorpusStats& stats, int decimals = 2);

}  // namespace dts
