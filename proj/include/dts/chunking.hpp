#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dts/corpus.hpp"

namespace dts {

enum class ChunkLabel { Transition, Continuation };

std::string_view to_string(ChunkLabel label);  // "transition" / "continuation"
std::optional<ChunkLabel> parse_chunk_label(std::string_view text);

// Maximal run of consecutive turns by one speaker; the classification unit.
struct Chunk {
    std::string speaker;
    std::size_t first_turn = 0;  // inclusive, 1-based turn index
    std::size_t last_turn = 0;   // inclusive
    std::string text;            // member utterances joined by a single space
    ChunkLabel gold_label = ChunkLabel::Continuation;

    std::size_t size() const { return last_turn - first_turn + 1; }

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

// A chunk is a Transition iff one of its turns carries C. X, GIL, S and E do
// not influence grouping or labels.
std::vector<Chunk> chunk_conversation(const Conversation& conv);

// Chunk texts joined by "\n\n", no trailing separator. Throws EmptyInput.
std::string chunks_to_tiling_text(std::span<const Chunk> chunks);

nlohmann::json to_json(const Chunk& chunk);
nlohmann::json to_json(std::span<const Chunk> chunks);
Chunk chunk_from_json(const nlohmann::json& j);

// Chunk lists for a whole corpus, keyed by conversation.
struct ConversationChunks {
    std::string conversation_id;
    std::vector<Chunk> chunks;
};

std::vector<ConversationChunks> chunk_corpus(std::span<const Conversation> corpus);

}  // namespace dts
