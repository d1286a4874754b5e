#include "dts/chunking.hpp"

namespace dts {

std::string_view to_string(ChunkLabel label) {
    return label == ChunkLabel::Transition ? "transition" : "continuation";
}

std::optional<ChunkLabel> parse_chunk_label(std::string_view text) {
    if (text == "transition") return ChunkLabel::Transition;
    if (text == "continuation") return ChunkLabel::Continuation;
    return std::nullopt;
}

std::vector<Chunk> chunk_conversation(const Conversation& conv) {
    std::vector<Chunk> chunks;
    for (const Turn& turn : conv.turns) {
        if (chunks.empty() || chunks.back().speaker != turn.speaker) {
            Chunk c;
            c.speaker = turn.speaker;
            c.first_turn = turn.index;
            c.last_turn = turn.index;
            c.text = turn.text;
            chunks.push_back(std::move(c));
        } else {
            Chunk& c = chunks.back();
            c.last_turn = turn.index;
            c.text += ' ';
            c.text += turn.text;
        }
        if (turn.is_transition()) chunks.back().gold_label = ChunkLabel::Transition;
    }
    return chunks;
}

std::string chunks_to_tiling_text(std::span<const Chunk> chunks) {
    if (chunks.empty()) throw EmptyInput("chunks_to_tiling_text needs at least one chunk");
    std::string doc = chunks.front().text;
    for (std::size_t i = 1; i < chunks.size(); ++i) {
        doc += "\n\n";
        doc += chunks[i].text;
    }
    return doc;
}

nlohmann::json to_json(const Chunk& c) {
    return {{"speaker", c.speaker},
            {"first_turn", c.first_turn},
            {"last_turn", c.last_turn},
            {"text", c.text},
            {"gold_label", std::string(to_string(c.gold_label))}};
}

nlohmann::json to_json(std::span<const Chunk> chunks) {
    auto out = nlohmann::json::array();
    for (const auto& c : chunks) out.push_back(to_json(c));
    return out;
}

Chunk chunk_from_json(const nlohmann::json& j) {
    try {
        Chunk c;
        c.speaker = j.at("speaker").get<std::string>();
        c.first_turn = j.at("first_turn").get<std::size_t>();
        c.last_turn = j.at("last_turn").get<std::size_t>();
        c.text = j.at("text").get<std::string>();
        const auto label = parse_chunk_label(j.at("gold_label").get<std::string>());
        if (!label) throw SchemaError("unknown gold_label");
        c.gold_label = *label;
        if (c.first_turn == 0 || c.first_turn > c.last_turn)
            throw SchemaError("chunk turn range is invalid");
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed chunk: ") + e.what());
    }
}

std::vector<ConversationChunks> chunk_corpus(std::span<const Conversation> corpus) {
    std::vector<ConversationChunks> out;
    out.reserve(corpus.size());
    for (const auto& conv : corpus) out.push_back({conv.id, chunk_conversation(conv)});
    return out;
}

}  // namespace dts
