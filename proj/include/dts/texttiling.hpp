#pragma once

// Lexical-cohesion segmentation (TextTiling) over chunk paragraphs.
//
// The document is tokenized, cut into pseudosentences of `pseudosentence_size`
// tokens, and every gap between adjacent pseudosentences is scored by the
// cosine similarity of the term-frequency vectors of the `block_size`
// pseudosentences on either side (blocks are truncated at the ends). The
// similarity curve is smoothed, each gap gets a depth score (rise to the
// nearest peak on the left plus rise to the nearest peak on the right), and
// gaps deeper than a cutoff derived from the depth distribution become
// boundaries. Boundaries are finally snapped forward to the next chunk break:
// the chunk closing each tile is predicted as a topic transition.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dts/chunking.hpp"
#include "dts/stopwords.hpp"

namespace dts {

enum class CutoffPolicy {
    MeanMinusHalfStddev,  // conservative (default)
    MeanMinusStddev,      // liberal
};

std::string_view to_string(CutoffPolicy policy);
std::optional<CutoffPolicy> parse_cutoff_policy(std::string_view text);

struct TilingConfig {
    std::size_t pseudosentence_size = 20;
    std::size_t block_size = 10;
    std::size_t smoothing_width = 2;
    std::size_t smoothing_rounds = 1;
    CutoffPolicy cutoff_policy = CutoffPolicy::MeanMinusHalfStddev;
    StopwordSet stopwords = default_stopwords();

    // Throws InvalidConfig when a size parameter is zero.
    void check() const;
};

// Reads the numeric/policy fields; keys that are absent keep `base` values.
// An optional "stopwords_file" key loads a stopword list.
TilingConfig tiling_config_from_json(const nlohmann::json& j, TilingConfig base = {});
nlohmann::json to_json(const TilingConfig& config);

// Lowercased alphanumeric tokens. `paragraph_breaks[i]` is the number of
// tokens preceding the i-th blank-line separator.
struct TokenStream {
    std::vector<std::string> tokens;
    std::vector<std::size_t> paragraph_breaks;
};

// Splits on every character that is not an ASCII letter or digit (bytes
// >= 0x80 are kept inside tokens so UTF-8 words survive), lowercases, and
// drops stopwords. A line break followed by optional blanks and another line
// break marks one paragraph break.
TokenStream tokenize_normalize(std::string_view text, const StopwordSet& stopwords = {});

// One cosine similarity per gap between adjacent pseudosentences.
// Throws TooShort if fewer than two pseudosentences can be formed.
std::vector<double> gap_scores(std::span<const std::string> tokens, const TilingConfig& config);

// Centered moving average over smoothing_width/2 neighbours on each side
// (truncated at the ends), applied smoothing_rounds times.
std::vector<double> smooth_scores(std::span<const double> scores, const TilingConfig& config);

// Smooths, then scores each gap by (left peak - s) + (right peak - s). A peak
// is found by climbing while the neighbour is not lower; at an edge the peak
// is the gap's own value.
std::vector<double> depth_scores(std::span<const double> similarities, const TilingConfig& config);

// Gaps whose depth is positive and strictly above the cutoff. A run of
// adjacent qualifying gaps (one pseudosentence apart) collapses to its deepest
// member, earliest on ties.
std::vector<std::size_t> detect_boundaries(std::span<const double> depths, const TilingConfig& config);

struct GapScores {
    std::vector<double> similarities;
    std::vector<double> smoothed;
    std::vector<double> depths;
    std::vector<std::size_t> boundaries;
};

GapScores score_gaps(std::span<const std::string> tokens, const TilingConfig& config);

// Token offset at which gap `gap` sits: the end of pseudosentence `gap`.
inline std::size_t gap_token_position(std::size_t gap, const TilingConfig& config) {
    return (gap + 1) * config.pseudosentence_size;
}

struct SegmentResult {
    std::vector<ChunkLabel> labels;             // one per chunk
    std::vector<std::size_t> transition_chunks; // chunk positions (0-based) predicted Transition
    std::optional<GapScores> scores;            // absent when the input was too short
    std::optional<std::string> warning;
};

// Never throws TooShort: a too-short conversation is labelled all
// Continuation and `warning` says why. The conversation's last chunk is never
// predicted Transition.
SegmentResult segment_chunks(std::span<const Chunk> chunks, const TilingConfig& config);

}  // namespace dts
