#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dts/chunking.hpp"

namespace dts {

class Vocabulary {
public:
    Vocabulary() = default;
    // Tokens must be unique; their order defines the indices.
    Vocabulary(std::vector<std::string> tokens, std::size_t min_count);

    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::size_t min_count() const { return min_count_; }
    std::optional<std::size_t> index_of(std::string_view token) const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t min_count_ = 1;
};

// Sparse term counts keyed by vocabulary index. Only non-zero counts are stored.
using BowVector = std::map<std::size_t, std::size_t>;

// Classifier tokens: the tiling tokenizer with no stopword removal.
std::vector<std::string> classifier_tokens(std::string_view text);

// Lexicographically ordered tokens seen at least `min_count` times across the
// chunk texts. Throws EmptyInput / EmptyVocabulary.
Vocabulary build_vocabulary(std::span<const Chunk> chunks, std::size_t min_count = 1);

BowVector featurize(std::string_view text, const Vocabulary& vocab);
inline BowVector featurize(const Chunk& chunk, const Vocabulary& vocab) { return featurize(chunk.text, vocab); }

// Class slots used throughout the model, matching the model file's "classes".
inline constexpr std::size_t kTransitionClass = 0;
inline constexpr std::size_t kContinuationClass = 1;
inline constexpr std::size_t kNumClasses = 2;

inline std::size_t class_slot(ChunkLabel label) {
    return label == ChunkLabel::Transition ? kTransitionClass : kContinuationClass;
}
inline ChunkLabel slot_label(std::size_t slot) {
    return slot == kTransitionClass ? ChunkLabel::Transition : ChunkLabel::Continuation;
}

// Multinomial Naive Bayes over raw term counts.
struct NbModel {
    double alpha = 1.0;
    std::array<double, kNumClasses> class_log_priors{};
    std::array<std::vector<double>, kNumClasses> token_log_likelihoods;
    Vocabulary vocabulary;
};

struct TrainOptions {
    double alpha = 1.0;
    std::size_t min_count = 1;
    // Replace the frequency priors with a uniform prior.
    bool prior_balance = false;
};

// likelihood(t | c) = (count(t, c) + alpha) / (tokens(c) + alpha * |V|).
// Throws InvalidAlpha (alpha <= 0 or not finite), SingleClass, EmptyInput.
NbModel train_nb(std::span<const Chunk> train, const Vocabulary& vocab, const TrainOptions& options = {});
// Builds the vocabulary from `train` with options.min_count first.
NbModel train_nb(std::span<const Chunk> train, const TrainOptions& options = {});

struct Prediction {
    ChunkLabel label = ChunkLabel::Continuation;
    std::array<double, kNumClasses> posterior{};  // indexed by class slot, sums to 1
};

// Ties go to Continuation. An empty feature vector falls back to the priors.
Prediction predict_nb(const NbModel& model, const BowVector& features);
Prediction predict_nb(const NbModel& model, const Chunk& chunk);

nlohmann::json to_json(const NbModel& model);
NbModel model_from_json(const nlohmann::json& j);
std::string serialize_model(const NbModel& model);
NbModel parse_model(std::string_view raw);

struct SplitSpec {
    double train = 0.8;
    double valid = 0.1;
    double test = 0.1;
    std::uint64_t seed = 42;
};

// Parses "A/B/C" fractions (e.g. "0.8/0.1/0.1"). Throws InvalidConfig.
SplitSpec parse_split(std::string_view text, std::uint64_t seed);

struct CorpusSplit {
    std::vector<Conversation> train;
    std::vector<Conversation> valid;
    std::vector<Conversation> test;
};

// Orders conversations by id, shuffles with the seed, then cuts by fraction
// (train and valid sizes rounded to nearest, test takes the rest). Whole
// conversations only. Throws InvalidConfig for bad fractions and TooSmall
// when any part would be empty.
CorpusSplit split_corpus(std::span<const Conversation> corpus, const SplitSpec& spec);

// Chunks of every conversation, concatenated in order.
std::vector<Chunk> chunk_all(std::span<const Conversation> corpus);

}  // namespace dts
