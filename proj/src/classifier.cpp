#include "dts/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dts/texttiling.hpp"

namespace dts {

namespace {

// Unbiased draw in [0, bound) from a 64-bit engine. Written out rather than
// using std::uniform_int_distribution so splits agree across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::size_t min_count)
    : tokens_(std::move(tokens)), min_count_(min_count) {
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i)
        if (!index_.emplace(tokens_[i], i).second) throw SchemaError("duplicate vocabulary token \"" + tokens_[i] + "\"");
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view token) const {
    if (auto it = index_.find(std::string(token)); it != index_.end()) return it->second;
    return std::nullopt;
}

std::vector<std::string> classifier_tokens(std::string_view text) {
    return tokenize_normalize(text, StopwordSet{}).tokens;
}

Vocabulary build_vocabulary(std::span<const Chunk> chunks, std::size_t min_count) {
    if (chunks.empty()) throw EmptyInput("build_vocabulary needs at least one chunk");
    std::map<std::string, std::size_t> counts;
    for (const auto& c : chunks)
        for (auto& tok : classifier_tokens(c.text)) ++counts[std::move(tok)];
    std::vector<std::string> kept;
    for (const auto& [tok, n] : counts)
        if (n >= min_count) kept.push_back(tok);
    if (kept.empty())
        throw EmptyVocabulary("no token occurs at least " + std::to_string(min_count) + " times");
    return Vocabulary(std::move(kept), min_count);
}

BowVector featurize(std::string_view text, const Vocabulary& vocab) {
    BowVector v;
    for (const auto& tok : classifier_tokens(text))
        if (auto idx = vocab.index_of(tok)) ++v[*idx];
    return v;
}

NbModel train_nb(std::span<const Chunk> train, const Vocabulary& vocab, const TrainOptions& options) {
    if (!(options.alpha > 0.0) || !std::isfinite(options.alpha))
        throw InvalidAlpha("alpha must be a finite value > 0, got " + std::to_string(options.alpha));
    if (train.empty()) throw EmptyInput("train_nb needs at least one chunk");
    if (vocab.empty()) throw EmptyVocabulary("train_nb needs a non-empty vocabulary");

    std::array<std::size_t, kNumClasses> docs{};
    std::array<std::vector<double>, kNumClasses> counts;
    for (auto& c : counts) c.assign(vocab.size(), 0.0);
    for (const auto& chunk : train) {
        const auto slot = class_slot(chunk.gold_label);
        ++docs[slot];
        for (const auto& [idx, n] : featurize(chunk, vocab)) counts[slot][idx] += static_cast<double>(n);
    }
    if (docs[kTransitionClass] == 0 || docs[kContinuationClass] == 0)
        throw SingleClass("training data must contain both transition and continuation chunks");

    NbModel model;
    model.alpha = options.alpha;
    model.vocabulary = vocab;
    const double total_docs = static_cast<double>(train.size());
    const double v = static_cast<double>(vocab.size());
    for (std::size_t slot = 0; slot < kNumClasses; ++slot) {
        model.class_log_priors[slot] = options.prior_balance
                                           ? std::log(1.0 / static_cast<double>(kNumClasses))
                                           : std::log(static_cast<double>(docs[slot]) / total_docs);
        const double total = std::accumulate(counts[slot].begin(), counts[slot].end(), 0.0);
        const double denom = total + options.alpha * v;
        auto& ll = model.token_log_likelihoods[slot];
        ll.resize(vocab.size());
        for (std::size_t t = 0; t < vocab.size(); ++t) ll[t] = std::log((counts[slot][t] + options.alpha) / denom);
    }
    return model;
}

NbModel train_nb(std::span<const Chunk> train, const TrainOptions& options) {
    return train_nb(train, build_vocabulary(train, options.min_count), options);
}

Prediction predict_nb(const NbModel& model, const BowVector& features) {
    std::array<double, kNumClasses> log_post = model.class_log_priors;
    for (std::size_t slot = 0; slot < kNumClasses; ++slot)
        for (const auto& [idx, n] : features)
            log_post[slot] += static_cast<double>(n) * model.token_log_likelihoods[slot].at(idx);

    const double norm = log_sum_exp(log_post[0], log_post[1]);
    Prediction p;
    for (std::size_t slot = 0; slot < kNumClasses; ++slot) p.posterior[slot] = std::exp(log_post[slot] - norm);
    p.label = log_post[kTransitionClass] > log_post[kContinuationClass] ? ChunkLabel::Transition
                                                                        : ChunkLabel::Continuation;
    return p;
}

Prediction predict_nb(const NbModel& model, const Chunk& chunk) {
    return predict_nb(model, featurize(chunk, model.vocabulary));
}

nlohmann::json to_json(const NbModel& m) {
    nlohmann::json j;
    j["alpha"] = m.alpha;
    j["classes"] = {std::string(to_string(slot_label(0))), std::string(to_string(slot_label(1)))};
    j["log_priors"] = m.class_log_priors;
    j["vocabulary"] = m.vocabulary.tokens();
    j["min_count"] = m.vocabulary.min_count();
    j["log_likelihoods"] = m.token_log_likelihoods;
    return j;
}

NbModel model_from_json(const nlohmann::json& j) {
    try {
        NbModel m;
        m.alpha = j.at("alpha").get<double>();
        if (!(m.alpha > 0.0)) throw InvalidAlpha("model alpha must be > 0");
        const auto classes = j.at("classes").get<std::vector<std::string>>();
        if (classes != std::vector<std::string>{"transition", "continuation"})
            throw SchemaError("model classes must be [\"transition\",\"continuation\"]");
        const auto priors = j.at("log_priors").get<std::vector<double>>();
        if (priors.size() != kNumClasses) throw SchemaError("model needs two log priors");
        std::copy(priors.begin(), priors.end(), m.class_log_priors.begin());
        const std::size_t min_count = j.contains("min_count") ? j.at("min_count").get<std::size_t>() : 1;
        m.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>(), min_count);
        const auto ll = j.at("log_likelihoods").get<std::vector<std::vector<double>>>();
        if (ll.size() != kNumClasses) throw SchemaError("model needs two likelihood rows");
        for (std::size_t slot = 0; slot < kNumClasses; ++slot) {
            if (ll[slot].size() != m.vocabulary.size())
                throw SchemaError("likelihood row length does not match vocabulary size");
            m.token_log_likelihoods[slot] = ll[slot];
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed model file: ") + e.what());
    }
}

std::string serialize_model(const NbModel& model) { return to_json(model).dump(1) + "\n"; }

NbModel parse_model(std::string_view raw) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed model file: ") + e.what());
    }
    return model_from_json(j);
}

namespace {

void check_fractions(const SplitSpec& spec) {
    for (double f : {spec.train, spec.valid, spec.test})
        if (!(f > 0.0) || !std::isfinite(f)) throw InvalidConfig("split fractions must be positive");
    if (std::abs(spec.train + spec.valid + spec.test - 1.0) > 1e-9)
        throw InvalidConfig("split fractions must sum to 1");
}

}  // namespace

SplitSpec parse_split(std::string_view text, std::uint64_t seed) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const auto slash = text.find('/', start);
        const std::string piece(text.substr(start, slash == std::string_view::npos ? slash : slash - start));
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(piece, &used));
            if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw InvalidConfig("split must look like A/B/C with numeric fractions, got \"" + std::string(text) + "\"");
        }
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    if (parts.size() != 3) throw InvalidConfig("split needs exactly three fractions A/B/C");
    SplitSpec spec{parts[0], parts[1], parts[2], seed};
    check_fractions(spec);
    return spec;
}

CorpusSplit split_corpus(std::span<const Conversation> corpus, const SplitSpec& spec) {
    check_fractions(spec);

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return corpus[a].id < corpus[b].id; });
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);

    const auto n = static_cast<long long>(corpus.size());
    const long long n_train = std::llround(static_cast<double>(n) * spec.train);
    const long long n_valid = std::llround(static_cast<double>(n) * spec.valid);
    const long long n_test = n - n_train - n_valid;
    if (n_train < 1 || n_valid < 1 || n_test < 1)
        throw TooSmall("cannot split " + std::to_string(n) + " conversations into non-empty train/valid/test parts");

    CorpusSplit out;
    for (long long i = 0; i < n; ++i) {
        const auto& conv = corpus[order[static_cast<std::size_t>(i)]];
        if (i < n_train)
            out.train.push_back(conv);
        else if (i < n_train + n_valid)
            out.valid.push_back(conv);
        else
            out.test.push_back(conv);
    }
    return out;
}

std::vector<Chunk> chunk_all(std::span<const Conversation> corpus) {
    std::vector<Chunk> out;
    for (const auto& conv : corpus) {
        auto chunks = chunk_conversation(conv);
        out.insert(out.end(), std::make_move_iterator(chunks.begin()), std::make_move_iterator(chunks.end()));
    }
    return out;
}

}  // namespace dts
