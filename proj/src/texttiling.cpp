#include "dts/texttiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace dts {

namespace {

bool is_token_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

using Counts = std::unordered_map<std::size_t, double>;

double cosine(const Counts& a, const Counts& b) {
    const Counts& small = a.size() <= b.size() ? a : b;
    const Counts& large = a.size() <= b.size() ? b : a;
    double dot = 0.0;
    for (const auto& [id, n] : small)
        if (auto it = large.find(id); it != large.end()) dot += n * it->second;
    double na = 0.0, nb = 0.0;
    for (const auto& [id, n] : a) na += n * n;
    for (const auto& [id, n] : b) nb += n * n;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::string collapse_newlines(std::string_view text) {
    std::string out(text);
    std::replace_if(out.begin(), out.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
    // A blank chunk would merge its two separators into one break.
    if (std::all_of(out.begin(), out.end(), [](char c) { return is_space(static_cast<unsigned char>(c)); }))
        out.push_back('.');
    return out;
}

}  // namespace

std::string_view to_string(CutoffPolicy policy) {
    return policy == CutoffPolicy::MeanMinusStddev ? "mean_minus_stddev" : "mean_minus_half_stddev";
}

std::optional<CutoffPolicy> parse_cutoff_policy(std::string_view text) {
    if (text == "mean_minus_half_stddev") return CutoffPolicy::MeanMinusHalfStddev;
    if (text == "mean_minus_stddev") return CutoffPolicy::MeanMinusStddev;
    return std::nullopt;
}

void TilingConfig::check() const {
    if (pseudosentence_size < 1) throw InvalidConfig("pseudosentence size must be >= 1");
    if (block_size < 1) throw InvalidConfig("block size must be >= 1");
    if (smoothing_width < 1) throw InvalidConfig("smoothing width must be >= 1");
}

TilingConfig tiling_config_from_json(const nlohmann::json& j, TilingConfig base) {
    if (!j.is_object()) throw SchemaError("tiling config must be a JSON object");
    auto read_size = [&](const char* key, std::size_t& field) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_number_integer() || it->get<long long>() < 0)
                throw SchemaError(std::string("tiling config: \"") + key + "\" must be a non-negative integer");
            field = it->get<std::size_t>();
        }
    };
    read_size("pseudosentence_size", base.pseudosentence_size);
    read_size("block_size", base.block_size);
    read_size("smoothing_width", base.smoothing_width);
    read_size("smoothing_rounds", base.smoothing_rounds);
    if (auto it = j.find("cutoff_policy"); it != j.end()) {
        const auto policy = it->is_string() ? parse_cutoff_policy(it->get<std::string>()) : std::nullopt;
        if (!policy) throw SchemaError("tiling config: unknown cutoff_policy");
        base.cutoff_policy = *policy;
    }
    if (auto it = j.find("stopwords_file"); it != j.end()) {
        if (!it->is_string()) throw SchemaError("tiling config: stopwords_file must be a string");
        base.stopwords = load_stopwords(it->get<std::string>());
    }
    base.check();
    return base;
}

nlohmann::json to_json(const TilingConfig& c) {
    return {{"pseudosentence_size", c.pseudosentence_size},
            {"block_size", c.block_size},
            {"smoothing_width", c.smoothing_width},
            {"smoothing_rounds", c.smoothing_rounds},
            {"cutoff_policy", std::string(to_string(c.cutoff_policy))},
            {"n_stopwords", c.stopwords.size()}};
}

TokenStream tokenize_normalize(std::string_view text, const StopwordSet& stopwords) {
    TokenStream out;
    std::string current;
    std::size_t newlines = 0;
    bool break_recorded = false;

    auto flush = [&] {
        if (current.empty()) return;
        if (!stopwords.contains(current)) out.tokens.push_back(current);
        current.clear();
    };

    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_token_char(c)) {
            current.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
            newlines = 0;
            break_recorded = false;
            continue;
        }
        flush();
        if (c == '\n') {
            if (++newlines >= 2 && !break_recorded) {
                out.paragraph_breaks.push_back(out.tokens.size());
                break_recorded = true;
            }
        } else if (!is_space(c)) {
            newlines = 0;
            break_recorded = false;
        }
    }
    flush();
    return out;
}

std::vector<double> gap_scores(std::span<const std::string> tokens, const TilingConfig& config) {
    config.check();
    const std::size_t w = config.pseudosentence_size;
    const std::size_t n_ps = (tokens.size() + w - 1) / w;
    if (n_ps < 2)
        throw TooShort("need at least 2 pseudosentences of " + std::to_string(w) + " tokens, got " +
                       std::to_string(tokens.size()) + " tokens");

    std::unordered_map<std::string_view, std::size_t> ids;
    std::vector<Counts> ps(n_ps);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto id = ids.try_emplace(tokens[i], ids.size()).first->second;
        ps[i / w][id] += 1.0;
    }

    const std::size_t k = config.block_size;
    std::vector<double> sims;
    sims.reserve(n_ps - 1);
    for (std::size_t gap = 0; gap + 1 < n_ps; ++gap) {
        Counts left, right;
        const std::size_t lo = gap + 1 >= k ? gap + 1 - k : 0;
        for (std::size_t i = lo; i <= gap; ++i)
            for (const auto& [id, n] : ps[i]) left[id] += n;
        const std::size_t hi = std::min(n_ps - 1, gap + k);
        for (std::size_t i = gap + 1; i <= hi; ++i)
            for (const auto& [id, n] : ps[i]) right[id] += n;
        sims.push_back(cosine(left, right));
    }
    return sims;
}

std::vector<double> smooth_scores(std::span<const double> scores, const TilingConfig& config) {
    config.check();
    std::vector<double> cur(scores.begin(), scores.end());
    const std::size_t radius = config.smoothing_width / 2;
    if (radius == 0 || cur.empty()) return cur;
    for (std::size_t round = 0; round < config.smoothing_rounds; ++round) {
        std::vector<double> next(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const std::size_t lo = i >= radius ? i - radius : 0;
            const std::size_t hi = std::min(cur.size() - 1, i + radius);
            double sum = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) sum += cur[j];
            next[i] = sum / static_cast<double>(hi - lo + 1);
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> depth_scores(std::span<const double> similarities, const TilingConfig& config) {
    const auto s = smooth_scores(similarities, config);
    std::vector<double> depths(s.size(), 0.0);
    for (std::size_t g = 0; g < s.size(); ++g) {
        double lpeak = s[g];
        for (std::size_t i = g; i-- > 0;) {
            if (s[i] >= lpeak)
                lpeak = s[i];
            else
                break;
        }
        double rpeak = s[g];
        for (std::size_t i = g + 1; i < s.size(); ++i) {
            if (s[i] >= rpeak)
                rpeak = s[i];
            else
                break;
        }
        depths[g] = (lpeak - s[g]) + (rpeak - s[g]);
    }
    return depths;
}

std::vector<std::size_t> detect_boundaries(std::span<const double> depths, const TilingConfig& config) {
    if (depths.empty()) return {};
    const double n = static_cast<double>(depths.size());
    const double mean = std::accumulate(depths.begin(), depths.end(), 0.0) / n;
    double var = 0.0;
    for (double d : depths) var += (d - mean) * (d - mean);
    const double stddev = std::sqrt(var / n);
    const double cutoff =
        config.cutoff_policy == CutoffPolicy::MeanMinusStddev ? mean - stddev : mean - stddev / 2.0;

    std::vector<std::size_t> boundaries;
    std::optional<std::size_t> run_best;
    for (std::size_t g = 0; g < depths.size(); ++g) {
        const bool qualifies = depths[g] > 0.0 && depths[g] > cutoff;
        if (qualifies) {
            if (!run_best || depths[g] > depths[*run_best]) run_best = g;
        } else if (run_best) {
            boundaries.push_back(*run_best);
            run_best.reset();
        }
    }
    if (run_best) boundaries.push_back(*run_best);
    return boundaries;
}

GapScores score_gaps(std::span<const std::string> tokens, const TilingConfig& config) {
    GapScores out;
    out.similarities = gap_scores(tokens, config);
    out.smoothed = smooth_scores(out.similarities, config);
    out.depths = depth_scores(out.similarities, config);
    out.boundaries = detect_boundaries(out.depths, config);
    return out;
}

SegmentResult segment_chunks(std::span<const Chunk> chunks, const TilingConfig& config) {
    if (chunks.empty()) throw EmptyInput("segment_chunks needs at least one chunk");
    config.check();

    SegmentResult result;
    result.labels.assign(chunks.size(), ChunkLabel::Continuation);
    if (chunks.size() < 2) {
        result.warning = "TooShort: a single chunk has no break to predict";
        return result;
    }

    // Turn text may itself contain blank lines; those would add spurious
    // paragraph breaks, so chunk texts are flattened first.
    std::vector<Chunk> flat(chunks.begin(), chunks.end());
    for (auto& c : flat) c.text = collapse_newlines(c.text);
    const auto stream = tokenize_normalize(chunks_to_tiling_text(flat), config.stopwords);

    try {
        result.scores = score_gaps(stream.tokens, config);
    } catch (const TooShort& e) {
        result.warning = std::string("TooShort: ") + e.what();
        return result;
    }

    // paragraph_breaks[i] is the token offset where chunk i ends. The last
    // chunk has no break after it, so boundaries past the final break drop.
    const auto& breaks = stream.paragraph_breaks;
    for (std::size_t gap : result.scores->boundaries) {
        const auto pos = gap_token_position(gap, config);
        const auto it = std::lower_bound(breaks.begin(), breaks.end(), pos);
        if (it == breaks.end()) continue;
        const auto chunk = static_cast<std::size_t>(it - breaks.begin());
        if (result.labels[chunk] == ChunkLabel::Transition) continue;
        result.labels[chunk] = ChunkLabel::Transition;
        result.transition_chunks.push_back(chunk);
    }
    return result;
}

}  // namespace dts
