#include "dts/analytics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "dts/metrics.hpp"

namespace dts {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

ConversationAnalysis analyze_conversation(const Conversation& conv) {
    ConversationAnalysis a;
    a.conversation_id = conv.id;
    a.length = conv.turns.size();
    for (const auto& s : conv.speakers()) a.per_speaker_transitions[s] = 0;
    for (std::size_t pos = 0; pos < conv.turns.size(); ++pos) {
        const Turn& t = conv.turns[pos];
        if (pos > 0 && t.is_transition()) {
            ++a.n_transitions;
            ++a.per_speaker_transitions[t.speaker];
            a.turns_per_topic.push_back(0);
        }
        if (a.turns_per_topic.empty()) a.turns_per_topic.push_back(0);
        ++a.turns_per_topic.back();
    }
    return a;
}

std::vector<ConversationAnalysis> analyze_corpus(std::span<const Conversation> corpus) {
    std::vector<ConversationAnalysis> out;
    out.reserve(corpus.size());
    for (const auto& c : corpus) out.push_back(analyze_conversation(c));
    return out;
}

LengthTransitions length_vs_transitions(std::span<const ConversationAnalysis> analyses) {
    LengthTransitions out;
    std::vector<double> x, y;
    for (const auto& a : analyses) {
        out.pairs.emplace_back(a.length, a.n_transitions);
        x.push_back(static_cast<double>(a.length));
        y.push_back(static_cast<double>(a.n_transitions));
    }
    out.pearson_r = pearson(x, y);
    return out;
}

LengthTransitions length_vs_transitions(std::span<const Conversation> corpus) {
    return length_vs_transitions(analyze_corpus(corpus));
}

ShareHistogram transition_share(std::span<const ConversationAnalysis> analyses) {
    if (analyses.empty()) throw EmptyCorpus("transition_share needs at least one conversation");
    ShareHistogram h;
    for (const auto& a : analyses) {
        std::vector<std::size_t> c;
        for (const auto& [speaker, n] : a.per_speaker_transitions) c.push_back(n);
        c.resize(std::max<std::size_t>(c.size(), 2), 0);
        const std::size_t d = c[0] > c[1] ? c[0] - c[1] : c[1] - c[0];
        ++h.counts[d];
    }
    const double n = static_cast<double>(analyses.size());
    for (const auto& [d, count] : h.counts) h.percentages[d] = 100.0 * static_cast<double>(count) / n;
    const std::size_t equal = h.counts.contains(0) ? h.counts.at(0) : 0;
    h.equal_share_percent = 100.0 * static_cast<double>(equal) / n;
    h.unequal_share_percent = 100.0 * static_cast<double>(analyses.size() - equal) / n;
    return h;
}

ShareHistogram transition_share(std::span<const Conversation> corpus) {
    return transition_share(analyze_corpus(corpus));
}

std::vector<TopicOrderStats> turns_per_topic_profile(std::span<const ConversationAnalysis> analyses) {
    if (analyses.empty()) throw EmptyCorpus("turns_per_topic_profile needs at least one conversation");
    std::vector<std::vector<double>> by_position;
    for (const auto& a : analyses) {
        if (by_position.size() < a.turns_per_topic.size()) by_position.resize(a.turns_per_topic.size());
        for (std::size_t p = 0; p < a.turns_per_topic.size(); ++p)
            by_position[p].push_back(static_cast<double>(a.turns_per_topic[p]));
    }
    std::vector<TopicOrderStats> out;
    for (std::size_t p = 0; p < by_position.size(); ++p) {
        const auto& v = by_position[p];
        TopicOrderStats s;
        s.position = p + 1;
        s.samples = v.size();
        double sum = 0.0;
        for (double x : v) sum += x;
        s.mean = sum / static_cast<double>(v.size());
        if (v.size() >= 2) {
            double ss = 0.0;
            for (double x : v) ss += (x - s.mean) * (x - s.mean);
            s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
        }
        s.low_sample = v.size() < 2;
        out.push_back(s);
    }
    return out;
}

std::vector<TopicOrderStats> turns_per_topic_profile(std::span<const Conversation> corpus) {
    return turns_per_topic_profile(analyze_corpus(corpus));
}

void export_plot_data(std::span<const ConversationAnalysis> analyses, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::string scatter = "length,n_transitions\n";
    for (const auto& a : analyses)
        scatter += std::to_string(a.length) + "," + std::to_string(a.n_transitions) + "\n";
    write_file(dir / kScatterCsv, scatter);

    std::string share = "difference,percentage\n";
    if (!analyses.empty())
        for (const auto& [d, pct] : transition_share(analyses).percentages)
            share += std::to_string(d) + "," + format_double(pct) + "\n";
    write_file(dir / kShareCsv, share);

    std::string turns = "conversation_id,topic_order,n_turns\n";
    for (const auto& a : analyses)
        for (std::size_t p = 0; p < a.turns_per_topic.size(); ++p)
            turns += csv_field(a.conversation_id) + "," + std::to_string(p + 1) + "," +
                     std::to_string(a.turns_per_topic[p]) + "\n";
    write_file(dir / kTurnsCsv, turns);
}

nlohmann::json summary_report(std::span<const Conversation> corpus) {
    const auto analyses = analyze_corpus(corpus);
    nlohmann::json j;
    j["stats"] = to_json(corpus_stats(corpus));

    nlohmann::json lvt;
    lvt["n"] = analyses.size();
    try {
        lvt["pearson_r"] = length_vs_transitions(analyses).pearson_r;
    } catch (const Error& e) {
        lvt["pearson_r"] = nullptr;
        lvt["error"] = e.kind() + ": " + e.what();
    }
    j["length_vs_transitions"] = lvt;

    const auto share = transition_share(analyses);
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [d, pct] : share.percentages) hist[std::to_string(d)] = pct;
    j["transition_share"] = {{"percentages", hist},
                             {"equal_share_percent", share.equal_share_percent},
                             {"unequal_share_percent", share.unequal_share_percent}};

    auto profile = nlohmann::json::array();
    for (const auto& s : turns_per_topic_profile(analyses))
        profile.push_back({{"position", s.position},
                           {"samples", s.samples},
                           {"mean", s.mean},
                           {"stddev", s.stddev},
                           {"low_sample", s.low_sample}});
    j["turns_per_topic"] = profile;
    return j;
}

}  // namespace dts
