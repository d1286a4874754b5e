#include "dts/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dts {

namespace {

using nlohmann::json;

bool is_blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    });
}

const json& require(const json& obj, const char* key, json::value_t type, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where + ": missing field \"" + key + "\"");
    const bool ok = type == json::value_t::number_integer
                        ? (it->is_number_integer())
                        : it->type() == type;
    if (!ok) throw SchemaError(where + ": field \"" + key + "\" has wrong type");
    return *it;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return buf.str();
}

[[noreturn]] void rethrow_with_location(const std::string& where) {
    try {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(e.rule(), e.turn_index(), where + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

}  // namespace

std::string_view to_string(Label label) {
    switch (label) {
        case Label::S: return "S";
        case Label::E: return "E";
        case Label::GIL: return "GIL";
        case Label::C: return "C";
        case Label::X: return "X";
    }
    return "?";
}

std::optional<Label> parse_label(std::string_view text) {
    for (Label l : kAllLabels)
        if (to_string(l) == text) return l;
    return std::nullopt;
}

std::size_t LabelSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Label> LabelSet::to_vector() const {
    std::vector<Label> out;
    for (Label l : kAllLabels)
        if (contains(l)) out.push_back(l);
    return out;
}

std::vector<std::string> Conversation::speakers() const {
    std::vector<std::string> out;
    for (const auto& t : turns)
        if (std::find(out.begin(), out.end(), t.speaker) == out.end()) out.push_back(t.speaker);
    return out;
}

std::vector<Violation> validate(const Conversation& conv) {
    std::vector<Violation> out;
    auto add = [&](std::string_view rule, std::size_t turn, std::string msg) {
        out.push_back({std::string(rule), turn, std::move(msg)});
    };

    std::optional<std::size_t> start_turn, end_turn;
    for (std::size_t pos = 0; pos < conv.turns.size(); ++pos) {
        const Turn& t = conv.turns[pos];
        // Compared against the predecessor so one gap yields one violation.
        const std::size_t expected = pos == 0 ? 1 : conv.turns[pos - 1].index + 1;
        if (t.index != expected) {
            add(rules::kIndexSequence, expected,
                "expected turn index " + std::to_string(expected) + " but found " +
                    std::to_string(t.index) + " (gap or disorder at index " +
                    std::to_string(expected) + ")");
        }
        if (is_blank(t.text))
            add(rules::kEmptyText, t.index, "turn " + std::to_string(t.index) + " has empty text");
        if (t.labels.contains(Label::S)) {
            if (start_turn)
                add(rules::kSingleStart, t.index,
                    "second S label at turn " + std::to_string(t.index) + " (first at turn " +
                        std::to_string(*start_turn) + ")");
            else
                start_turn = t.index;
        }
        if (t.labels.contains(Label::E)) {
            if (end_turn)
                add(rules::kSingleEnd, t.index,
                    "second E label at turn " + std::to_string(t.index) + " (first at turn " +
                        std::to_string(*end_turn) + ")");
            else
                end_turn = t.index;
        }
    }
    if (start_turn && end_turn && !(*start_turn < *end_turn)) {
        add(rules::kStartBeforeEnd, *end_turn,
            "E label at turn " + std::to_string(*end_turn) + " does not follow S label at turn " +
                std::to_string(*start_turn));
    }

    const auto speakers = conv.speakers();
    if (speakers.size() != 2) {
        add(rules::kTwoParty, 0,
            "conversation must have exactly two speakers, found " +
                std::to_string(speakers.size()));
    }
    return out;
}

std::vector<std::string> lint(const Conversation& conv) {
    std::vector<std::string> out;
    auto has = [&](Label l) {
        return std::any_of(conv.turns.begin(), conv.turns.end(),
                           [l](const Turn& t) { return t.labels.contains(l); });
    };
    if (!has(Label::S)) out.push_back("conversation " + conv.id + " has no S label");
    if (!has(Label::E)) out.push_back("conversation " + conv.id + " has no E label");
    return out;
}

InspectedDocument inspect_conversation(const json& doc) {
    if (!doc.is_object()) throw SchemaError("document is not a JSON object");
    InspectedDocument out;
    Conversation& conv = out.conversation;
    conv.id = require(doc, "id", json::value_t::string, "document").get<std::string>();
    const std::string where = "conversation " + conv.id;
    conv.source = require(doc, "source", json::value_t::string, where).get<std::string>();
    const json& turns = require(doc, "turns", json::value_t::array, where);

    conv.turns.reserve(turns.size());
    for (std::size_t pos = 0; pos < turns.size(); ++pos) {
        const json& jt = turns[pos];
        const std::string twhere = where + " turn #" + std::to_string(pos + 1);
        if (!jt.is_object()) throw SchemaError(twhere + ": turn is not an object");
        Turn t;
        const auto raw_index = require(jt, "index", json::value_t::number_integer, twhere).get<std::int64_t>();
        if (raw_index < 1) throw SchemaError(twhere + ": index must be a positive integer");
        t.index = static_cast<std::size_t>(raw_index);
        t.speaker = require(jt, "speaker", json::value_t::string, twhere).get<std::string>();
        t.text = require(jt, "text", json::value_t::string, twhere).get<std::string>();
        for (const json& jl : require(jt, "labels", json::value_t::array, twhere)) {
            if (!jl.is_string()) throw SchemaError(twhere + ": label is not a string");
            const auto name = jl.get<std::string>();
            const auto label = parse_label(name);
            const std::string at = "turn " + std::to_string(t.index);
            if (!label)
                out.violations.push_back({"known-label", t.index, at + " has unknown label \"" + name + "\""});
            else if (!t.labels.insert(*label))
                out.violations.push_back({"unique-labels", t.index, at + " repeats label \"" + name + "\""});
        }
        conv.turns.push_back(std::move(t));
    }

    auto more = validate(conv);
    out.violations.insert(out.violations.end(), more.begin(), more.end());
    return out;
}

Conversation conversation_from_json(const json& doc) {
    auto inspected = inspect_conversation(doc);
    if (!inspected.violations.empty()) {
        const Violation& v = inspected.violations.front();
        throw ValidationError(v.rule, v.turn_index, v.message + " [" + v.rule + "]");
    }
    return std::move(inspected.conversation);
}

Conversation parse_conversation(std::string_view raw) {
    json doc;
    try {
        doc = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    return conversation_from_json(doc);
}

json to_json(const Conversation& conv) {
    json turns = json::array();
    for (const Turn& t : conv.turns) {
        json labels = json::array();
        for (Label l : t.labels.to_vector()) labels.push_back(std::string(to_string(l)));
        turns.push_back({{"index", t.index}, {"speaker", t.speaker}, {"text", t.text}, {"labels", labels}});
    }
    return {{"id", conv.id}, {"source", conv.source}, {"turns", turns}};
}

std::string serialize_conversation(const Conversation& conv) { return to_json(conv).dump(); }

std::vector<RawDocument> read_corpus_documents(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::exists(path, ec)) throw IoError("no such file or directory: " + path.string());

    std::vector<RawDocument> docs;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path, ec))
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        if (ec) throw IoError("cannot list " + path.string() + ": " + ec.message());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) docs.push_back({f.string(), read_file(f)});
        return docs;
    }

    auto raw = read_file(path);
    const auto ext = path.extension();
    if (ext == ".jsonl" || ext == ".ndjson") {
        std::istringstream lines(raw);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(lines, line)) {
            ++lineno;
            if (!is_blank(line)) docs.push_back({path.string() + ":" + std::to_string(lineno), line});
        }
    } else {
        docs.push_back({path.string(), std::move(raw)});
    }
    return docs;
}

std::vector<Conversation> load_corpus(const std::filesystem::path& path) {
    std::vector<Conversation> corpus;
    for (const auto& doc : read_corpus_documents(path)) {
        try {
            corpus.push_back(parse_conversation(doc.text));
        } catch (const Error&) {
            rethrow_with_location(doc.location);
        }
    }
    std::stable_sort(corpus.begin(), corpus.end(),
                     [](const Conversation& a, const Conversation& b) { return a.id < b.id; });
    return corpus;
}

CorpusStats corpus_stats(std::span<const Conversation> corpus) {
    if (corpus.empty()) throw EmptyCorpus("corpus_stats needs at least one conversation");
    CorpusStats s;
    s.n_conversations = corpus.size();
    s.min_turns = corpus.front().turns.size();
    s.max_turns = s.min_turns;
    for (const auto& conv : corpus) {
        const auto n = conv.turns.size();
        s.n_turns += n;
        s.min_turns = std::min(s.min_turns, n);
        s.max_turns = std::max(s.max_turns, n);
        s.n_transitions += static_cast<std::size_t>(
            std::count_if(conv.turns.begin(), conv.turns.end(), [](const Turn& t) { return t.is_transition(); }));
    }
    const auto convs = static_cast<double>(s.n_conversations);
    s.avg_turns_per_conversation = static_cast<double>(s.n_turns) / convs;
    s.avg_transitions_per_conversation = static_cast<double>(s.n_transitions) / convs;
    if (s.n_transitions > 0)
        s.avg_turns_per_transition = static_cast<double>(s.n_turns) / static_cast<double>(s.n_transitions);
    return s;
}

json to_json(const CorpusStats& s) {
    json out = {
        {"n_conversations", s.n_conversations},
        {"n_turns", s.n_turns},
        {"n_transitions", s.n_transitions},
        {"avg_turns_per_conversation", s.avg_turns_per_conversation},
        {"avg_transitions_per_conversation", s.avg_transitions_per_conversation},
        {"avg_turns_per_transition", nullptr},
        {"min_turns", s.min_turns},
        {"max_turns", s.max_turns},
    };
    if (s.avg_turns_per_transition) out["avg_turns_per_transition"] = *s.avg_turns_per_transition;
    return out;
}

std::string format_stats_table(const CorpusStats& s, int decimals) {
    auto fixed = [decimals](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        return std::string(buf);
    };
    auto row = [](std::string_view name, const std::string& value) {
        std::string line(name);
        line.resize(44, ' ');
        return line + "| " + value + "\n";
    };
    std::string out;
    out += row("No. conversations", std::to_string(s.n_conversations));
    out += row("No. total turns", std::to_string(s.n_turns));
    out += row("Avg. turns per conversation", fixed(s.avg_turns_per_conversation));
    out += row("Avg. topics transitions per conversation", fixed(s.avg_transitions_per_conversation));
    out += row("Avg. turns per topic transitions",
               s.avg_turns_per_transition ? fixed(*s.avg_turns_per_transition) : std::string("n/a"));
    out += "\n";
    out += row("Shortest conversation (turns)", std::to_string(s.min_turns));
    out += row("Longest conversation (turns)", std::to_string(s.max_turns));
    return out;
}

}  // namespace dts
