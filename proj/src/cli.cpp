#include "dts/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dts/analytics.hpp"
#include "dts/chunking.hpp"
#include "dts/classifier.hpp"
#include "dts/corpus.hpp"
#include "dts/metrics.hpp"
#include "dts/texttiling.hpp"

namespace dts::cli {

namespace {

using nlohmann::json;

std::string fixed(double v, int decimals = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": malformed JSON: " + e.what());
    }
}

// Writes to --out when given, else to the command's stdout.
class Sink {
public:
    Sink(std::ostream& out, const std::string& path) : out_(out), path_(path) {}

    void write(const std::string& text) const {
        if (path_.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(path_, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + path_);
        f << text;
        f.close();
        if (!f) throw IoError("failed writing " + path_);
    }

private:
    std::ostream& out_;
    std::string path_;
};

struct TilingFlags {
    std::optional<std::size_t> w, k, smoothing_width, smoothing_rounds;
    std::string cutoff_policy;
    std::string stopwords;
    std::string config_file;

    void attach(CLI::App* sub) {
        sub->add_option("--w", w, "Pseudosentence size in tokens");
        sub->add_option("--k", k, "Block size in pseudosentences");
        sub->add_option("--smoothing-width", smoothing_width, "Smoothing window width");
        sub->add_option("--smoothing-rounds", smoothing_rounds, "Number of smoothing passes");
        sub->add_option("--cutoff-policy", cutoff_policy, "mean_minus_half_stddev | mean_minus_stddev")
            ->check(CLI::IsMember({"mean_minus_half_stddev", "mean_minus_stddev"}));
        sub->add_option("--stopwords", stopwords, "Stopword file, one token per line");
        sub->add_option("--config", config_file, "Tiling config JSON");
    }

    // Precedence: flags, then --config, then DTS_STOPWORDS, then built-ins.
    TilingConfig resolve() const {
        TilingConfig cfg;
        if (const char* env = std::getenv("DTS_STOPWORDS"); env && *env) cfg.stopwords = load_stopwords(env);
        if (!config_file.empty()) cfg = tiling_config_from_json(parse_json_file(config_file), cfg);
        if (w) cfg.pseudosentence_size = *w;
        if (k) cfg.block_size = *k;
        if (smoothing_width) cfg.smoothing_width = *smoothing_width;
        if (smoothing_rounds) cfg.smoothing_rounds = *smoothing_rounds;
        if (!cutoff_policy.empty()) cfg.cutoff_policy = *parse_cutoff_policy(cutoff_policy);
        if (!stopwords.empty()) cfg.stopwords = load_stopwords(stopwords);
        cfg.check();
        return cfg;
    }
};

struct SplitFlags {
    std::uint64_t seed = 42;
    std::string split = "0.8/0.1/0.1";

    void attach(CLI::App* sub) {
        sub->add_option("--seed", seed, "Split seed")->capture_default_str();
        sub->add_option("--split", split, "train/valid/test fractions, by conversation")->capture_default_str();
    }
    SplitSpec spec() const { return parse_split(split, seed); }
};

std::vector<Conversation> select_subset(const std::vector<Conversation>& corpus, const std::string& subset,
                                        const SplitFlags& flags) {
    if (subset == "all") return corpus;
    auto parts = split_corpus(corpus, flags.spec());
    if (subset == "train") return parts.train;
    if (subset == "valid") return parts.valid;
    return parts.test;
}

void log_config(std::ostream& err, const std::string& command, const json& config) {
    err << "dts " << command << ": config " << config.dump() << "\n";
}

// Per-conversation predictions, the shared output of `tile` and `predict`.
struct ConversationPredictions {
    std::string id;
    std::vector<Chunk> chunks;
    std::vector<ChunkLabel> predicted;
    std::vector<double> posterior_transition;  // empty for texttiling
    std::optional<std::string> warning;
};

json to_json(const std::vector<ConversationPredictions>& preds) {
    json arr = json::array();
    for (const auto& p : preds) {
        json chunks = json::array();
        for (std::size_t i = 0; i < p.chunks.size(); ++i) {
            json c = dts::to_json(p.chunks[i]);
            c["predicted_label"] = std::string(to_string(p.predicted[i]));
            if (!p.posterior_transition.empty()) c["posterior_transition"] = p.posterior_transition[i];
            chunks.push_back(std::move(c));
        }
        json entry = {{"id", p.id}, {"chunks", std::move(chunks)}};
        if (p.warning) entry["warning"] = *p.warning;
        arr.push_back(std::move(entry));
    }
    return arr;
}

ConfusionMatrix total_confusion(const std::vector<ConversationPredictions>& preds) {
    std::vector<ChunkLabel> gold, pred;
    for (const auto& p : preds) {
        for (const auto& c : p.chunks) gold.push_back(c.gold_label);
        pred.insert(pred.end(), p.predicted.begin(), p.predicted.end());
    }
    return confusion(gold, pred);
}

std::string predictions_csv(const std::vector<ConversationPredictions>& preds) {
    std::string out = "conversation_id,speaker,first_turn,last_turn,gold_label,predicted_label\n";
    for (const auto& p : preds)
        for (std::size_t i = 0; i < p.chunks.size(); ++i) {
            const auto& c = p.chunks[i];
            out += p.id + "," + c.speaker + "," + std::to_string(c.first_turn) + "," + std::to_string(c.last_turn) +
                   "," + std::string(to_string(c.gold_label)) + "," + std::string(to_string(p.predicted[i])) + "\n";
        }
    return out;
}

std::string report_text(const EvalReport& r, const std::string& format) {
    if (format == "json") return to_json(r).dump(2) + "\n";
    if (format == "csv")
        return "model,split,tp,fp,fn,tn,precision,recall,f1\n" + r.model + "," + r.split + "," +
               std::to_string(r.confusion.tp) + "," + std::to_string(r.confusion.fp) + "," +
               std::to_string(r.confusion.fn) + "," + std::to_string(r.confusion.tn) + "," +
               fixed(r.scores.precision) + "," + fixed(r.scores.recall) + "," + fixed(r.scores.f1) + "\n";
    std::ostringstream os;
    os << "Model       split   Precision  Recall  F1\n";
    std::string model = r.model;
    model.resize(std::max<std::size_t>(model.size(), 11), ' ');
    std::string split = r.split;
    split.resize(std::max<std::size_t>(split.size(), 7), ' ');
    os << model << " " << split << " " << fixed(r.scores.precision, 2) << "       " << fixed(r.scores.recall, 2)
       << "    " << fixed(r.scores.f1, 2) << "\n";
    os << "confusion: tp=" << r.confusion.tp << " fp=" << r.confusion.fp << " fn=" << r.confusion.fn
       << " tn=" << r.confusion.tn << "\n";
    return os.str();
}

std::string predictions_table(const std::vector<ConversationPredictions>& preds, const std::string& model) {
    std::ostringstream os;
    for (const auto& p : preds) {
        os << p.id << (p.warning ? "  [" + *p.warning + "]" : std::string()) << "\n";
        for (std::size_t i = 0; i < p.chunks.size(); ++i) {
            const auto& c = p.chunks[i];
            os << "  " << c.first_turn << "-" << c.last_turn << " " << c.speaker << " gold="
               << (c.gold_label == ChunkLabel::Transition ? "T" : "-")
               << " pred=" << (p.predicted[i] == ChunkLabel::Transition ? "T" : "-") << "\n";
        }
    }
    os << "\n" << report_text(make_report(model, "all", total_confusion(preds)), "table");
    return os.str();
}

std::vector<ConversationPredictions> run_tiling(const std::vector<Conversation>& corpus, const TilingConfig& cfg,
                                                std::ostream& err) {
    std::vector<ConversationPredictions> out;
    for (const auto& conv : corpus) {
        ConversationPredictions p;
        p.id = conv.id;
        p.chunks = chunk_conversation(conv);
        auto seg = segment_chunks(p.chunks, cfg);
        p.predicted = std::move(seg.labels);
        p.warning = seg.warning;
        if (p.warning) err << "warning: conversation " << conv.id << ": " << *p.warning << "\n";
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ConversationPredictions> run_nb(const std::vector<ConversationChunks>& groups, const NbModel& model) {
    std::vector<ConversationPredictions> out;
    for (const auto& g : groups) {
        ConversationPredictions p;
        p.id = g.conversation_id;
        p.chunks = g.chunks;
        for (const auto& c : p.chunks) {
            const auto pr = predict_nb(model, c);
            p.predicted.push_back(pr.label);
            p.posterior_transition.push_back(pr.posterior[kTransitionClass]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Chunk groups from either a chunk-list JSON (bare array of chunks, or the
// [{"id","chunks"}] shape that `chunk`, `tile` and `predict` emit) or a corpus path.
std::vector<ConversationChunks> load_chunk_groups(const std::string& path) {
    const bool json_file = std::filesystem::is_regular_file(path) &&
                           std::filesystem::path(path).extension() == ".json";
    if (json_file) {
        const json doc = parse_json_file(path);
        if (doc.is_array()) {
            std::vector<ConversationChunks> groups;
            const bool grouped = !doc.empty() && doc.front().is_object() && doc.front().contains("chunks");
            if (!grouped) {
                ConversationChunks g{std::filesystem::path(path).stem().string(), {}};
                for (const auto& c : doc) g.chunks.push_back(chunk_from_json(c));
                groups.push_back(std::move(g));
                return groups;
            }
            for (const auto& entry : doc) {
                if (!entry.is_object() || !entry.contains("chunks") || !entry["chunks"].is_array())
                    throw SchemaError(path + ": expected objects with a \"chunks\" array");
                ConversationChunks g{entry.value("id", std::string()), {}};
                for (const auto& c : entry["chunks"]) g.chunks.push_back(chunk_from_json(c));
                groups.push_back(std::move(g));
            }
            return groups;
        }
    }
    const auto corpus = load_corpus(path);
    return chunk_corpus(corpus);
}

std::vector<ConversationPredictions> load_predictions(const std::string& path) {
    const json doc = parse_json_file(path);
    if (!doc.is_array()) throw SchemaError(path + ": predictions must be a JSON array");
    std::vector<ConversationPredictions> out;
    auto read_chunks = [&](const json& arr, ConversationPredictions& p) {
        for (const auto& c : arr) {
            p.chunks.push_back(chunk_from_json(c));
            const auto label = c.contains("predicted_label") && c["predicted_label"].is_string()
                                   ? parse_chunk_label(c["predicted_label"].get<std::string>())
                                   : std::nullopt;
            if (!label) throw SchemaError(path + ": chunk without a valid predicted_label");
            p.predicted.push_back(*label);
        }
    };
    const bool grouped = !doc.empty() && doc.front().is_object() && doc.front().contains("chunks");
    if (!grouped) {
        ConversationPredictions p;
        read_chunks(doc, p);
        out.push_back(std::move(p));
        return out;
    }
    for (const auto& entry : doc) {
        ConversationPredictions p;
        p.id = entry.value("id", std::string());
        if (!entry.contains("chunks") || !entry["chunks"].is_array())
            throw SchemaError(path + ": expected objects with a \"chunks\" array");
        read_chunks(entry["chunks"], p);
        out.push_back(std::move(p));
    }
    return out;
}

// --- subcommands ------------------------------------------------------------

int cmd_validate(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
    log_config(err, "validate", {{"paths", paths}});
    bool failed = false;
    for (const auto& path : paths) {
        for (const auto& doc : read_corpus_documents(path)) {
            try {
                json parsed;
                try {
                    parsed = json::parse(doc.text);
                } catch (const json::parse_error& e) {
                    throw SchemaError(std::string("malformed JSON: ") + e.what());
                }
                const auto inspected = inspect_conversation(parsed);
                for (const auto& w : lint(inspected.conversation)) err << "warning: " << doc.location << ": " << w << "\n";
                if (inspected.violations.empty()) {
                    out << "ok " << doc.location << " (" << inspected.conversation.id << ", "
                        << inspected.conversation.turns.size() << " turns)\n";
                    continue;
                }
                failed = true;
                for (const auto& v : inspected.violations) {
                    err << doc.location << ": ";
                    if (v.turn_index) err << "turn " << v.turn_index << ": ";
                    err << "[" << v.rule << "] " << v.message << "\n";
                }
            } catch (const SchemaError& e) {
                failed = true;
                err << doc.location << ": [schema] " << e.what() << "\n";
            }
        }
    }
    return failed ? kExitDataError : kExitOk;
}

int cmd_stats(const std::string& path, const std::string& format, int decimals, const Sink& sink, std::ostream& err) {
    log_config(err, "stats", {{"path", path}, {"format", format}, {"decimals", decimals}});
    const auto corpus = load_corpus(path);
    for (const auto& c : corpus)
        for (const auto& w : lint(c)) err << "warning: " << w << "\n";
    const auto stats = corpus_stats(corpus);
    if (format == "json") {
        sink.write(to_json(stats).dump(2) + "\n");
    } else if (format == "csv") {
        std::string csv = "field,value\n";
        for (const auto& [k, v] : to_json(stats).items()) csv += k + "," + (v.is_null() ? "" : v.dump()) + "\n";
        sink.write(csv);
    } else {
        sink.write(format_stats_table(stats, decimals));
    }
    return kExitOk;
}

int cmd_chunk(const std::string& path, const std::string& format, const Sink& sink, std::ostream& err) {
    log_config(err, "chunk", {{"path", path}, {"format", format}});
    const auto corpus = load_corpus(path);
    const auto groups = chunk_corpus(corpus);
    if (format == "table") {
        std::ostringstream os;
        for (const auto& g : groups) {
            os << g.conversation_id << "\n";
            for (const auto& c : g.chunks)
                os << "  " << c.first_turn << "-" << c.last_turn << " " << c.speaker << " "
                   << (c.gold_label == ChunkLabel::Transition ? "T" : "-") << " " << c.text << "\n";
        }
        sink.write(os.str());
    } else if (format == "csv") {
        std::string csv = "conversation_id,speaker,first_turn,last_turn,gold_label\n";
        for (const auto& g : groups)
            for (const auto& c : g.chunks)
                csv += g.conversation_id + "," + c.speaker + "," + std::to_string(c.first_turn) + "," +
                       std::to_string(c.last_turn) + "," + std::string(to_string(c.gold_label)) + "\n";
        sink.write(csv);
    } else {
        json arr = json::array();
        for (const auto& g : groups) arr.push_back({{"id", g.conversation_id}, {"chunks", to_json(g.chunks)}});
        sink.write(arr.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_tile(const std::string& path, const TilingFlags& flags, const std::string& format, const Sink& sink,
             std::ostream& err) {
    const auto cfg = flags.resolve();
    log_config(err, "tile", {{"path", path}, {"format", format}, {"tiling", to_json(cfg)}});
    const auto preds = run_tiling(load_corpus(path), cfg, err);
    if (format == "csv")
        sink.write(predictions_csv(preds));
    else if (format == "table")
        sink.write(predictions_table(preds, "texttiling"));
    else
        sink.write(to_json(preds).dump(2) + "\n");
    return kExitOk;
}

struct TrainFlags {
    double alpha = 1.0;
    std::size_t min_count = 1;
    bool prior_balance = false;
};

int cmd_train(const std::string& path, const TrainFlags& tf, const SplitFlags& sf, const Sink& sink,
              std::ostream& err) {
    const auto spec = sf.spec();
    log_config(err, "train",
               {{"path", path}, {"alpha", tf.alpha}, {"min_count", tf.min_count}, {"prior_balance", tf.prior_balance},
                {"seed", sf.seed}, {"split", sf.split}});
    const auto corpus = load_corpus(path);
    const auto parts = split_corpus(corpus, spec);
    const auto chunks = chunk_all(parts.train);
    const auto model = train_nb(chunks, TrainOptions{tf.alpha, tf.min_count, tf.prior_balance});
    err << "dts train: " << parts.train.size() << "/" << parts.valid.size() << "/" << parts.test.size()
        << " conversations, " << chunks.size() << " training chunks, vocabulary " << model.vocabulary.size()
        << "\n";
    sink.write(serialize_model(model));
    return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& in, const std::string& format, const Sink& sink,
                std::ostream& err) {
    log_config(err, "predict", {{"model", model_path}, {"in", in}, {"format", format}});
    const auto model = parse_model(read_text_file(model_path));
    const auto preds = run_nb(load_chunk_groups(in), model);
    if (format == "csv")
        sink.write(predictions_csv(preds));
    else if (format == "table")
        sink.write(predictions_table(preds, "naive_bayes"));
    else
        sink.write(to_json(preds).dump(2) + "\n");
    return kExitOk;
}

struct EvalFlags {
    std::string method = "nb";
    std::string model;
    std::string predictions;
    std::string subset = "test";
    std::string report_split;
};

int cmd_eval(const std::optional<std::string>& path, const EvalFlags& ef, const SplitFlags& sf,
             const TilingFlags& tflags, const std::string& format, const Sink& sink, std::ostream& err) {
    std::vector<ConversationPredictions> preds;
    std::string model_name;
    json config = {{"format", format}};
    if (!ef.predictions.empty()) {
        config["predictions"] = ef.predictions;
        log_config(err, "eval", config);
        preds = load_predictions(ef.predictions);
        model_name = "predictions";
    } else {
        if (!path) throw InvalidConfig("eval needs a corpus path or --predictions FILE");
        config.update({{"path", *path}, {"method", ef.method}, {"subset", ef.subset}, {"seed", sf.seed}, {"split", sf.split}});
        const auto corpus = load_corpus(*path);
        if (ef.method == "texttiling") {
            const auto cfg = tflags.resolve();
            config["tiling"] = to_json(cfg);
            log_config(err, "eval", config);
            preds = run_tiling(select_subset(corpus, ef.subset, sf), cfg, err);
            model_name = "texttiling";
        } else {
            if (ef.model.empty()) throw InvalidConfig("eval --method nb needs --model FILE");
            config["model"] = ef.model;
            log_config(err, "eval", config);
            const auto model = parse_model(read_text_file(ef.model));
            const auto subset = select_subset(corpus, ef.subset, sf);
            preds = run_nb(chunk_corpus(subset), model);
            model_name = "naive_bayes";
        }
    }
    const std::string split = ef.report_split.empty() ? (ef.predictions.empty() ? ef.subset : "all") : ef.report_split;
    sink.write(report_text(make_report(model_name, split, total_confusion(preds)), format));
    return kExitOk;
}

int cmd_kappa(const std::string& a_path, const std::string& b_path, const std::string& level,
              const std::string& format, const Sink& sink, std::ostream& err) {
    log_config(err, "kappa", {{"a", a_path}, {"b", b_path}, {"level", level}, {"format", format}});
    const auto a = load_corpus(a_path);
    const auto b = load_corpus(b_path);
    if (a.size() != b.size()) throw LengthMismatch("annotations cover different numbers of conversations");

    std::vector<ChunkLabel> la, lb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].id != b[i].id)
            throw LengthMismatch("conversation " + a[i].id + " has no counterpart in the second annotation");
        if (a[i].turns.size() != b[i].turns.size())
            throw LengthMismatch("conversation " + a[i].id + " has different turn counts in the two annotations");
        if (level == "turn") {
            for (std::size_t t = 0; t < a[i].turns.size(); ++t) {
                la.push_back(a[i].turns[t].is_transition() ? ChunkLabel::Transition : ChunkLabel::Continuation);
                lb.push_back(b[i].turns[t].is_transition() ? ChunkLabel::Transition : ChunkLabel::Continuation);
            }
        } else {
            const auto ca = chunk_conversation(a[i]);
            const auto cb = chunk_conversation(b[i]);
            if (ca.size() != cb.size())
                throw LengthMismatch("conversation " + a[i].id + " chunks differently in the two annotations");
            for (std::size_t c = 0; c < ca.size(); ++c) {
                la.push_back(ca[c].gold_label);
                lb.push_back(cb[c].gold_label);
            }
        }
    }
    const double kappa = cohen_kappa(la, lb);
    if (format == "json")
        sink.write(json{{"level", level}, {"n_items", la.size()}, {"kappa", kappa}}.dump(2) + "\n");
    else if (format == "csv")
        sink.write("level,n_items,kappa\n" + level + "," + std::to_string(la.size()) + "," + fixed(kappa, 6) + "\n");
    else
        sink.write("Cohen's kappa (" + level + " level, " + std::to_string(la.size()) + " items): " + fixed(kappa) + "\n");
    return kExitOk;
}

int cmd_analyze(const std::string& path, const std::string& out_dir, const std::string& format, std::ostream& out,
                std::ostream& err) {
    log_config(err, "analyze", {{"path", path}, {"out", out_dir}, {"format", format}});
    const auto corpus = load_corpus(path);
    const auto analyses = analyze_corpus(corpus);
    const auto summary = summary_report(corpus);
    if (!out_dir.empty()) {
        export_plot_data(analyses, out_dir);
        const Sink file(out, (std::filesystem::path(out_dir) / "summary.json").string());
        file.write(summary.dump(2) + "\n");
    }
    if (format == "json") {
        out << summary.dump(2) << "\n";
        return kExitOk;
    }
    out << format_stats_table(corpus_stats(corpus)) << "\n";
    const auto& lvt = summary["length_vs_transitions"];
    out << "Pearson r (length vs transitions): "
        << (lvt["pearson_r"].is_null() ? std::string("undefined") : fixed(lvt["pearson_r"].get<double>()))
        << "\n";
    const auto& share = summary["transition_share"];
    out << "Equal transition share: " << fixed(share["equal_share_percent"].get<double>(), 2)
        << "%, unequal: " << fixed(share["unequal_share_percent"].get<double>(), 2) << "%\n";
    out << "Transition difference histogram:\n";
    for (const auto& [d, pct] : share["percentages"].items()) out << "  " << d << ": " << fixed(pct.get<double>(), 2) << "%\n";
    out << "Turns per topic by order (position: mean +/- sd, n):\n";
    for (const auto& s : summary["turns_per_topic"])
        out << "  " << s["position"].get<std::size_t>() << ": " << fixed(s["mean"].get<double>(), 2) << " +/- "
            << fixed(s["stddev"].get<double>(), 2) << ", n=" << s["samples"].get<std::size_t>()
            << (s["low_sample"].get<bool>() ? " (low sample)" : "") << "\n";
    return kExitOk;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const InvalidConfig*>(&e)) return kExitUsageError;
    return kExitDataError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dialog topic-transition toolkit", "dts"};
    app.require_subcommand(1);

    std::string format = "table";
    std::string out_path;
    auto add_common = [&](CLI::App* sub, std::vector<std::string> formats) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
        sub->add_option("--out", out_path, "Write the report to FILE instead of stdout");
    };

    std::vector<std::string> paths;
    auto* validate_cmd = app.add_subcommand("validate", "Check transcript files against the schema and invariants");
    validate_cmd->add_option("paths", paths, "Transcript files, JSON-lines files or directories")->required();

    std::string corpus_path;
    int decimals = 2;
    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
    stats_cmd->add_option("corpus", corpus_path, "Corpus path")->required();
    stats_cmd->add_option("--decimals", decimals, "Decimal places for averages in table output")->capture_default_str();
    add_common(stats_cmd, {"table", "json", "csv"});

    auto* chunk_cmd = app.add_subcommand("chunk", "Group turns into same-speaker chunks with gold labels");
    chunk_cmd->add_option("corpus", corpus_path, "Corpus path")->required();
    add_common(chunk_cmd, {"json", "csv", "table"});

    TilingFlags tiling;
    auto* tile_cmd = app.add_subcommand("tile", "Predict transition chunks with TextTiling");
    tile_cmd->add_option("corpus", corpus_path, "Corpus path")->required();
    tiling.attach(tile_cmd);
    add_common(tile_cmd, {"json", "csv", "table"});

    TrainFlags train_flags;
    SplitFlags split_flags;
    auto* train_cmd = app.add_subcommand("train", "Train the Naive Bayes transition classifier");
    train_cmd->add_option("corpus", corpus_path, "Corpus path")->required();
    train_cmd->add_option("--alpha", train_flags.alpha, "Laplace smoothing constant")->capture_default_str();
    train_cmd->add_option("--min-count", train_flags.min_count, "Minimum token count for the vocabulary")
        ->capture_default_str();
    train_cmd->add_flag("--prior-balance", train_flags.prior_balance, "Use uniform class priors");
    split_flags.attach(train_cmd);
    train_cmd->add_option("--out", out_path, "Model file (stdout if omitted)");

    std::string model_path, in_path;
    auto* predict_cmd = app.add_subcommand("predict", "Label chunks with a trained model");
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    predict_cmd->add_option("--in", in_path, "Corpus path or chunk-list JSON")->required();
    add_common(predict_cmd, {"json", "csv", "table"});

    EvalFlags eval_flags;
    std::optional<std::string> eval_path;
    auto* eval_cmd = app.add_subcommand("eval", "Precision / recall / F1 against gold chunk labels");
    eval_cmd->add_option("corpus", eval_path, "Corpus path");
    eval_cmd->add_option("--method", eval_flags.method, "nb | texttiling")
        ->check(CLI::IsMember({"nb", "texttiling"}))
        ->capture_default_str();
    eval_cmd->add_option("--model", eval_flags.model, "Model file for --method nb");
    eval_cmd->add_option("--predictions", eval_flags.predictions, "Score an existing predictions file instead");
    eval_cmd->add_option("--subset", eval_flags.subset, "train | valid | test | all")
        ->check(CLI::IsMember({"train", "valid", "test", "all"}))
        ->capture_default_str();
    eval_cmd->add_option("--report-split", eval_flags.report_split, "Name written to the report's split field");
    split_flags.attach(eval_cmd);
    tiling.attach(eval_cmd);
    add_common(eval_cmd, {"table", "json", "csv"});

    std::string kappa_a, kappa_b, level = "chunk";
    auto* kappa_cmd = app.add_subcommand("kappa", "Cohen's kappa between two annotations of the same conversations");
    kappa_cmd->add_option("a", kappa_a, "First annotation (corpus path)")->required();
    kappa_cmd->add_option("b", kappa_b, "Second annotation (corpus path)")->required();
    kappa_cmd->add_option("--level", level, "chunk | turn")
        ->check(CLI::IsMember({"chunk", "turn"}))
        ->capture_default_str();
    add_common(kappa_cmd, {"table", "json", "csv"});

    auto* analyze_cmd = app.add_subcommand("analyze", "Corpus studies and plot data export");
    analyze_cmd->add_option("corpus", corpus_path, "Corpus path")->required();
    analyze_cmd->add_option("--out", out_path, "Directory for the CSV files and summary.json");
    analyze_cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    const Sink sink(out, out_path);
    try {
        if (validate_cmd->parsed()) return cmd_validate(paths, out, err);
        if (stats_cmd->parsed()) return cmd_stats(corpus_path, format, decimals, sink, err);
        if (chunk_cmd->parsed()) return cmd_chunk(corpus_path, format, sink, err);
        if (tile_cmd->parsed()) return cmd_tile(corpus_path, tiling, format, sink, err);
        if (train_cmd->parsed()) return cmd_train(corpus_path, train_flags, split_flags, sink, err);
        if (predict_cmd->parsed())
            return cmd_predict(model_path, in_path, format, sink, err);
        if (eval_cmd->parsed()) return cmd_eval(eval_path, eval_flags, split_flags, tiling, format, sink, err);
        if (kappa_cmd->parsed()) return cmd_kappa(kappa_a, kappa_b, level, format, sink, err);
        if (analyze_cmd->parsed()) return cmd_analyze(corpus_path, out_path, format, out, err);
    } catch (const Error& e) {
        err << "dts: " << e.kind() << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "dts: error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitUsageError;
}

}  // namespace dts::cli
