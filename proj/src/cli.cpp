#include "memini/cli.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "memini/errors.hpp"
#include "memini/event_log.hpp"
#include "memini/strings.hpp"

namespace memini {

namespace {

using nlohmann::json;

// Maps library errors onto the exit-code contract: 2 for bad user
// input (arguments, queries, unknown pairs), 1 for operational
// failures (I/O, network, malformed files).
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const EmptySeedError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const NotFound& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitOperationalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitOperationalError;
    }
}

EntityGraph load_snapshot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open snapshot " + path);
    return EntityGraph::read_snapshot(in);
}

// Write-temp-then-rename so a concurrent reader never sees a partially
// written snapshot or event log.
void write_text_file(const std::string& path, const std::string& text,
                     const char* what) {
    std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw LoadError(std::string("cannot write ") + what + " " + path);
        out << text;
        if (!out.good()) {
            throw LoadError(std::string("write failure on ") + what + " " + path);
        }
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        throw LoadError(std::string("cannot finalize ") + what + " " + path + ": " +
                        ec.message());
    }
}

std::uint32_t resolve_horizon(const RunConfig& config,
                              std::span<const CooccurrenceEvent> events) {
    if (config.horizon > 0) return static_cast<std::uint32_t>(config.horizon);
    try {
        StreamManifest manifest = load_manifest_file(config.manifest);
        if (!manifest.empty()) return static_cast<std::uint32_t>(manifest.size());
    } catch (const Error&) {
        // fall back to the event log's extent
    }
    std::uint32_t max_doc = 0;
    for (const CooccurrenceEvent& e : events) max_doc = std::max(max_doc, e.doc_index);
    return events.empty() ? 0 : max_doc + 1;
}

void print_ranked(std::ostream& out, const RetrievalResult& result) {
    out << "seeds:";
    for (const std::string& s : result.seeds) out << ' ' << s;
    out << '\n';
    if (!result.skipped_entities.empty()) {
        out << "skipped:";
        for (const std::string& s : result.skipped_entities) out << ' ' << s;
        out << '\n';
    }
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        const RankedNode& node = result.ranked[i];
        out << (i + 1) << ". " << node.label << ' ' << format_real(node.activation)
            << " [";
        for (std::size_t p = 0; p < node.passages.size(); ++p) {
            if (p > 0) out << ' ';
            out << 'd' << node.passages[p].doc_index << ".s"
                << node.passages[p].sentence_index;
        }
        out << "]\n";
    }
}

json ranked_to_json(const QueryOptions& options, const RetrievalResult& result) {
    json j;
    j["query"] = options.text;
    j["seeds"] = result.seeds;
    j["skipped"] = result.skipped_entities;
    j["results"] = json::array();
    for (const RankedNode& node : result.ranked) {
        json passages = json::array();
        for (const PassageRef& p : node.passages) {
            passages.push_back({{"doc", p.doc_index}, {"sentence", p.sentence_index}});
        }
        j["results"].push_back({{"label", node.label},
                                {"activation", node.activation},
                                {"passages", std::move(passages)}});
    }
    return j;
}

constexpr std::array<PatternGroup, 4> kGroupOrder = {
    PatternGroup::repeated_old, PatternGroup::few_old,
    PatternGroup::repeated_recent, PatternGroup::few_recent};

void print_ablation_human(std::ostream& out, const AblationTable& table) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-18s %5s %10s %10s %10s", "pattern", "N",
                  "coupled", "single", "uniform");
    out << line << '\n';
    for (PatternGroup group : kGroupOrder) {
        const AblationRow& row = table.row(group);
        std::snprintf(line, sizeof(line), "%-18s %5zu %10.3f %10.3f %10.3f",
                      std::string(pattern_group_name(group)).c_str(), row.pair_count,
                      row.coupled_mean, row.single_mean, row.uniform_mean);
        out << line << '\n';
    }
    out << "excluded pairs: " << table.excluded_count << '\n';
}

void print_ablation_csv(std::ostream& out, const AblationTable& table) {
    out << "group,pair_count,coupled_mean,single_mean,uniform_mean\n";
    for (PatternGroup group : kGroupOrder) {
        const AblationRow& row = table.row(group);
        out << pattern_group_name(group) << ',' << row.pair_count << ','
            << format_real(row.coupled_mean) << ',' << format_real(row.single_mean)
            << ',' << format_real(row.uniform_mean) << '\n';
    }
    out << "excluded," << table.excluded_count << ",,,\n";
}

}  // namespace

int cmd_fetch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        config.validate();
        if (config.stream_mode() == StreamMode::fixture) {
            err << "error: fetch is not applicable in fixture mode\n";
            return kExitUserError;
        }
        StreamManifest manifest = load_manifest_file(config.manifest);
        RevisionFetcher fetcher(config.fetch_options());
        for (const ManifestRow& row : manifest) {
            DocumentSource source = DocumentSource::network;
            std::string wikitext;
            try {
                wikitext = fetcher.fetch(row.revision_id, &source);
            } catch (const Error& e) {
                err << "step " << row.step << " failed: " << e.what() << "\n";
                return kExitOperationalError;
            }
            out << "step " << row.step << " revision " << row.revision_id << ": "
                << (source == DocumentSource::cache ? "cache" : "network") << " ("
                << wikitext.size() << " bytes)\n";
        }
        return kExitOk;
    });
}

int cmd_ingest(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        config.validate();
        StreamManifest manifest = load_manifest_file(config.manifest);
        EntityLexicon lexicon = EntityLexicon::load_file(config.lexicon);
        std::vector<Document> documents =
            load_stream(manifest, config.stream_options());

        EntityGraph graph;
        std::vector<CooccurrenceEvent> events;
        std::size_t total_events = 0;
        for (const Document& doc : documents) {
            IngestReport report =
                ingest_document(graph, doc.plain_text, lexicon, config.dynamics,
                                config.direction(), &events);
            total_events += report.event_count;
            out << "step " << report.doc_index << " \"" << doc.title
                << "\": sentences=" << report.sentence_count
                << " events=" << report.event_count
                << " new_nodes=" << report.new_node_count
                << " new_edges=" << report.new_edge_count << '\n';
        }

        write_text_file(config.snapshot, graph.snapshot_string(), "snapshot");
        std::ostringstream log;
        write_event_log(log, events);
        write_text_file(config.event_log, log.str(), "event log");

        out << "ingested " << documents.size() << " documents: "
            << graph.node_count() << " nodes, " << graph.edge_count()
            << " directed edges, " << total_events << " pair events\n";
        out << "snapshot: " << config.snapshot << "\nevent log: " << config.event_log
            << '\n';
        return kExitOk;
    });
}

int cmd_query(const RunConfig& config, const QueryOptions& options,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        config.validate();
        EntityGraph graph = load_snapshot_file(config.snapshot);
        EntityLexicon lexicon = EntityLexicon::load_file(config.lexicon);
        RetrievalResult result =
            retrieve(graph, options.text, lexicon, config.retrieval);
        if (options.json) {
            out << ranked_to_json(options, result).dump(2) << '\n';
        } else {
            print_ranked(out, result);
        }
        return kExitOk;
    });
}

int cmd_ablate(const RunConfig& config, const AblateOptions& options,
               std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        config.validate();
        std::vector<CooccurrenceEvent> events =
            load_event_log_file(config.event_log);
        std::vector<PairRecord> records = build_pair_records(events);
        std::uint32_t horizon = resolve_horizon(config, events);
        AblationTable table =
            ablation_table(records, horizon, config.dynamics, config.thresholds);
        if (options.csv) {
            print_ablation_csv(out, table);
        } else {
            print_ablation_human(out, table);
        }
        return kExitOk;
    });
}

int cmd_trajectory(const RunConfig& config, const TrajectoryOptions& options,
                   std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        config.validate();
        std::vector<MemoryModel> models;
        if (options.models.empty()) {
            models = {MemoryModel::coupled, MemoryModel::single, MemoryModel::uniform};
        } else {
            for (const std::string& name : options.models) {
                models.push_back(parse_model_name(name));
            }
        }

        std::vector<CooccurrenceEvent> events =
            load_event_log_file(config.event_log);

        // Accept lexicon aliases ("delta" for "delta variant") when the
        // label resolves to exactly one entity; otherwise use it as-is.
        std::optional<EntityLexicon> lexicon;
        try {
            lexicon = EntityLexicon::load_file(config.lexicon);
        } catch (const Error&) {
            // no usable lexicon: raw labels only
        }
        auto resolve = [&](const std::string& label) {
            std::string canonical = canonical_label(label);
            if (lexicon) {
                std::set<std::string> matched = match_entities(canonical, *lexicon);
                if (matched.size() == 1) return *matched.begin();
            }
            return canonical;
        };
        std::string a = resolve(options.label_a);
        std::string b = resolve(options.label_b);
        if (a > b) std::swap(a, b);

        std::vector<PairRecord> records = build_pair_records(events);
        const PairRecord* record = nullptr;
        for (const PairRecord& r : records) {
            if (r.label_a == a && r.label_b == b) {
                record = &r;
                break;
            }
        }
        if (record == nullptr) {
            throw NotFound("pair (" + a + ", " + b + ") has no events in " +
                           config.event_log);
        }
        std::uint32_t horizon = resolve_horizon(config, events);
        export_trajectory(out, record->event_steps, horizon, config.dynamics, models);
        return kExitOk;
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    RunConfig config;
    QueryOptions query_options;
    AblateOptions ablate_options;
    TrajectoryOptions trajectory_options;

    CLI::App app{"memini: an associative memory that learns from a document stream"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");

    app.add_option("--manifest", config.manifest, "document stream manifest")
        ->capture_default_str();
    app.add_option("--lexicon", config.lexicon, "entity lexicon file")
        ->capture_default_str();
    app.add_option("--cache_dir", config.cache_dir, "revision cache directory")
        ->capture_default_str();
    app.add_option("--fixtures_dir", config.fixtures_dir,
                   "bundled fixture directory")
        ->capture_default_str();
    app.add_option("--snapshot", config.snapshot, "graph snapshot path")
        ->capture_default_str();
    app.add_option("--event_log", config.event_log, "event log path")
        ->capture_default_str();
    app.add_option("--mode", config.mode, "stream source: fixture|cached|live")
        ->capture_default_str();
    app.add_option("--direction_mode", config.direction_mode,
                   "edge emission: symmetric|textual")
        ->capture_default_str();
    app.add_option("--endpoint", config.endpoint, "MediaWiki API endpoint")
        ->capture_default_str();
    app.add_option("--user_agent", config.user_agent, "HTTP User-Agent")
        ->capture_default_str();
    app.add_option("--request_gap_ms", config.request_gap_ms,
                   "minimum gap between live requests")
        ->capture_default_str();
    app.add_option("--horizon", config.horizon,
                   "stream length override (0: from manifest)")
        ->capture_default_str();

    app.add_option("--tau_fast", config.dynamics.tau_fast, "fast time constant")
        ->capture_default_str();
    app.add_option("--tau_slow", config.dynamics.tau_slow, "slow time constant")
        ->capture_default_str();
    app.add_option("--coupling", config.dynamics.coupling, "coupling strength C")
        ->capture_default_str();
    app.add_option("--input_amplitude", config.dynamics.input_amplitude,
                   "event input b")
        ->capture_default_str();
    app.add_option("--dt", config.dynamics.dt, "Euler step")
        ->capture_default_str();
    app.add_option("--prune_epsilon", config.dynamics.prune_epsilon,
                   "edge prune threshold")
        ->capture_default_str();

    app.add_option("--retention_decay", config.retrieval.retention_decay,
                   "per-iteration retention decay delta")
        ->capture_default_str();
    app.add_option("--spreading_factor", config.retrieval.spreading_factor,
                   "spreading factor S")
        ->capture_default_str();
    app.add_option("--iterations", config.retrieval.iterations,
                   "propagation iterations T")
        ->capture_default_str();
    app.add_option("--top_k", config.retrieval.top_k, "result count k")
        ->capture_default_str();

    app.add_option("--repeated_min", config.thresholds.repeated_min,
                   "min events for a 'repeated' pair")
        ->capture_default_str();
    app.add_option("--old_max_index", config.thresholds.old_max_index,
                   "max last index for an 'old' pair")
        ->capture_default_str();
    app.add_option("--recent_min_index", config.thresholds.recent_min_index,
                   "min last index for a 'recent' pair")
        ->capture_default_str();

    CLI::App* fetch = app.add_subcommand("fetch", "fetch and cache manifest revisions");
    fetch->fallthrough();
    CLI::App* ingest = app.add_subcommand("ingest", "ingest the stream and write a snapshot");
    ingest->fallthrough();
    CLI::App* query = app.add_subcommand("query", "spreading-activation retrieval over a snapshot");
    query->fallthrough();
    query->add_option("text", query_options.text, "query text")->required();
    query->add_flag("--json", query_options.json, "machine-readable output");
    CLI::App* ablate = app.add_subcommand("ablate", "event-pattern ablation table from the event log");
    ablate->fallthrough();
    ablate->add_flag("--csv", ablate_options.csv, "CSV output");
    CLI::App* trajectory = app.add_subcommand("trajectory", "per-pair trajectory CSV across models");
    trajectory->fallthrough();
    trajectory->add_option("label_a", trajectory_options.label_a, "first entity label")
        ->required();
    trajectory->add_option("label_b", trajectory_options.label_b, "second entity label")
        ->required();
    trajectory->add_option("--model", trajectory_options.models,
                           "restrict to a model (repeatable): coupled|single|uniform");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream buffer;
        int code = app.exit(e, out, buffer);
        err << buffer.str();
        return code == 0 ? kExitOk : kExitUserError;
    }

    if (fetch->parsed()) return cmd_fetch(config, out, err);
    if (ingest->parsed()) return cmd_ingest(config, out, err);
    if (query->parsed()) return cmd_query(config, query_options, out, err);
    if (ablate->parsed()) return cmd_ablate(config, ablate_options, out, err);
    if (trajectory->parsed()) {
        return cmd_trajectory(config, trajectory_options, out, err);
    }
    err << "error: no subcommand\n";
    return kExitUserError;
}

}  // namespace memini
