#include "sgdkit/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgdkit/corpus_io.hpp"
#include "sgdkit/entity_table.hpp"
#include "sgdkit/manifest.hpp"
#include "sgdkit/metrics.hpp"
#include "sgdkit/simulator.hpp"
#include "sgdkit/stats.hpp"
#include "sgdkit/tracker.hpp"
#include "sgdkit/version.hpp"

namespace sgdkit {

namespace {

namespace fs = std::filesystem;

RunManifest begin_manifest(const std::string& command, int argc, const char* const* argv) {
    RunManifest manifest;
    manifest.tool = kToolName;
    manifest.tool_version = kToolVersion;
    manifest.command = command;
    manifest.argv.assign(argv, argv + argc);
    manifest.started_at = iso8601_utc_now();
    return manifest;
}

// Labels every file behind `path` (a file, or a directory whose relevant
// files the loaders read) so the manifest pins the exact input bytes.
void digest_input(RunManifest& manifest, const std::string& label, const fs::path& path) {
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files)
            manifest.input_digests[label + "/" + file.filename().string()] = file_digest(file);
        return;
    }
    manifest.input_digests[label] = file_digest(path);
}

void digest_outputs(RunManifest& manifest, const fs::path& directory,
                    const std::vector<std::string>& names) {
    for (const std::string& name : names) manifest.outputs[name] = file_digest(directory / name);
}

void write_json_file(const fs::path& path, const ojson& value) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_text_file(path, value.dump(2) + "\n");
}

// Validation failures exit 1 with the report written next to the outputs
// the command would have produced.
int refuse(const ValidationRefused& error, const std::optional<fs::path>& report_dir) {
    std::cerr << "validation failed: " << error.what();
    if (report_dir.has_value()) {
        const fs::path path = *report_dir / "validation_report.json";
        write_json_file(path, validation_report_to_json(error.report()));
        std::cerr << "report written to " << path.string() << "\n";
    }
    return 1;
}

std::vector<ServiceSchema> load_valid_schemas(const fs::path& path) {
    auto schemas = load_schemas_from(path);
    if (const auto report = validate_schemas(schemas); !report.ok())
        throw ValidationRefused(report, "invalid schemas in " + path.string());
    return schemas;
}

std::set<std::string> load_service_set(const fs::path& path) {
    const ojson doc = parse_json_text(read_text_file(path));
    const auto names = expect_string_array(doc, "seen_services");
    return {names.begin(), names.end()};
}

std::map<std::string, std::string> load_domain_map(const fs::path& path) {
    const ojson doc = parse_json_text(read_text_file(path));
    expect_object(doc, "domains");
    std::map<std::string, std::string> out;
    for (auto it = doc.begin(); it != doc.end(); ++it)
        out[it.key()] = expect_string(it.value(), "domains." + it.key());
    return out;
}

// --- subcommands ------------------------------------------------------------

struct SchemaValidateArgs {
    std::string path;
    std::string out;
    std::string format = "text";
};

int do_schema_validate(const SchemaValidateArgs& args, RunManifest manifest) {
    ValidationReport report;
    const auto schemas = load_schemas_from(args.path, {}, &report);
    report.merge(validate_schemas(schemas));

    digest_input(manifest, "schemas", args.path);
    const ojson json = validation_report_to_json(report);
    if (!args.out.empty()) {
        write_json_file(args.out, json);
        manifest.outputs[fs::path(args.out).filename().string()] = file_digest(args.out);
        manifest.finished_at = iso8601_utc_now();
        write_run_manifest(fs::path(args.out).parent_path(), manifest);
    } else if (args.format == "json") {
        std::cout << json.dump(2) << "\n";
    } else {
        std::cout << (report.ok() ? "ok" : "invalid") << ": " << schemas.size() << " service(s), "
                  << report.errors.size() << " error(s), " << report.warnings.size()
                  << " warning(s)\n"
                  << report.to_text();
    }
    return report.ok() ? 0 : 1;
}

struct SimulateArgs {
    std::string schemas;
    std::string entities;
    std::string automaton;
    std::string templates;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    std::size_t flow_quota = 1;
    std::size_t attempt_factor = 20;
    std::size_t jobs = 1;
    std::size_t shard_size = 64;
    std::string out;
};

int do_simulate(const SimulateArgs& args, RunManifest manifest) {
    try {
        const auto schemas = load_valid_schemas(args.schemas);
        const auto engine = ServiceEngine::load(schemas, args.entities);

        AutomatonConfig config = AutomatonConfig::defaults();
        if (!args.automaton.empty()) config = parse_automaton_config(read_text_file(args.automaton));
        TemplateSet templates = TemplateSet::standard();
        if (!args.templates.empty()) templates = parse_templates(read_text_file(args.templates));

        GenOptions options;
        options.seed = args.seed;
        options.count = args.count;
        options.flow_quota = args.flow_quota;
        options.attempt_factor = args.attempt_factor;
        options.jobs = args.jobs;
        const GenResult result = generate_corpus(engine, config, templates, options);

        const auto shards = write_corpus_shards(args.out, result.corpus, args.shard_size);

        manifest.seed = args.seed;
        digest_input(manifest, "schemas", args.schemas);
        digest_input(manifest, "entities", args.entities);
        manifest.config_hashes["automaton"] =
            content_digest(automaton_config_to_json(config).dump(2));
        manifest.config_hashes["templates"] = content_digest(templates_to_json(templates).dump(2));
        digest_outputs(manifest, args.out, shards);
        manifest.extras["attempts"] = result.attempts;
        manifest.extras["dialogues"] = result.corpus.size();
        manifest.extras["duplicates"] = result.duplicates;
        manifest.extras["shortfall"] = result.shortfall;
        manifest.finished_at = iso8601_utc_now();
        write_run_manifest(args.out, manifest);

        if (result.shortfall > 0)
            std::cerr << "warning: generated " << result.corpus.size() << " of " << args.count
                      << " requested dialogues (attempt budget exhausted)\n";
        return 0;
    } catch (const ValidationRefused& e) {
        return refuse(e, fs::path(args.out));
    }
}

struct TrackArgs {
    std::string schemas;
    std::string entities;
    std::string data;
    bool oracle = false;
    std::size_t shard_size = 64;
    std::string out;
};

int do_track(const TrackArgs& args, RunManifest manifest) {
    try {
        const auto schemas = load_valid_schemas(args.schemas);
        const auto engine = ServiceEngine::load(schemas, args.entities);
        const Corpus input = load_corpus_from(args.data);
        if (const auto report = validate_corpus(input, schemas, ActVocabulary::standard());
            !report.ok())
            throw ValidationRefused(report, "invalid dialogues in " + args.data);

        // The rule tracker only ever sees the stripped corpus; the oracle
        // needs the reference states by definition.
        const Corpus hypothesis =
            args.oracle ? oracle_track(input) : track_corpus(strip_user_annotations(input), engine);
        const auto shards = write_corpus_shards(args.out, hypothesis, args.shard_size);

        digest_input(manifest, "schemas", args.schemas);
        digest_input(manifest, "entities", args.entities);
        digest_input(manifest, "data", args.data);
        digest_outputs(manifest, args.out, shards);
        manifest.extras["dialogues"] = hypothesis.size();
        manifest.extras["mode"] = args.oracle ? "oracle" : "rules";
        manifest.finished_at = iso8601_utc_now();
        write_run_manifest(args.out, manifest);
        return 0;
    } catch (const ValidationRefused& e) {
        return refuse(e, fs::path(args.out));
    }
}

struct EvaluateArgs {
    std::string schemas;
    std::string reference;
    std::string hypothesis;
    std::string seen_services;
    bool exact_match = false;
    std::string out;
};

int do_evaluate(const EvaluateArgs& args, RunManifest manifest) {
    const std::optional<fs::path> report_dir =
        args.out.empty() ? std::nullopt
                         : std::optional<fs::path>(fs::path(args.out).parent_path());
    try {
        const auto schemas = load_valid_schemas(args.schemas);
        const Corpus reference = load_corpus_from(args.reference);
        const Corpus hypothesis = load_corpus_from(args.hypothesis);

        EvalOptions options;
        options.use_fuzzy_match = !args.exact_match;
        if (!args.seen_services.empty())
            options.seen_services = load_service_set(args.seen_services);

        const EvalReport report = evaluate(reference, hypothesis, schemas, options);
        for (const auto& warning : report.diagnostics.warnings)
            std::cerr << "warning: " << warning.path << ": " << warning.message << "\n";

        const ojson json = eval_report_to_json(report);
        if (args.out.empty()) {
            std::cout << json.dump(2) << "\n";
            return 0;
        }
        write_json_file(args.out, json);

        digest_input(manifest, "schemas", args.schemas);
        digest_input(manifest, "reference", args.reference);
        digest_input(manifest, "hypothesis", args.hypothesis);
        if (!args.seen_services.empty())
            digest_input(manifest, "seen_services", args.seen_services);
        manifest.outputs[fs::path(args.out).filename().string()] = file_digest(args.out);
        manifest.finished_at = iso8601_utc_now();
        write_run_manifest(*report_dir, manifest);
        return 0;
    } catch (const ValidationRefused& e) {
        return refuse(e, report_dir);
    }
}

struct StatsArgs {
    std::string data;
    std::string schemas;
    std::string seen_services;
    std::string domains;
    std::string out;
};

int do_stats(const StatsArgs& args, RunManifest manifest) {
    const std::optional<fs::path> report_dir =
        args.out.empty() ? std::nullopt
                         : std::optional<fs::path>(fs::path(args.out).parent_path());
    try {
        const auto schemas = load_valid_schemas(args.schemas);
        const Corpus corpus = load_corpus_from(args.data);

        StatsOptions options;
        if (!args.seen_services.empty()) options.seen_services = load_service_set(args.seen_services);
        if (!args.domains.empty()) options.domain_map = load_domain_map(args.domains);

        const StatsReport report = compute_stats(corpus, schemas, options);
        const ojson json = stats_report_to_json(report);
        if (args.out.empty()) {
            std::cout << json.dump(2) << "\n";
            return 0;
        }
        write_json_file(args.out, json);

        std::vector<std::string> outputs = {fs::path(args.out).filename().string()};
        for (const auto& [name, content] : render_histograms(report)) {
            write_text_file(*report_dir / name, content);
            outputs.push_back(name);
        }

        digest_input(manifest, "schemas", args.schemas);
        digest_input(manifest, "data", args.data);
        if (!args.seen_services.empty()) digest_input(manifest, "seen_services", args.seen_services);
        if (!args.domains.empty()) digest_input(manifest, "domains", args.domains);
        digest_outputs(manifest, *report_dir, outputs);
        manifest.finished_at = iso8601_utc_now();
        write_run_manifest(*report_dir, manifest);
        return 0;
    } catch (const ValidationRefused& e) {
        return refuse(e, report_dir);
    }
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Schema-guided dialogue toolkit: generate, track, and score annotated corpora"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    SchemaValidateArgs sv;
    CLI::App* sv_cmd = app.add_subcommand("schema-validate", "Check a schema file or directory");
    sv_cmd->add_option("path", sv.path, "Schema file or directory")->required();
    sv_cmd->add_option("--out", sv.out, "Write the report as JSON to this file");
    sv_cmd->add_option("--format", sv.format, "Console format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    SimulateArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate an annotated dialogue corpus");
    sim_cmd->add_option("--schemas", sim.schemas, "Schema file or directory")->required();
    sim_cmd->add_option("--entities", sim.entities, "Directory of <service>.csv tables")->required();
    sim_cmd->add_option("--seed", sim.seed, "Generation seed (runs never self-seed)")->required();
    sim_cmd->add_option("--count,--num", sim.count, "Dialogues to generate");
    sim_cmd->add_option("--flow-quota", sim.flow_quota, "Max dialogues per flow signature");
    sim_cmd->add_option("--attempt-factor", sim.attempt_factor, "Attempt budget per requested dialogue");
    sim_cmd->add_option("--jobs", sim.jobs, "Worker threads (output is invariant to this)");
    sim_cmd->add_option("--shard-size", sim.shard_size, "Dialogues per output shard");
    sim_cmd->add_option("--automaton", sim.automaton, "Automaton config JSON (default built-in)");
    sim_cmd->add_option("--templates", sim.templates, "Template set JSON (default built-in)");
    sim_cmd->add_option("--out", sim.out, "Output directory")->required();

    TrackArgs trk;
    CLI::App* trk_cmd = app.add_subcommand("track", "Produce hypothesis states for a corpus");
    trk_cmd->add_option("--schemas", trk.schemas, "Schema file or directory")->required();
    trk_cmd->add_option("--entities", trk.entities, "Directory of <service>.csv tables")->required();
    trk_cmd->add_option("--data", trk.data, "Dialogue file or directory to track")->required();
    trk_cmd->add_flag("--oracle", trk.oracle, "Copy reference states instead of applying rules");
    trk_cmd->add_option("--shard-size", trk.shard_size, "Dialogues per output shard");
    trk_cmd->add_option("--out", trk.out, "Output directory")->required();

    EvaluateArgs ev;
    CLI::App* ev_cmd = app.add_subcommand("evaluate", "Score a hypothesis corpus against its reference");
    ev_cmd->add_option("--schemas", ev.schemas, "Schema file or directory")->required();
    ev_cmd->add_option("--reference,--ref", ev.reference, "Reference dialogues")->required();
    ev_cmd->add_option("--hypothesis,--hyp", ev.hypothesis, "Hypothesis dialogues")->required();
    ev_cmd->add_option("--seen-services", ev.seen_services,
                       "JSON array of seen service names (adds seen/unseen buckets)");
    ev_cmd->add_flag("--exact-match", ev.exact_match,
                     "Disable fuzzy matching for non-categorical slots");
    ev_cmd->add_option("--out", ev.out, "Report file (stdout when omitted)");

    StatsArgs st;
    CLI::App* st_cmd = app.add_subcommand("stats", "Summarize a corpus");
    st_cmd->add_option("--data", st.data, "Dialogue file or directory")->required();
    st_cmd->add_option("--schemas", st.schemas, "Schema file or directory")->required();
    st_cmd->add_option("--seen-services", st.seen_services,
                       "JSON array of seen service names (adds the unseen-turn fraction)");
    st_cmd->add_option("--domains", st.domains, "JSON object mapping service names to domains");
    st_cmd->add_option("--out", st.out,
                       "Report file (stdout when omitted; histogram CSVs written beside it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sv_cmd->parsed()) return do_schema_validate(sv, begin_manifest("schema-validate", argc, argv));
        if (sim_cmd->parsed()) return do_simulate(sim, begin_manifest("simulate", argc, argv));
        if (trk_cmd->parsed()) return do_track(trk, begin_manifest("track", argc, argv));
        if (ev_cmd->parsed()) return do_evaluate(ev, begin_manifest("evaluate", argc, argv));
        if (st_cmd->parsed()) return do_stats(st, begin_manifest("stats", argc, argv));
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const ValidationRefused& e) {
        std::cerr << "validation failed: " << e.what();
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace sgdkit
