#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "unlearn_eval/cka.hpp"
#include "unlearn_eval/datagen.hpp"
#include "unlearn_eval/dataset.hpp"
#include "unlearn_eval/errors.hpp"
#include "unlearn_eval/hash.hpp"
#include "unlearn_eval/jsonl.hpp"
#include "unlearn_eval/judge.hpp"
#include "unlearn_eval/langid.hpp"
#include "unlearn_eval/nmix.hpp"
#include "unlearn_eval/records.hpp"
#include "unlearn_eval/refmetrics.hpp"
#include "unlearn_eval/report.hpp"
#include "unlearn_eval/synth.hpp"

namespace fs = std::filesystem;
using namespace uleval;

namespace {

// Exit codes: 0 ok, 2 flag/validation errors, 3 I/O, 4 schema,
// 5 total network failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSchema = 4;
constexpr int kExitNetwork = 5;

struct GlobalOpts {
    std::string out_dir = ".";
    std::string format = "csv";
    std::string log_level = "info";
};

// Paths resolve against --out-dir unless absolute.
std::string resolve(const GlobalOpts& global, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(global.out_dir) / p).string();
}

void ensure_parent_dir(const std::string& path) {
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

void add_input_hash(Manifest& manifest, const std::string& path) {
    manifest.input_hashes.emplace_back(path, to_hex(fnv1a64_file(path)));
}

void emit_manifest(Manifest manifest, const std::string& first_output) {
    write_manifest(first_output + ".manifest.json", manifest);
}

DetectorConfig build_detector(const std::vector<LanguageTag>& candidates,
                              const std::string& profiles_dir,
                              int min_alpha_chars) {
    if (profiles_dir.empty())
        return bundled_detector(candidates, min_alpha_chars);
    return detector_from_dir(candidates, profiles_dir, min_alpha_chars);
}

std::vector<LanguageTag> languages_in(
    const std::vector<GenerationRecord>& records) {
    std::set<LanguageTag> seen;
    for (const GenerationRecord& r : records) seen.insert(r.query_language);
    return {seen.begin(), seen.end()};
}

std::vector<int> parse_levels(const std::string& csv) {
    std::vector<int> levels;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        levels.push_back(std::stoi(item));
    }
    if (levels.empty())
        throw std::invalid_argument("--levels must name at least one n");
    return levels;
}

// ---- gen -------------------------------------------------------------------

void cmd_gen(const GlobalOpts& global, std::uint64_t seed,
             const std::string& languages_csv, int n_profiles,
             int forget_profiles, const std::string& tables_path,
             const std::string& worksheet_path) {
    if (!worksheet_path.empty()) {
        std::string out = resolve(global, worksheet_path);
        ensure_parent_dir(out);
        export_english_defaults(out);
        std::cerr << "wrote English worksheet to " << out << "\n";
        return;
    }

    GenSpec spec;
    spec.seed = seed;
    spec.languages = parse_language_list(languages_csv);
    spec.n_profiles = n_profiles;
    spec.forget_profiles = forget_profiles;

    TranslationTables tables;
    std::string resolved_tables;
    if (!tables_path.empty()) {
        resolved_tables = resolve(global, tables_path);
        tables = load_translation_tables(resolved_tables);
    } else {
        tables = bundled_tables();
    }

    std::vector<Profile> profiles = generate_profiles(spec, tables);
    std::vector<QAPair> pairs = render_qa(profiles, tables, spec);
    assign_split(pairs, spec);

    ValidationReport report = validate_dataset(pairs);
    if (!report.ok()) {
        for (const Violation& v : report.violations)
            std::cerr << "violation: " << v.message << "\n";
        throw SchemaError("generated dataset failed validation with " +
                          std::to_string(report.violations.size()) +
                          " violations");
    }

    fs::create_directories(global.out_dir);
    std::string profiles_path = resolve(global, "profiles.jsonl");
    std::string qa_path = resolve(global, "qa.jsonl");
    write_profiles(profiles_path, profiles);
    write_qa(qa_path, pairs);

    Manifest manifest;
    manifest.command = "gen";
    manifest.config = {{"seed", std::to_string(seed)},
                       {"languages", languages_csv},
                       {"n_profiles", std::to_string(n_profiles)},
                       {"forget_profiles", std::to_string(forget_profiles)},
                       {"tables", tables_path}};
    if (!resolved_tables.empty()) add_input_hash(manifest, resolved_tables);
    manifest.outputs = {profiles_path, qa_path};
    emit_manifest(manifest, profiles_path);

    std::cerr << "wrote " << pairs.size() << " QA pairs over "
              << profiles.size() << " profiles to " << global.out_dir << "\n";
}

// ---- synth-model -------------------------------------------------------------

void cmd_synth_model(const GlobalOpts& global, const std::string& qa_path,
                     const std::string& behavior_text, std::uint64_t seed,
                     std::string model_id, const std::string& out_path) {
    SynthBehavior behavior = parse_behavior(behavior_text);
    if (model_id.empty()) {
        model_id = "synth-" + behavior_text;
        for (char& c : model_id) {
            if (c == ':') c = '-';
        }
    }
    std::string qa = resolve(global, qa_path);
    std::vector<QAPair> pairs = read_qa(qa);
    std::vector<GenerationRecord> generations =
        synthesize_generations(pairs, behavior, model_id, seed);

    std::string out = resolve(global, out_path);
    ensure_parent_dir(out);
    write_generations(out, generations);

    Manifest manifest;
    manifest.command = "synth-model";
    manifest.config = {{"behavior", behavior_text},
                       {"seed", std::to_string(seed)},
                       {"model_id", model_id}};
    add_input_hash(manifest, qa);
    manifest.outputs = {out};
    emit_manifest(manifest, out);
}

// ---- score -------------------------------------------------------------------

void cmd_score(const GlobalOpts& global, const std::string& generations_path,
               const std::string& metrics_csv, const std::string& qa_path,
               bool km_recall, bool no_lowercase,
               const std::string& out_path) {
    bool with_em = false, with_km = false;
    std::stringstream ss(metrics_csv);
    std::string metric;
    while (std::getline(ss, metric, ',')) {
        if (metric == "em") with_em = true;
        else if (metric == "km") with_km = true;
        else if (!metric.empty())
            throw std::invalid_argument("unknown metric '" + metric +
                                        "' (expected em, km)");
    }
    if (!with_em && !with_km)
        throw std::invalid_argument("--metrics must name em and/or km");

    std::string gen_path = resolve(global, generations_path);
    std::vector<GenerationRecord> records = read_generations(gen_path);
    if (records.empty())
        throw SchemaError(gen_path + ": no generation records");

    std::string qa_resolved;
    if (!qa_path.empty()) {
        qa_resolved = resolve(global, qa_path);
        std::vector<QAPair> pairs = read_qa(qa_resolved);
        std::vector<std::string> problems =
            check_generations_against_qa(records, pairs);
        for (const std::string& p : problems)
            std::cerr << "consistency: " << p << "\n";
        if (!problems.empty())
            std::cerr << problems.size()
                      << " generation/dataset inconsistencies\n";
    }

    ScoreOptions options;
    options.km_use_recall = km_recall;
    options.rouge.lowercase = !no_lowercase;
    auto scores = score_corpus(records, options);

    std::string out = resolve(global, out_path);
    ensure_parent_dir(out);
    write_text_file(out, render_score_csv(scores, with_em, with_km));

    Manifest manifest;
    manifest.command = "score";
    manifest.config = {{"metrics", metrics_csv},
                       {"km_recall", km_recall ? "true" : "false"},
                       {"lowercase", no_lowercase ? "false" : "true"}};
    add_input_hash(manifest, gen_path);
    if (!qa_resolved.empty()) add_input_hash(manifest, qa_resolved);
    manifest.outputs = {out};
    emit_manifest(manifest, out);
}

// ---- nmix --------------------------------------------------------------------

void cmd_nmix(const GlobalOpts& global, const std::string& generations_path,
              const std::string& lang_set_csv, const std::string& levels_csv,
              const std::string& profiles_dir, int min_alpha_chars,
              const std::string& out_path) {
    std::string gen_path = resolve(global, generations_path);
    std::vector<GenerationRecord> records = read_generations(gen_path);
    if (records.empty())
        throw SchemaError(gen_path + ": no generation records");

    std::vector<LanguageTag> candidates =
        lang_set_csv.empty() ? languages_in(records)
                             : parse_language_list(lang_set_csv);
    std::vector<int> levels = parse_levels(levels_csv);
    for (int n : levels) {
        if (n < 3)
            std::cerr << "warning: n=" << n
                      << " fragments are unreliable for detection\n";
    }

    DetectorConfig detector =
        build_detector(candidates, profiles_dir, min_alpha_chars);
    auto stats = nmix_corpus(records, levels, detector);

    std::string out = resolve(global, out_path);
    ensure_parent_dir(out);
    write_text_file(out, render_nmix_csv(stats));

    Manifest manifest;
    manifest.command = "nmix";
    std::string lang_names;
    for (LanguageTag lang : candidates) {
        if (!lang_names.empty()) lang_names += ',';
        lang_names += to_string(lang);
    }
    manifest.config = {{"lang_set", lang_names},
                       {"levels", levels_csv},
                       {"profiles_dir", profiles_dir}};
    add_input_hash(manifest, gen_path);
    manifest.outputs = {out};
    emit_manifest(manifest, out);
}

// ---- judge -------------------------------------------------------------------

void cmd_judge(const GlobalOpts& global, const std::string& generations_path,
               bool mock, const std::string& profiles_path,
               const JudgeConfig& config_in, bool validate,
               const std::string& qa_path, const std::string& out_path,
               const std::string& matrix_out_path) {
    JudgeConfig config = config_in;
    if (!config.cache_dir.empty())
        config.cache_dir = resolve(global, config.cache_dir);
    if (!mock && config.endpoint_url.empty())
        throw std::invalid_argument("--endpoint is required without --mock");
    if (mock && profiles_path.empty())
        throw std::invalid_argument("--profiles is required with --mock");

    Manifest manifest;
    manifest.command = validate ? "judge-validate" : "judge";
    manifest.prompt_hash = judge_prompt_hash();
    manifest.config = {{"mock", mock ? "true" : "false"},
                       {"model", config.model_name},
                       {"endpoint", config.endpoint_url},
                       {"temperature", format_ratio(config.temperature)}};

    std::optional<QaContext> context;
    if (mock) {
        std::string profiles_resolved = resolve(global, profiles_path);
        context.emplace(read_profiles(profiles_resolved));
        add_input_hash(manifest, profiles_resolved);
    }

    if (validate) {
        if (qa_path.empty())
            throw std::invalid_argument("--validate requires --qa");
        std::string qa_resolved = resolve(global, qa_path);
        std::vector<QAPair> pairs = read_qa(qa_resolved);
        add_input_hash(manifest, qa_resolved);
        JudgeMatrix matrix;
        if (mock) {
            matrix = validate_judge_mock(pairs, *context);
        } else {
            auto transport = make_http_transport();
            matrix = validate_judge(pairs, config, *transport);
        }
        std::string out = resolve(global, matrix_out_path);
        ensure_parent_dir(out);
        write_text_file(out, render_judge_matrix_csv(matrix));
        manifest.outputs = {out};
        emit_manifest(manifest, out);
        return;
    }

    if (generations_path.empty())
        throw std::invalid_argument("--generations is required");
    std::string gen_path = resolve(global, generations_path);
    std::vector<GenerationRecord> records = read_generations(gen_path);
    if (records.empty())
        throw SchemaError(gen_path + ": no generation records");
    add_input_hash(manifest, gen_path);

    std::map<GroupKey, JudgeGroupStats> stats;
    if (mock) {
        stats = mock_judge_corpus(records, *context);
    } else {
        auto transport = make_http_transport();
        stats = judge_corpus(records, config, *transport);
    }

    std::string out = resolve(global, out_path);
    ensure_parent_dir(out);
    write_text_file(out, render_judge_csv(stats));
    manifest.outputs = {out};
    emit_manifest(manifest, out);
}

// ---- cka ---------------------------------------------------------------------

void cmd_cka(const GlobalOpts& global, const std::string& dir,
             const std::string& base_code, const std::string& out_path) {
    CkaTable table = cka_table(resolve(global, dir),
                               language_from_code(base_code));

    OutputFormat format = parse_format(global.format);
    std::ostringstream body;
    if (format == OutputFormat::csv) {
        body << "language,cka\n";
        for (const CkaCell& cell : table.cells)
            body << to_string(cell.language) << ','
                 << format_ratio(cell.value) << '\n';
        body << "avg," << format_ratio(table.average) << '\n';
    } else if (format == OutputFormat::md) {
        body << "| Base |";
        for (const CkaCell& cell : table.cells)
            body << ' ' << to_string(cell.language) << " |";
        body << " Avg. |\n|---|";
        for (std::size_t i = 0; i < table.cells.size(); ++i) body << "---|";
        body << "---|\n| " << to_string(table.base) << " |";
        for (const CkaCell& cell : table.cells)
            body << ' ' << format_ratio(cell.value) << " |";
        body << ' ' << format_ratio(table.average) << " |\n";
    } else {
        nlohmann::ordered_json doc;
        doc["base"] = std::string(to_string(table.base));
        for (const CkaCell& cell : table.cells)
            doc["cka"][std::string(to_string(cell.language))] = cell.value;
        doc["avg"] = table.average;
        body << doc.dump(2) << '\n';
    }

    std::string out = resolve(global, out_path);
    ensure_parent_dir(out);
    write_text_file(out, body.str());

    Manifest manifest;
    manifest.command = "cka";
    manifest.config = {{"dir", dir}, {"base", base_code},
                       {"format", global.format}};
    manifest.outputs = {out};
    emit_manifest(manifest, out);
}

// ---- report ------------------------------------------------------------------

void cmd_report(const GlobalOpts& global,
                const std::vector<std::string>& inputs,
                const std::string& out_path) {
    if (inputs.empty())
        throw std::invalid_argument("report needs at least one metric CSV");
    MetricReport report;
    Manifest manifest;
    manifest.command = "report";
    for (const std::string& input : inputs) {
        std::string path = resolve(global, input);
        merge_metric_csv(report, path);
        add_input_hash(manifest, path);
    }
    std::string out = resolve(global, out_path);
    ensure_parent_dir(out);
    write_text_file(out, render_report(report, parse_format(global.format)));
    manifest.config = {{"format", global.format}};
    manifest.outputs = {out};
    emit_manifest(manifest, out);
}

// ---- detect ------------------------------------------------------------------

void cmd_detect(const std::string& lang_set_csv,
                const std::string& profiles_dir, int min_alpha_chars) {
    std::vector<LanguageTag> candidates =
        lang_set_csv.empty()
            ? std::vector<LanguageTag>(kAllLanguages.begin(),
                                       kAllLanguages.end())
            : parse_language_list(lang_set_csv);
    DetectorConfig detector =
        build_detector(candidates, profiles_dir, min_alpha_chars);
    std::string line;
    while (std::getline(std::cin, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tag = detect(line, detector);
        std::cout << (tag ? to_string(*tag) : std::string_view("und")) << '\t'
                  << line << '\n';
    }
}

// ---- loss-audit --------------------------------------------------------------

void cmd_loss_audit(const GlobalOpts& global, const std::string& logprobs_path,
                    double alpha, const std::string& variant_text,
                    const std::string& out_path) {
    std::string path = resolve(global, logprobs_path);
    std::vector<LogProbRecord> records = read_logprobs(path);
    LossAudit audit =
        loss_audit(records, alpha, parse_loss_variant(variant_text));

    char line[256];
    std::snprintf(line, sizeof(line),
                  "variant=%s alpha=%.12g forget_term=%.12g retain_term=%.12g "
                  "total=%.12g n_forget=%lld n_retain=%lld\n",
                  audit.variant == LossVariant::GA ? "GA" : "GD", audit.alpha,
                  audit.forget_term, audit.retain_term, audit.total,
                  static_cast<long long>(audit.n_forget),
                  static_cast<long long>(audit.n_retain));
    std::cout << line;

    if (!out_path.empty()) {
        nlohmann::ordered_json doc;
        doc["variant"] = audit.variant == LossVariant::GA ? "GA" : "GD";
        doc["alpha"] = audit.alpha;
        doc["forget_term"] = audit.forget_term;
        doc["retain_term"] = audit.retain_term;
        doc["total"] = audit.total;
        doc["n_forget"] = audit.n_forget;
        doc["n_retain"] = audit.n_retain;
        std::string out = resolve(global, out_path);
        ensure_parent_dir(out);
        write_text_file(out, doc.dump(2) + "\n");

        Manifest manifest;
        manifest.command = "loss-audit";
        manifest.config = {{"alpha", std::to_string(alpha)},
                           {"variant", variant_text}};
        add_input_hash(manifest, path);
        manifest.outputs = {out};
        emit_manifest(manifest, out);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilingual machine-unlearning evaluation toolkit"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--out-dir", global.out_dir,
                   "Directory that relative paths resolve against");
    app.add_option("--format", global.format, "Output format: csv|json|md");
    app.add_option("--log-level", global.log_level, "quiet|info|debug");

    std::function<void()> run;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate the parallel QA dataset");
    auto gen_seed = std::make_shared<std::uint64_t>(7);
    auto gen_langs = std::make_shared<std::string>("en,de,zh,ru,ko");
    auto gen_n = std::make_shared<int>(40);
    auto gen_forget = std::make_shared<int>(2);
    auto gen_tables = std::make_shared<std::string>();
    auto gen_worksheet = std::make_shared<std::string>();
    gen->add_option("--seed", *gen_seed, "PRNG seed");
    gen->add_option("--languages,--lang-set", *gen_langs,
                    "Comma-separated language tags (must include en)");
    gen->add_option("--n-profiles", *gen_n, "Number of profiles");
    gen->add_option("--forget-profiles", *gen_forget,
                    "Profiles assigned to the forget split");
    gen->add_option("--tables", *gen_tables,
                    "Translation tables JSON overriding the bundled ones");
    gen->add_option("--export-english-tables", *gen_worksheet,
                    "Write the English worksheet to this path and exit");
    gen->callback([&, gen_seed, gen_langs, gen_n, gen_forget, gen_tables,
                   gen_worksheet] {
        run = [=, &global] {
            cmd_gen(global, *gen_seed, *gen_langs, *gen_n, *gen_forget,
                    *gen_tables, *gen_worksheet);
        };
    });

    // synth-model
    auto* synth = app.add_subcommand(
        "synth-model", "Produce synthetic model generations from a dataset");
    auto synth_qa = std::make_shared<std::string>();
    auto synth_behavior = std::make_shared<std::string>();
    auto synth_seed = std::make_shared<std::uint64_t>(0);
    auto synth_model_id = std::make_shared<std::string>();
    auto synth_out = std::make_shared<std::string>("generations.jsonl");
    synth->add_option("--qa", *synth_qa, "qa.jsonl path")->required();
    synth->add_option("--behavior", *synth_behavior,
                      "identity | confused:<lang> | refusal | forget-aware | "
                      "forget-aware-confused:<lang>")
        ->required();
    synth->add_option("--seed", *synth_seed, "Unused; behaviors are "
                                             "deterministic");
    synth->add_option("--model-id", *synth_model_id, "model_id field value");
    synth->add_option("--out", *synth_out, "Output generations.jsonl");
    synth->callback([&, synth_qa, synth_behavior, synth_seed, synth_model_id,
                     synth_out] {
        run = [=, &global] {
            cmd_synth_model(global, *synth_qa, *synth_behavior, *synth_seed,
                            *synth_model_id, *synth_out);
        };
    });

    // score
    auto* score = app.add_subcommand("score",
                                     "Reference-based metrics (EM, KM)");
    auto score_gens = std::make_shared<std::string>();
    auto score_metrics = std::make_shared<std::string>("em,km");
    auto score_qa = std::make_shared<std::string>();
    auto score_recall = std::make_shared<bool>(false);
    auto score_nolower = std::make_shared<bool>(false);
    auto score_out = std::make_shared<std::string>("score.csv");
    score->add_option("--generations", *score_gens, "generations.jsonl")
        ->required();
    score->add_option("--metrics", *score_metrics, "em,km");
    score->add_option("--qa", *score_qa,
                      "qa.jsonl for a consistency cross-check");
    score->add_flag("--km-recall", *score_recall,
                    "KM reports ROUGE-L recall instead of F1");
    score->add_flag("--no-lowercase", *score_nolower,
                    "Disable case folding in ROUGE-L");
    score->add_option("--out", *score_out, "Output CSV");
    score->callback([&, score_gens, score_metrics, score_qa, score_recall,
                     score_nolower, score_out] {
        run = [=, &global] {
            cmd_score(global, *score_gens, *score_metrics, *score_qa,
                      *score_recall, *score_nolower, *score_out);
        };
    });

    // nmix
    auto* nmix = app.add_subcommand("nmix", "N-Mix language-confusion score");
    auto nmix_gens = std::make_shared<std::string>();
    auto nmix_langs = std::make_shared<std::string>();
    auto nmix_levels = std::make_shared<std::string>("3,4,5,6");
    auto nmix_profiles_dir = std::make_shared<std::string>();
    auto nmix_min_alpha = std::make_shared<int>(1);
    auto nmix_out = std::make_shared<std::string>("nmix.csv");
    nmix->add_option("--generations", *nmix_gens, "generations.jsonl")
        ->required();
    nmix->add_option("--lang-set", *nmix_langs,
                     "Detector candidates (default: languages in the file)");
    nmix->add_option("--levels", *nmix_levels, "n-gram levels");
    nmix->add_option("--profiles-dir", *nmix_profiles_dir,
                     "Directory with <lang>.json frequency profiles");
    nmix->add_option("--min-alphabetic-chars", *nmix_min_alpha,
                     "Minimum scripted codepoints for detection");
    nmix->add_option("--out", *nmix_out, "Output CSV");
    nmix->callback([&, nmix_gens, nmix_langs, nmix_levels, nmix_profiles_dir,
                    nmix_min_alpha, nmix_out] {
        run = [=, &global] {
            cmd_nmix(global, *nmix_gens, *nmix_langs, *nmix_levels,
                     *nmix_profiles_dir, *nmix_min_alpha, *nmix_out);
        };
    });

    // judge
    auto* judge = app.add_subcommand(
        "judge", "Semantic equivalence judging (LLM endpoint or --mock)");
    auto judge_gens = std::make_shared<std::string>();
    auto judge_mock = std::make_shared<bool>(false);
    auto judge_profiles = std::make_shared<std::string>();
    auto judge_validate = std::make_shared<bool>(false);
    auto judge_qa = std::make_shared<std::string>();
    auto judge_out = std::make_shared<std::string>("judge.csv");
    auto judge_matrix_out = std::make_shared<std::string>("judge_matrix.csv");
    auto judge_config = std::make_shared<JudgeConfig>();
    auto judge_timeout_ms = std::make_shared<int>(30000);
    judge->add_option("--generations", *judge_gens, "generations.jsonl");
    judge->add_flag("--mock", *judge_mock, "Use the offline mock judge");
    judge->add_option("--profiles", *judge_profiles,
                      "profiles.jsonl (required with --mock)");
    judge->add_flag("--validate", *judge_validate,
                    "Compute the cross-language validation matrix");
    judge->add_option("--qa", *judge_qa, "qa.jsonl (for --validate)");
    judge->add_option("--endpoint", judge_config->endpoint_url,
                      "Chat-completion endpoint URL");
    judge->add_option("--model", judge_config->model_name, "Judge model name");
    judge->add_option("--api-key-env", judge_config->api_key_env_var,
                      "Environment variable holding the API key");
    judge->add_option("--cache", judge_config->cache_dir,
                      "Verdict cache directory");
    judge->add_option("--max-concurrency", judge_config->max_concurrency,
                      "Parallel requests");
    judge->add_option("--retries", judge_config->retries, "Retries per record");
    judge->add_option("--timeout-ms", *judge_timeout_ms, "Request timeout");
    judge->add_option("--temperature", judge_config->temperature,
                      "Sampling temperature");
    judge->add_option("--rps", judge_config->requests_per_second,
                      "Requests per second (0 = unthrottled)");
    judge->add_option("--out", *judge_out, "Output CSV");
    judge->add_option("--matrix-out", *judge_matrix_out,
                      "Validation matrix CSV");
    judge->callback([&, judge_gens, judge_mock, judge_profiles, judge_validate,
                     judge_qa, judge_out, judge_matrix_out, judge_config,
                     judge_timeout_ms] {
        run = [=, &global] {
            JudgeConfig config = *judge_config;
            config.timeout = std::chrono::milliseconds(*judge_timeout_ms);
            cmd_judge(global, *judge_gens, *judge_mock, *judge_profiles,
                      config, *judge_validate, *judge_qa, *judge_out,
                      *judge_matrix_out);
        };
    });

    // cka
    auto* cka = app.add_subcommand(
        "cka", "Linear CKA over per-language embedding matrices");
    auto cka_dir = std::make_shared<std::string>();
    auto cka_base = std::make_shared<std::string>("en");
    auto cka_out = std::make_shared<std::string>("cka.csv");
    cka->add_option("--dir", *cka_dir, "Directory of <lang>.txt|csv matrices")
        ->required();
    cka->add_option("--base", *cka_base, "Base language");
    cka->add_option("--out", *cka_out, "Output path");
    cka->callback([&, cka_dir, cka_base, cka_out] {
        run = [=, &global] { cmd_cka(global, *cka_dir, *cka_base, *cka_out); };
    });

    // report
    auto* report = app.add_subcommand(
        "report", "Join metric CSVs into one combined table");
    auto report_inputs = std::make_shared<std::vector<std::string>>();
    auto report_out = std::make_shared<std::string>("report.csv");
    report->add_option("files", *report_inputs, "Metric CSV files");
    report->add_option("--inputs", *report_inputs, "Metric CSV files")
        ->excludes("files");
    report->add_option("--out", *report_out, "Output path");
    report->callback([&, report_inputs, report_out] {
        run = [=, &global] { cmd_report(global, *report_inputs, *report_out); };
    });

    // detect
    auto* detect_cmd = app.add_subcommand(
        "detect", "Detect the language of each stdin line");
    auto detect_langs = std::make_shared<std::string>();
    auto detect_profiles_dir = std::make_shared<std::string>();
    auto detect_min_alpha = std::make_shared<int>(1);
    detect_cmd->add_option("--lang-set", *detect_langs,
                           "Candidate languages (default: all eight)");
    detect_cmd->add_option("--profiles-dir", *detect_profiles_dir,
                           "Directory with <lang>.json frequency profiles");
    detect_cmd->add_option("--min-alphabetic-chars", *detect_min_alpha,
                           "Minimum scripted codepoints for detection");
    detect_cmd->callback([&, detect_langs, detect_profiles_dir,
                          detect_min_alpha] {
        run = [=] {
            cmd_detect(*detect_langs, *detect_profiles_dir, *detect_min_alpha);
        };
    });

    // loss-audit
    auto* loss = app.add_subcommand(
        "loss-audit", "GA/GD objective bookkeeping over log-likelihoods");
    auto loss_path = std::make_shared<std::string>();
    auto loss_alpha = std::make_shared<double>(1.0);
    auto loss_variant = std::make_shared<std::string>();
    auto loss_out = std::make_shared<std::string>();
    loss->add_option("--logprobs", *loss_path, "logprobs.jsonl")->required();
    loss->add_option("--alpha", *loss_alpha, "Forgetting coefficient (> 0)");
    loss->add_option("--variant", *loss_variant, "ga | gd")->required();
    loss->add_option("--out", *loss_out, "Optional JSON output path");
    loss->callback([&, loss_path, loss_alpha, loss_variant, loss_out] {
        run = [=, &global] {
            cmd_loss_audit(global, *loss_path, *loss_alpha, *loss_variant,
                           *loss_out);
        };
    });

    // global flags may appear after the subcommand name
    for (CLI::App* sub :
         app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        run();
    } catch (const NetworkError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetwork;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
