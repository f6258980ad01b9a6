// Acceptance suite: every release-gating check runs here, one line per
// criterion. Thresholds are fixed in this file, not configurable.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unlearn_eval/cka.hpp"
#include "unlearn_eval/datagen.hpp"
#include "unlearn_eval/dataset.hpp"
#include "unlearn_eval/hash.hpp"
#include "unlearn_eval/jsonl.hpp"
#include "unlearn_eval/judge.hpp"
#include "unlearn_eval/langid.hpp"
#include "unlearn_eval/nmix.hpp"
#include "unlearn_eval/refmetrics.hpp"
#include "unlearn_eval/report.hpp"
#include "unlearn_eval/synth.hpp"

using namespace uleval;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_checks_failed = 0;

#define EXPECT(cond, detail)                                                 \
    do {                                                                     \
        if (!(cond)) {                                                       \
            std::cout << "    failed: " << #cond << "  [" << detail << "]\n"; \
            ++g_checks_failed;                                               \
        }                                                                    \
    } while (0)

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string cli_path() { return UNLEARN_EVAL_CLI_PATH; }

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("uleval-acc-" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const fs::path& out_dir, const std::string& args) {
    std::string command = cli_path() + " --out-dir " + out_dir.string() + " " +
                          args + " >/dev/null 2>&1";
    int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const MetricRow* find_row(const MetricReport& report, LanguageTag lang,
                          SplitLabel split) {
    for (const MetricRow& row : report.rows) {
        if (row.query_language == lang && row.split == split) return &row;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// 1. Dataset law: 1,400 pairs, 40 profiles, clean validation, 14 forget
//    pairs per language, byte-identical re-generation, < 5 s.
bool criterion_dataset_law() {
    int before = g_checks_failed;
    auto start = Clock::now();

    fs::path dir_a = fresh_dir("gen-a");
    fs::path dir_b = fresh_dir("gen-b");
    EXPECT(run_cli(dir_a, "gen --seed 7") == 0, "gen run A");
    EXPECT(run_cli(dir_b, "gen --seed 7") == 0, "gen run B");

    auto profiles = read_profiles((dir_a / "profiles.jsonl").string());
    auto pairs = read_qa((dir_a / "qa.jsonl").string());
    EXPECT(profiles.size() == 40, profiles.size());
    EXPECT(pairs.size() == 1400, pairs.size());

    ValidationReport report = validate_dataset(pairs);
    EXPECT(report.violations.empty(), report.violations.size());

    for (LanguageTag lang : {LanguageTag::en, LanguageTag::de, LanguageTag::zh,
                             LanguageTag::ru, LanguageTag::ko}) {
        std::int64_t forget = 0;
        for (const QAPair& p : pairs)
            forget += p.language == lang && p.split == SplitLabel::forget;
        EXPECT(forget == 14, "forget pairs for " << to_string(lang) << ": "
                                                 << forget);
    }

    EXPECT(slurp(dir_a / "profiles.jsonl") == slurp(dir_b / "profiles.jsonl"),
           "profiles.jsonl bytes");
    EXPECT(slurp(dir_a / "qa.jsonl") == slurp(dir_b / "qa.jsonl"),
           "qa.jsonl bytes");

    double elapsed = seconds_since(start);
    EXPECT(elapsed < 5.0, elapsed << " s");
    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 2. N-Mix validation matrix over the ground-truth answers: diagonal mean
//    <= 2.0, cross-script cells >= 90, within-Latin cells >= 70, < 30 s.
bool criterion_nmix_matrix() {
    int before = g_checks_failed;
    auto start = Clock::now();

    GenSpec spec;
    auto profile_list = generate_profiles(spec, bundled_tables());
    auto pairs = render_qa(profile_list, bundled_tables(), spec);
    DetectorConfig detector = bundled_detector(spec.languages);

    const std::size_t k = spec.languages.size();
    std::vector<std::vector<double>> matrix(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            double sum = 0.0;
            int scored = 0;
            for (const QAPair& p : pairs) {
                if (p.language != spec.languages[a]) continue;
                NMixResult r = nmix_average(p.answer, kDefaultNMixLevels,
                                            spec.languages[b], detector);
                if (r.skipped) continue;
                sum += r.avg;
                ++scored;
            }
            EXPECT(scored > 0, "matrix cell scored count");
            matrix[a][b] = sum / scored;
        }
    }

    double diagonal_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) diagonal_sum += matrix[i][i];
    double diagonal_mean = diagonal_sum / static_cast<double>(k);

    std::cout << "    answers \\ query:";
    for (LanguageTag lang : spec.languages)
        std::cout << "  " << to_string(lang);
    std::cout << '\n';
    for (std::size_t a = 0; a < k; ++a) {
        std::cout << "      " << to_string(spec.languages[a]) << ":";
        for (std::size_t b = 0; b < k; ++b)
            std::cout << ' ' << format_nmix(matrix[a][b]);
        std::cout << '\n';
    }

    EXPECT(diagonal_mean <= 2.0, "diagonal mean " << diagonal_mean);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            ScriptClass sa = script_of(spec.languages[a]);
            ScriptClass sb = script_of(spec.languages[b]);
            if (sa != sb) {
                EXPECT(matrix[a][b] >= 90.0,
                       to_string(spec.languages[a])
                           << " vs " << to_string(spec.languages[b]) << ": "
                           << matrix[a][b]);
            } else {
                EXPECT(matrix[a][b] >= 70.0,
                       to_string(spec.languages[a])
                           << " vs " << to_string(spec.languages[b]) << ": "
                           << matrix[a][b]);
            }
        }
    }

    double elapsed = seconds_since(start);
    EXPECT(elapsed < 30.0, elapsed << " s");
    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 3. False-negative reproduction, end to end through the CLI: the
//    confused:zh fixture must give EM = KM = 0 +- 0.01 on en/de/ko/ru rows,
//    EM = KM = 1.00 on zh rows, N-Mix >= 95 off-zh and 0 on zh, < 60 s.
bool criterion_false_negative() {
    int before = g_checks_failed;
    auto start = Clock::now();

    fs::path dir = fresh_dir("confused");
    EXPECT(run_cli(dir, "gen --seed 7") == 0, "gen");
    EXPECT(run_cli(dir, "synth-model --qa qa.jsonl --behavior confused:zh "
                        "--out confused.jsonl") == 0, "synth-model");
    EXPECT(run_cli(dir, "score --generations confused.jsonl --out score.csv") ==
               0, "score");
    EXPECT(run_cli(dir, "nmix --generations confused.jsonl --out nmix.csv") ==
               0, "nmix");
    EXPECT(run_cli(dir, "report score.csv nmix.csv --out combined.csv") == 0,
           "report");

    MetricReport report;
    merge_metric_csv(report, (dir / "combined.csv").string());

    for (LanguageTag lang : {LanguageTag::en, LanguageTag::de, LanguageTag::ko,
                             LanguageTag::ru}) {
        for (SplitLabel split : {SplitLabel::forget, SplitLabel::retain}) {
            const MetricRow* row = find_row(report, lang, split);
            EXPECT(row != nullptr, "row " << to_string(lang));
            if (!row) continue;
            EXPECT(row->em && std::abs(*row->em) <= 0.01,
                   "em " << to_string(lang) << "/" << to_string(split) << " = "
                         << (row->em ? *row->em : -1.0));
            EXPECT(row->km && std::abs(*row->km) <= 0.01,
                   "km " << to_string(lang) << "/" << to_string(split) << " = "
                         << (row->km ? *row->km : -1.0));
            EXPECT(row->nmix_avg && *row->nmix_avg >= 95.0,
                   "nmix " << to_string(lang) << " = "
                           << (row->nmix_avg ? *row->nmix_avg : -1.0));
        }
    }
    for (SplitLabel split : {SplitLabel::forget, SplitLabel::retain}) {
        const MetricRow* row = find_row(report, LanguageTag::zh, split);
        EXPECT(row != nullptr, "zh row");
        if (!row) continue;
        EXPECT(row->em && *row->em == 1.0, "zh em");
        EXPECT(row->km && *row->km == 1.0, "zh km");
        EXPECT(row->nmix_avg && *row->nmix_avg == 0.0,
               "zh nmix " << (row->nmix_avg ? *row->nmix_avg : -1.0));
    }

    double elapsed = seconds_since(start);
    EXPECT(elapsed < 60.0, elapsed << " s");
    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 4. The mock semantic judge sees through confusion: the composite fixture
//    (refusal on forget, zh-confused on retain) keeps retain >= 0.95 and
//    forget <= 0.10 although EM = 0 on the confused rows; the judge
//    validation matrix is all-zero under the mock judge.
bool criterion_semantic_judge() {
    int before = g_checks_failed;

    GenSpec spec;
    auto profiles = generate_profiles(spec, bundled_tables());
    auto pairs = render_qa(profiles, bundled_tables(), spec);
    assign_split(pairs, spec);

    auto generations = synthesize_generations(
        pairs, parse_behavior("forget-aware-confused:zh"), "composite", 0);

    // reference metrics: confused retain rows collapse to EM 0
    auto scores = score_corpus(generations);
    for (LanguageTag lang : {LanguageTag::en, LanguageTag::de, LanguageTag::ko,
                             LanguageTag::ru}) {
        const RefGroupStats& retain =
            scores.at({"composite", lang, SplitLabel::retain});
        EXPECT(retain.em_mean == 0.0,
               "em retain " << to_string(lang) << " = " << retain.em_mean);
    }

    QaContext context(profiles);
    auto judged = mock_judge_corpus(generations, context);
    for (LanguageTag lang : spec.languages) {
        const JudgeGroupStats& retain =
            judged.at({"composite", lang, SplitLabel::retain});
        const JudgeGroupStats& forget =
            judged.at({"composite", lang, SplitLabel::forget});
        EXPECT(retain.yes_ratio >= 0.95,
               "retain ratio " << to_string(lang) << " = " << retain.yes_ratio);
        EXPECT(forget.yes_ratio <= 0.10,
               "forget ratio " << to_string(lang) << " = " << forget.yes_ratio);
    }

    JudgeMatrix matrix = validate_judge_mock(pairs, context);
    for (const auto& row : matrix.non_equivalence)
        for (double cell : row) EXPECT(cell == 0.0, "matrix cell " << cell);

    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 5. ROUGE-L against an exhaustive subsequence-enumeration oracle on 1,000
//    random short pairs.
bool is_subsequence(const std::vector<std::string>& needle,
                    const std::vector<std::string>& haystack) {
    std::size_t i = 0;
    for (const std::string& token : haystack)
        if (i < needle.size() && token == needle[i]) ++i;
    return i == needle.size();
}

bool criterion_rouge_oracle() {
    int before = g_checks_failed;
    std::mt19937 rng(20240809);
    const std::string alphabet[] = {"a", "b", "c", "d", "e"};

    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::string> a, b;
        std::size_t la = rng() % 11, lb = rng() % 11;
        for (std::size_t i = 0; i < la; ++i) a.push_back(alphabet[rng() % 5]);
        for (std::size_t i = 0; i < lb; ++i) b.push_back(alphabet[rng() % 5]);

        const auto& small = a.size() <= b.size() ? a : b;
        const auto& large = a.size() <= b.size() ? b : a;
        std::size_t oracle = 0;
        for (std::uint32_t mask = 0; mask < (1u << small.size()); ++mask) {
            std::vector<std::string> candidate;
            for (std::size_t i = 0; i < small.size(); ++i)
                if (mask & (1u << i)) candidate.push_back(small[i]);
            if (candidate.size() > oracle && is_subsequence(candidate, large))
                oracle = candidate.size();
        }

        auto join = [](const std::vector<std::string>& tokens) {
            std::string out;
            for (const auto& t : tokens) {
                if (!out.empty()) out += ' ';
                out += t;
            }
            return out;
        };
        RougeScore score = rouge_l(join(a), join(b), LanguageTag::en);
        EXPECT(score.lcs_len == oracle,
               "trial " << trial << ": dp " << score.lcs_len << " oracle "
                        << oracle);

        double p = a.empty() ? 0.0 : double(oracle) / double(a.size());
        double r = b.empty() ? 0.0 : double(oracle) / double(b.size());
        double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        EXPECT(std::abs(score.f1 - f1) == 0.0, "f1 trial " << trial);
        if (g_checks_failed != before) break;
    }
    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 6. Loss-audit identity GD + retain = GA to 1e-12 over 100 random corpora,
//    plus the hand example at alpha = 0.5.
bool criterion_loss_audit() {
    int before = g_checks_failed;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ll(-30.0, 0.0);
    std::uniform_real_distribution<double> alpha_dist(0.1, 2.0);

    for (int trial = 0; trial < 100; ++trial) {
        std::vector<LogProbRecord> records;
        std::size_t n = 2 + rng() % 64;
        records.push_back({"f-a-en", SplitLabel::forget, ll(rng), ""});
        records.push_back({"r-a-en", SplitLabel::retain, ll(rng), ""});
        for (std::size_t i = 0; i < n; ++i)
            records.push_back({std::to_string(i) + "-a-en",
                               rng() % 2 ? SplitLabel::forget
                                         : SplitLabel::retain,
                               ll(rng), ""});
        double alpha = alpha_dist(rng);
        LossAudit ga = loss_audit(records, alpha, LossVariant::GA);
        LossAudit gd = loss_audit(records, alpha, LossVariant::GD);
        EXPECT(std::abs(gd.total + gd.retain_term - ga.total) <= 1e-12,
               "trial " << trial);
    }

    std::vector<LogProbRecord> hand = {
        {"0-a-en", SplitLabel::forget, -1.0, ""},
        {"1-a-en", SplitLabel::forget, -3.0, ""},
        {"2-a-en", SplitLabel::retain, -0.5, ""},
    };
    LossAudit audit = loss_audit(hand, 0.5, LossVariant::GD);
    EXPECT(audit.forget_term == -2.0, audit.forget_term);
    EXPECT(audit.retain_term == -0.5, audit.retain_term);
    EXPECT(audit.total == -0.5, audit.total);
    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 7. CKA: self-similarity, symmetry/invariance to 1e-9, range, and
//    brute-force oracle equivalence for n, d <= 8 over 200 random matrices.
double cka_oracle(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    const long n = x.rows();
    auto centered = [&](const Eigen::MatrixXd& m) {
        Eigen::MatrixXd c = m;
        for (long j = 0; j < m.cols(); ++j) {
            double mean = 0.0;
            for (long i = 0; i < n; ++i) mean += m(i, j);
            mean /= double(n);
            for (long i = 0; i < n; ++i) c(i, j) -= mean;
        }
        return c;
    };
    Eigen::MatrixXd xc = centered(x), yc = centered(y);
    double cross = 0.0, xx = 0.0, yy = 0.0;
    for (long a = 0; a < yc.cols(); ++a)
        for (long b = 0; b < xc.cols(); ++b) {
            double dot = 0.0;
            for (long i = 0; i < n; ++i) dot += yc(i, a) * xc(i, b);
            cross += dot * dot;
        }
    for (long a = 0; a < xc.cols(); ++a)
        for (long b = 0; b < xc.cols(); ++b) {
            double dot = 0.0;
            for (long i = 0; i < n; ++i) dot += xc(i, a) * xc(i, b);
            xx += dot * dot;
        }
    for (long a = 0; a < yc.cols(); ++a)
        for (long b = 0; b < yc.cols(); ++b) {
            double dot = 0.0;
            for (long i = 0; i < n; ++i) dot += yc(i, a) * yc(i, b);
            yy += dot * dot;
        }
    return cross / (std::sqrt(xx) * std::sqrt(yy));
}

bool criterion_cka() {
    int before = g_checks_failed;
    std::mt19937 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto random_matrix = [&](long n, long d) {
        Eigen::MatrixXd m(n, d);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < d; ++j) m(i, j) = normal(rng);
        return m;
    };

    for (int trial = 0; trial < 200; ++trial) {
        long n = 2 + rng() % 7;
        long dx = 1 + rng() % 8;
        long dy = 1 + rng() % 8;
        Eigen::MatrixXd x = random_matrix(n, dx);
        Eigen::MatrixXd y = random_matrix(n, dy);

        double v = linear_cka(x, y);
        EXPECT(std::abs(v - cka_oracle(x, y)) <= 1e-9, "oracle trial "
                                                           << trial);
        EXPECT(v >= -1e-12 && v <= 1.0 + 1e-12, "range " << v);
        EXPECT(std::abs(v - linear_cka(y, x)) <= 1e-9, "symmetry");
        EXPECT(std::abs(linear_cka(x, x) - 1.0) <= 1e-12, "self-similarity");
        if (g_checks_failed != before) break;
    }

    Eigen::MatrixXd x = random_matrix(32, 6);
    Eigen::MatrixXd y = random_matrix(32, 6);
    double base = linear_cka(x, y);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(6, 6));
    Eigen::MatrixXd q = qr.householderQ();
    EXPECT(std::abs(linear_cka(x * q, y) - base) <= 1e-9, "orthogonal");
    EXPECT(std::abs(linear_cka(x, y * 2.5) - base) <= 1e-9, "scaling");
    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 8. Detector quality on the bundled labeled snippet corpus: >= 95% on
//    Latin fragments of >= 3 tokens, 100% on single-script non-Latin
//    snippets, determinism via repeated-run hashing.
bool criterion_detector() {
    int before = g_checks_failed;
    std::ifstream in(std::string(UNLEARN_EVAL_DATA_DIR) +
                     "/langid/snippets.jsonl");
    EXPECT(in.good(), "snippets.jsonl readable");
    if (!in.good()) return false;

    struct Snippet {
        std::string lang, text;
        int tokens;
    };
    std::vector<Snippet> snippets;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto doc = nlohmann::json::parse(line);
        snippets.push_back({doc["lang"], doc["text"], doc["tokens"]});
    }

    DetectorConfig latin = bundled_detector(
        {LanguageTag::en, LanguageTag::de, LanguageTag::es});
    DetectorConfig full = bundled_detector(
        std::vector<LanguageTag>(kAllLanguages.begin(), kAllLanguages.end()));

    int latin_total = 0, latin_correct = 0;
    int script_total = 0, script_correct = 0;
    for (const Snippet& s : snippets) {
        bool is_latin = s.lang == "en" || s.lang == "de" || s.lang == "es";
        if (is_latin) {
            auto tag = detect(s.text, latin);
            ++latin_total;
            latin_correct += tag && to_string(*tag) == s.lang;
        } else {
            auto tag = detect(s.text, full);
            ++script_total;
            script_correct += tag && to_string(*tag) == s.lang;
        }
    }
    EXPECT(latin_total >= 300, latin_total);
    EXPECT(script_total >= 200, script_total);
    double latin_acc = double(latin_correct) / latin_total;
    std::cout << "    latin accuracy " << latin_correct << "/" << latin_total
              << " = " << latin_acc << ", non-latin " << script_correct << "/"
              << script_total << '\n';
    EXPECT(latin_acc >= 0.95, latin_acc);
    EXPECT(script_correct == script_total, "non-latin exactness");

    auto run_hash = [&] {
        std::string trace;
        for (const Snippet& s : snippets) {
            auto tag = detect(s.text, full);
            trace += tag ? to_string(*tag) : "und";
            trace += '\n';
        }
        return fnv1a64(trace);
    };
    std::uint64_t h1 = run_hash(), h2 = run_hash(), h3 = run_hash();
    EXPECT(h1 == h2 && h2 == h3, "determinism hash");
    return g_checks_failed == before;
}

// ---------------------------------------------------------------------------
// 9. Identity model endpoint: EM = KM = 1.00 and N-Mix <= 2 for every
//    language and split.
bool criterion_identity_endpoint() {
    int before = g_checks_failed;

    GenSpec spec;
    auto profiles = generate_profiles(spec, bundled_tables());
    auto pairs = render_qa(profiles, bundled_tables(), spec);
    assign_split(pairs, spec);
    auto generations =
        synthesize_generations(pairs, parse_behavior("identity"), "id", 0);

    auto scores = score_corpus(generations);
    DetectorConfig detector = bundled_detector(spec.languages);
    auto nmix = nmix_corpus(generations, kDefaultNMixLevels, detector);

    for (LanguageTag lang : spec.languages) {
        for (SplitLabel split : {SplitLabel::forget, SplitLabel::retain}) {
            const RefGroupStats& s = scores.at({"id", lang, split});
            EXPECT(s.em_mean == 1.0, "em " << to_string(lang));
            EXPECT(s.km_mean == 1.0, "km " << to_string(lang));
            const NMixGroupStats& n = nmix.at({"id", lang, split});
            EXPECT(n.mean && *n.mean <= 2.0,
                   "nmix " << to_string(lang) << "/" << to_string(split)
                           << " = " << (n.mean ? *n.mean : -1.0));
        }
    }
    return g_checks_failed == before;
}

struct Criterion {
    const char* name;
    bool (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"1. dataset law (1400 pairs, 40 profiles, 14 forget/lang, "
         "reproducible, <5s)", criterion_dataset_law},
        {"2. n-mix validation matrix (diag <=2, cross-script >=90, "
         "within-latin >=70, <30s)", criterion_nmix_matrix},
        {"3. false-negative reproduction (confused:zh, EM=KM=0 +-0.01 "
         "off-zh, 1.00 on zh, n-mix >=95/0, <60s)",
         criterion_false_negative},
        {"4. semantic judge sees through confusion (retain >=0.95, forget "
         "<=0.10, matrix all-zero)", criterion_semantic_judge},
        {"5. rouge-l equals exhaustive subsequence oracle (1000 pairs)",
         criterion_rouge_oracle},
        {"6. loss-audit identity GD + retain = GA to 1e-12 (100 corpora)",
         criterion_loss_audit},
        {"7. cka properties and brute-force oracle (200 matrices)",
         criterion_cka},
        {"8. detector quality (latin >=95%, non-latin 100%, deterministic)",
         criterion_detector},
        {"9. identity endpoint (EM=KM=1.00, n-mix <=2 everywhere)",
         criterion_identity_endpoint},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        bool ok = criterion.run();
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion.name << "\n";
        failed += !ok;
    }
    std::cout << (failed == 0 ? "ACCEPTANCE: all criteria passed\n"
                              : "ACCEPTANCE: " + std::to_string(failed) +
                                    " criterion(s) failed\n");
    return failed;
}
