#include <doctest.h>

#include <filesystem>

#include "test_util.hpp"

using testutil::CliResult;
using testutil::TempDir;
using testutil::run_cli;

TEST_CASE("cli: bad flags exit 2") {
    TempDir dir("cli-flags");
    CHECK(run_cli(dir, "definitely-not-a-command 2>/dev/null").exit_code == 2);
    CHECK(run_cli(dir, "gen --no-such-flag 2>/dev/null").exit_code == 2);
    CHECK(run_cli(dir, "synth-model --qa x.jsonl --behavior bogus "
                       "2>/dev/null").exit_code == 2);
}

TEST_CASE("cli: missing input file exits 3") {
    TempDir dir("cli-io");
    CliResult r = run_cli(dir, "score --generations /nonexistent.jsonl "
                               "--out-dir " + dir.str() + " 2>/dev/null");
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli: malformed records exit 4") {
    TempDir dir("cli-schema");
    testutil::write_file(dir.file("bad.jsonl"), "{\"pair_id\": 42}\n");
    CliResult r = run_cli(dir, "--out-dir " + dir.str() +
                               " score --generations bad.jsonl 2>/dev/null");
    CHECK(r.exit_code == 4);
}

TEST_CASE("cli: gen writes dataset, manifest, and is reproducible") {
    TempDir dir("cli-gen");
    std::string base = "--out-dir " + dir.str() + " gen --seed 11";
    REQUIRE(run_cli(dir, base + " 2>/dev/null").exit_code == 0);
    CHECK(std::filesystem::exists(dir.file("profiles.jsonl")));
    CHECK(std::filesystem::exists(dir.file("qa.jsonl")));
    CHECK(std::filesystem::exists(dir.file("profiles.jsonl.manifest.json")));

    std::string profiles = testutil::read_file(dir.file("profiles.jsonl"));
    std::string qa = testutil::read_file(dir.file("qa.jsonl"));
    REQUIRE(run_cli(dir, base + " 2>/dev/null").exit_code == 0);
    CHECK(testutil::read_file(dir.file("profiles.jsonl")) == profiles);
    CHECK(testutil::read_file(dir.file("qa.jsonl")) == qa);

    std::string manifest =
        testutil::read_file(dir.file("profiles.jsonl.manifest.json"));
    CHECK(manifest.find("\"command\": \"gen\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": \"11\"") != std::string::npos);
}

TEST_CASE("cli: full pipeline gen -> synth -> score/nmix -> report") {
    TempDir dir("cli-pipe");
    std::string g = "--out-dir " + dir.str() + " ";
    REQUIRE(run_cli(dir, g + "gen 2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "synth-model --qa qa.jsonl --behavior identity "
                            "--out id.jsonl 2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "score --generations id.jsonl --qa qa.jsonl "
                            "--out score.csv 2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "nmix --generations id.jsonl --out nmix.csv "
                            "2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "judge --mock --profiles profiles.jsonl "
                            "--generations id.jsonl --out judge.csv "
                            "2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "report score.csv nmix.csv judge.csv "
                            "--out combined.csv 2>/dev/null").exit_code == 0);

    std::string combined = testutil::read_file(dir.file("combined.csv"));
    // identity model: em = km = judge = 1, nmix tiny
    CHECK(combined.find("synth-identity,zh,retain,1.0000,1.0000,0.00,1.0000,"
                        "266") != std::string::npos);
    CHECK(std::filesystem::exists(dir.file("combined.csv.manifest.json")));

    // report with only the EM/KM csv leaves other columns blank
    REQUIRE(run_cli(dir, g + "report score.csv --out em_only.csv "
                            "2>/dev/null").exit_code == 0);
    std::string em_only = testutil::read_file(dir.file("em_only.csv"));
    CHECK(em_only.find("synth-identity,zh,retain,1.0000,1.0000,,,266") !=
          std::string::npos);
}

TEST_CASE("cli: judge validation matrix under the mock judge") {
    TempDir dir("cli-judgeval");
    std::string g = "--out-dir " + dir.str() + " ";
    REQUIRE(run_cli(dir, g + "gen 2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "judge --mock --profiles profiles.jsonl "
                            "--validate --qa qa.jsonl --matrix-out m.csv "
                            "2>/dev/null").exit_code == 0);
    std::string matrix = testutil::read_file(dir.file("m.csv"));
    CHECK(matrix.find("answer_language,en,de,zh,ru,ko") == 0);
    CHECK(matrix.find("0.0000,0.0000,0.0000,0.0000,0.0000") !=
          std::string::npos);
}

TEST_CASE("cli: detect reads stdin and tags lines") {
    TempDir dir("cli-detect");
    testutil::write_file(dir.file("input.txt"),
                         "the quick brown fox\n"
                         "안녕하세요 여러분\n"
                         "1234 !!\n");
    CliResult r = run_cli(dir, "detect --lang-set en,de,zh,ru,ko 2>/dev/null",
                          dir.file("input.txt"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text ==
          "en\tthe quick brown fox\n"
          "ko\t안녕하세요 여러분\n"
          "und\t1234 !!\n");
}

TEST_CASE("cli: loss-audit prints the audit line") {
    TempDir dir("cli-loss");
    testutil::write_file(
        dir.file("lp.jsonl"),
        "{\"pair_id\":\"0-a-en\",\"split\":\"forget\",\"log_likelihood\":-1.5}\n"
        "{\"pair_id\":\"1-a-en\",\"split\":\"forget\",\"log_likelihood\":-2.5}\n"
        "{\"pair_id\":\"2-a-en\",\"split\":\"retain\",\"log_likelihood\":-0.5}\n");
    CliResult r = run_cli(dir, "--out-dir " + dir.str() +
                               " loss-audit --logprobs lp.jsonl --alpha 0.5 "
                               "--variant gd 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("variant=GD") != std::string::npos);
    CHECK(r.stdout_text.find("total=-0.5") != std::string::npos);

    // GD without retain records is a usage error
    testutil::write_file(
        dir.file("lp2.jsonl"),
        "{\"pair_id\":\"0-a-en\",\"split\":\"forget\",\"log_likelihood\":-1}\n");
    CHECK(run_cli(dir, "--out-dir " + dir.str() +
                       " loss-audit --logprobs lp2.jsonl --variant gd "
                       "2>/dev/null").exit_code == 2);
}

TEST_CASE("cli: cka over a matrix directory") {
    TempDir dir("cli-cka");
    std::filesystem::create_directories(dir.file("embeds"));
    testutil::write_file(dir.file("embeds/en.txt"), "3 2\n1 0\n0 1\n1 1\n");
    testutil::write_file(dir.file("embeds/de.txt"), "3 2\n2 0\n0 2\n2 2\n");
    CliResult r = run_cli(dir, "--out-dir " + dir.str() +
                               " cka --dir embeds --base en --out cka.csv "
                               "2>/dev/null");
    REQUIRE(r.exit_code == 0);
    std::string csv = testutil::read_file(dir.file("cka.csv"));
    CHECK(csv.find("language,cka") == 0);
    CHECK(csv.find("de,1.0000") != std::string::npos);  // scaled copy
    CHECK(csv.find("avg,1.0000") != std::string::npos);
}

TEST_CASE("cli: metric filter trims score columns") {
    TempDir dir("cli-metrics");
    std::string g = "--out-dir " + dir.str() + " ";
    REQUIRE(run_cli(dir, g + "gen --n-profiles 2 --forget-profiles 1 "
                            "2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "synth-model --qa qa.jsonl --behavior identity "
                            "--out id.jsonl 2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "score --generations id.jsonl --metrics em "
                            "--out em.csv 2>/dev/null").exit_code == 0);
    std::string csv = testutil::read_file(dir.file("em.csv"));
    CHECK(csv.find("model_id,query_language,split,em,n_records") == 0);
    CHECK(csv.find(",km") == std::string::npos);

    // joining the em-only csv leaves km blank
    REQUIRE(run_cli(dir, g + "report --inputs em.csv --out r.csv "
                            "2>/dev/null").exit_code == 0);
    std::string report = testutil::read_file(dir.file("r.csv"));
    CHECK(report.find("synth-identity,en,forget,1.0000,,,,7") !=
          std::string::npos);

    CHECK(run_cli(dir, g + "score --generations id.jsonl --metrics bleu "
                          "2>/dev/null").exit_code == 2);
}

TEST_CASE("cli: unreachable judge endpoint exits 5") {
    TempDir dir("cli-network");
    std::string g = "--out-dir " + dir.str() + " ";
    REQUIRE(run_cli(dir, g + "gen --n-profiles 2 --forget-profiles 1 "
                            "2>/dev/null").exit_code == 0);
    REQUIRE(run_cli(dir, g + "synth-model --qa qa.jsonl --behavior identity "
                            "--out id.jsonl 2>/dev/null").exit_code == 0);
    CliResult r = run_cli(dir, g + "judge --generations id.jsonl "
                                   "--endpoint http://127.0.0.1:9/v1/chat "
                                   "--model x --retries 0 --timeout-ms 300 "
                                   "2>/dev/null");
    CHECK(r.exit_code == 5);
}

TEST_CASE("cli: english worksheet export") {
    TempDir dir("cli-worksheet");
    REQUIRE(run_cli(dir, "--out-dir " + dir.str() +
                         " gen --export-english-tables worksheet.json "
                         "2>/dev/null").exit_code == 0);
    std::string ws = testutil::read_file(dir.file("worksheet.json"));
    CHECK(ws.find("\"pools\"") != std::string::npos);
    CHECK(ws.find("skydiving") != std::string::npos);
    CHECK(ws.find("\"de\"") == std::string::npos);  // English only
}
