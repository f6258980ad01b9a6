#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unlearn_eval/judge.hpp"
#include "unlearn_eval/nmix.hpp"
#include "unlearn_eval/records.hpp"
#include "unlearn_eval/refmetrics.hpp"

namespace uleval {

inline constexpr std::string_view kToolName = "unlearn-eval";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class OutputFormat { csv, json, md };

OutputFormat parse_format(std::string_view text);

// ---- combined metric table -----------------------------------------------

void merge_scores(MetricReport& report,
                  const std::map<GroupKey, RefGroupStats>& scores);
void merge_nmix(MetricReport& report,
                const std::map<GroupKey, NMixGroupStats>& stats);
void merge_judge(MetricReport& report,
                 const std::map<GroupKey, JudgeGroupStats>& stats);

std::string render_report(const MetricReport& report, OutputFormat format);

// ---- per-command tables ----------------------------------------------------

std::string render_score_csv(const std::map<GroupKey, RefGroupStats>& scores,
                             bool with_em = true, bool with_km = true);
std::string render_nmix_csv(const std::map<GroupKey, NMixGroupStats>& stats);
std::string render_judge_csv(const std::map<GroupKey, JudgeGroupStats>& stats);
std::string render_judge_matrix_csv(const JudgeMatrix& matrix);

// Reads a CSV previously written by score/nmix/judge (recognized by its
// header) and merges its rows into the combined report, leaving columns the
// file does not carry untouched.
void merge_metric_csv(MetricReport& report, const std::string& path);

// ---- manifest --------------------------------------------------------------

// Every CLI run drops one of these beside its outputs: config echo, input
// file hashes, output names, tool version, judge prompt hash when relevant.
// Content is deliberately timestamp-free so identical runs produce identical
// manifests.
struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, std::string>> input_hashes;
    std::vector<std::string> outputs;
    std::string prompt_hash;  // empty unless the judge was involved
};

void write_manifest(const std::string& path, const Manifest& manifest);

void write_text_file(const std::string& path, const std::string& content);

// Fixed-precision numeric rendering shared by every table writer.
std::string format_ratio(double value);  // 4 decimals, for [0,1] metrics
std::string format_nmix(double value);   // 2 decimals, for [0,100] scores

}  // namespace uleval
