#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unlearn_eval/lang.hpp"

namespace uleval {

enum class SplitLabel { forget, retain };

constexpr std::string_view to_string(SplitLabel split) {
    return split == SplitLabel::forget ? "forget" : "retain";
}

std::optional<SplitLabel> parse_split(std::string_view text);

// The seven profile attributes, in canonical order.
inline constexpr std::array<std::string_view, 7> kAttributeKeys = {
    "gender",   "birthday",  "employment", "residence",
    "religion", "education", "hobby"};

bool is_attribute_key(std::string_view key);

// One synthetic person: a name (kept in English everywhere) plus per-language
// renderings of each attribute value. Birthday is identical across languages.
struct Profile {
    std::int64_t profile_id = 0;
    std::string name;
    std::map<std::string, std::map<LanguageTag, std::string>> attributes;
    std::string extra_json;  // unknown input fields, preserved verbatim

    bool operator==(const Profile&) const = default;
};

// One (question, answer) record; pair_id is "{profile_id}-{attribute}-{lang}".
// A profile's pairs share one split across all attributes and languages.
struct QAPair {
    std::string pair_id;
    std::int64_t profile_id = 0;
    std::string attribute;
    LanguageTag language = LanguageTag::en;
    std::string question;
    std::string answer;
    SplitLabel split = SplitLabel::retain;
    std::string extra_json;

    bool operator==(const QAPair&) const = default;
};

// A model output joined to its query and ground-truth reference. Split is
// denormalized so generation files score without the dataset file present.
struct GenerationRecord {
    std::string pair_id;
    LanguageTag query_language = LanguageTag::en;
    std::string question;
    std::string reference;
    std::string output;
    std::string model_id;
    SplitLabel split = SplitLabel::retain;
    std::string extra_json;

    bool operator==(const GenerationRecord&) const = default;
};

// Externally supplied per-example log-likelihood log F(a|q).
struct LogProbRecord {
    std::string pair_id;
    SplitLabel split = SplitLabel::retain;
    double log_likelihood = 0.0;
    std::string extra_json;

    bool operator==(const LogProbRecord&) const = default;
};

// One aggregated row per (model, query language, split); absent metrics stay
// unset. The report command renders lists of these.
struct MetricRow {
    std::string model_id;
    LanguageTag query_language = LanguageTag::en;
    SplitLabel split = SplitLabel::retain;
    std::optional<double> em;
    std::optional<double> km;
    std::optional<double> nmix_avg;
    std::optional<double> judge_ratio;
    std::int64_t n_records = 0;
};

struct MetricReport {
    std::vector<MetricRow> rows;
};

}  // namespace uleval
