#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "unlearn_eval/langid.hpp"
#include "unlearn_eval/records.hpp"

namespace uleval {

inline const std::vector<int> kDefaultNMixLevels = {3, 4, 5, 6};

struct NMixResult {
    std::map<int, double> per_n;              // only non-skipped levels
    std::map<int, std::size_t> fragments_scored;
    double avg = 0.0;
    bool skipped = false;  // true iff every level had no scorable fragment
};

// 100 x (fragments whose detected language differs from query_lang) /
// (fragments with any detection). Undetectable fragments drop out of both
// counts; nullopt when nothing is detectable. Throws for n = 0.
std::optional<double> nmix_n(std::string_view sentence, int n,
                             LanguageTag query_lang,
                             const DetectorConfig& detector);

// Arithmetic mean of nmix_n over the non-skipped levels; the default level
// set is {3,4,5,6}. Throws for an empty level set.
NMixResult nmix_average(std::string_view sentence,
                        const std::vector<int>& levels,
                        LanguageTag query_lang,
                        const DetectorConfig& detector);

struct GroupKey {
    std::string model_id;
    LanguageTag query_language = LanguageTag::en;
    SplitLabel split = SplitLabel::retain;

    auto operator<=>(const GroupKey&) const = default;
};

struct NMixGroupStats {
    std::optional<double> mean;  // unset when every record was skipped
    std::int64_t n_scored = 0;
    std::int64_t n_skipped = 0;
};

// Per-record N-Mix average first (Eq. 8), then the per-group mean over the
// records that produced a score; skipped records are counted separately.
std::map<GroupKey, NMixGroupStats> nmix_corpus(
    const std::vector<GenerationRecord>& records,
    const std::vector<int>& levels, const DetectorConfig& detector);

}  // namespace uleval
