#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unlearn_eval/lang.hpp"

namespace uleval {

// Per-language scoring model for the Latin disambiguation stage. Marker
// characters and stopwords are weighted sets; trigram_logfreq maps a
// 3-codepoint window of normalized text to a log relative frequency.
// Profiles are data files (data/langid/<lang>.json) built offline by
// scripts/build_langid_profiles.py from the bundled template, pool and
// word-list corpora.
struct FrequencyProfile {
    LanguageTag language = LanguageTag::en;
    int version = 0;
    std::map<char32_t, double> marker_chars;
    std::map<std::string, double> stopwords;
    std::map<std::string, double> trigram_logfreq;
    double trigram_floor = -14.0;
};

struct DetectorConfig {
    std::vector<LanguageTag> candidates;
    std::map<LanguageTag, FrequencyProfile> latin_profiles;
    int min_alphabetic_chars = 1;
};

FrequencyProfile parse_profile_json(std::string_view json_text);
FrequencyProfile load_profile_file(const std::string& path);

// Builds a config over `candidates`, validating that every Latin candidate
// has a profile. Throws std::invalid_argument otherwise.
DetectorConfig make_detector(std::vector<LanguageTag> candidates,
                             std::map<LanguageTag, FrequencyProfile> profiles,
                             int min_alphabetic_chars = 1);

// Config backed by the profiles compiled into the library (identical to the
// files under data/langid/).
DetectorConfig bundled_detector(std::vector<LanguageTag> candidates,
                                int min_alphabetic_chars = 1);

// Same, but profiles come from <dir>/<lang>.json for Latin candidates.
DetectorConfig detector_from_dir(std::vector<LanguageTag> candidates,
                                 const std::string& dir,
                                 int min_alphabetic_chars = 1);

// Two-stage identification restricted to config.candidates.
//
// Stage 1 counts codepoints per candidate script. Any evidence of a
// non-Latin candidate script decides immediately: those scripts identify
// exactly one candidate each, and short fragments routinely embed Latin
// proper names, so Latin letters never outvote them. Ties between non-Latin
// scripts resolve in the fixed order Han < Hangul < Cyrillic < Devanagari
// < Thai.
//
// Stage 2 scores each Latin candidate as
//     3 * marker hits + 2 * stopword hits + mean trigram log-frequency
// over the folded, space-padded text; ties resolve en < de < es.
//
// Returns nullopt when fewer than min_alphabetic_chars codepoints of any
// candidate script are present.
std::optional<LanguageTag> detect(std::string_view text,
                                  const DetectorConfig& config);

// The stage-2 normalized form: case-folded, non-Latin-letters mapped to
// space, runs collapsed, padded with one space on each side. Exposed so the
// offline profile builder and tests share the exact convention.
std::string trigram_normalize(std::string_view text);

}  // namespace uleval
