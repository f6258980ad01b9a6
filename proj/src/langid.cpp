#include "unlearn_eval/langid.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "unlearn_eval/embedded_data.hpp"
#include "unlearn_eval/errors.hpp"
#include "unlearn_eval/segmenter.hpp"
#include "unlearn_eval/unicode.hpp"

namespace uleval {

namespace {

using nlohmann::json;

std::optional<LanguageTag> unique_candidate_for(
    ScriptClass script, const std::vector<LanguageTag>& candidates) {
    if (script == ScriptClass::Latin) return std::nullopt;
    for (LanguageTag lang : candidates) {
        if (script_of(lang) == script) return lang;
    }
    return std::nullopt;
}

double latin_score(std::string_view text, const FrequencyProfile& profile) {
    std::string folded = fold_case(text);

    double markers = 0.0;
    for (char32_t cp : utf8_decode(folded)) {
        auto it = profile.marker_chars.find(cp);
        if (it != profile.marker_chars.end()) markers += it->second;
    }

    double stopwords = 0.0;
    for (const Token& token : tokenize(folded)) {
        auto it = profile.stopwords.find(token.text);
        if (it != profile.stopwords.end()) stopwords += it->second;
    }

    std::string normalized = trigram_normalize(text);
    std::vector<char32_t> cps = utf8_decode(normalized);
    double trigram_sum = 0.0;
    std::size_t trigram_count = 0;
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
        std::string key;
        utf8_append(key, cps[i]);
        utf8_append(key, cps[i + 1]);
        utf8_append(key, cps[i + 2]);
        auto it = profile.trigram_logfreq.find(key);
        trigram_sum += it != profile.trigram_logfreq.end() ? it->second
                                                           : profile.trigram_floor;
        ++trigram_count;
    }
    double trigram_mean =
        trigram_count > 0 ? trigram_sum / static_cast<double>(trigram_count)
                          : profile.trigram_floor;

    return 3.0 * markers + 2.0 * stopwords + trigram_mean;
}

}  // namespace

std::string trigram_normalize(std::string_view text) {
    std::string folded = fold_case(text);
    std::vector<char32_t> out;
    bool pending_space = true;  // collapses leading/duplicate separators
    for (char32_t cp : utf8_decode(folded)) {
        if (script_of_codepoint(cp) == ScriptClass::Latin) {
            if (pending_space) {
                out.push_back(U' ');
                pending_space = false;
            }
            out.push_back(cp);
        } else {
            pending_space = true;
        }
    }
    if (out.empty()) return {};
    out.push_back(U' ');
    return utf8_encode(out);
}

FrequencyProfile parse_profile_json(std::string_view json_text) {
    json doc = json::parse(json_text);
    FrequencyProfile profile;
    profile.language = language_from_code(doc.at("language").get<std::string>());
    profile.version = doc.value("version", 1);
    profile.trigram_floor = doc.at("trigram_floor").get<double>();
    for (auto& [key, value] : doc.at("markers").items()) {
        std::vector<char32_t> cps = utf8_decode(key);
        if (cps.size() != 1)
            throw SchemaError("marker key must be a single codepoint: " + key);
        profile.marker_chars[cps[0]] = value.get<double>();
    }
    for (auto& [key, value] : doc.at("stopwords").items())
        profile.stopwords[key] = value.get<double>();
    for (auto& [key, value] : doc.at("trigrams").items())
        profile.trigram_logfreq[key] = value.get<double>();
    return profile;
}

FrequencyProfile load_profile_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open language profile: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_profile_json(buffer.str());
    } catch (const json::exception& e) {
        throw SchemaError("malformed language profile " + path + ": " +
                          e.what());
    }
}

DetectorConfig make_detector(std::vector<LanguageTag> candidates,
                             std::map<LanguageTag, FrequencyProfile> profiles,
                             int min_alphabetic_chars) {
    if (candidates.empty())
        throw std::invalid_argument("detector needs at least one candidate");
    DetectorConfig config;
    config.candidates = std::move(candidates);
    config.latin_profiles = std::move(profiles);
    config.min_alphabetic_chars = min_alphabetic_chars;
    for (LanguageTag lang : config.candidates) {
        if (script_of(lang) == ScriptClass::Latin &&
            config.latin_profiles.find(lang) == config.latin_profiles.end())
            throw std::invalid_argument(
                "missing frequency profile for Latin candidate: " +
                std::string(to_string(lang)));
    }
    return config;
}

DetectorConfig bundled_detector(std::vector<LanguageTag> candidates,
                                int min_alphabetic_chars) {
    std::map<LanguageTag, FrequencyProfile> profiles;
    for (LanguageTag lang : candidates) {
        if (script_of(lang) != ScriptClass::Latin) continue;
        profiles[lang] =
            parse_profile_json(embedded::langid_profile_json(lang));
    }
    return make_detector(std::move(candidates), std::move(profiles),
                         min_alphabetic_chars);
}

DetectorConfig detector_from_dir(std::vector<LanguageTag> candidates,
                                 const std::string& dir,
                                 int min_alphabetic_chars) {
    std::map<LanguageTag, FrequencyProfile> profiles;
    for (LanguageTag lang : candidates) {
        if (script_of(lang) != ScriptClass::Latin) continue;
        profiles[lang] =
            load_profile_file(dir + "/" + std::string(to_string(lang)) + ".json");
    }
    return make_detector(std::move(candidates), std::move(profiles),
                         min_alphabetic_chars);
}

std::optional<LanguageTag> detect(std::string_view text,
                                  const DetectorConfig& config) {
    std::array<int, 6> script_counts{};
    std::array<bool, 6> script_in_candidates{};
    for (LanguageTag lang : config.candidates)
        script_in_candidates[static_cast<std::size_t>(script_of(lang))] = true;

    int total = 0;
    for (char32_t cp : utf8_decode(text)) {
        auto script = script_of_codepoint(cp);
        if (!script) continue;
        auto idx = static_cast<std::size_t>(*script);
        if (!script_in_candidates[idx]) continue;
        ++script_counts[idx];
        ++total;
    }
    if (total < config.min_alphabetic_chars) return std::nullopt;

    // Stage 1: non-Latin candidate scripts each identify one language.
    ScriptClass best_script = ScriptClass::Latin;
    int best_count = 0;
    for (std::size_t i = 1; i < script_counts.size(); ++i) {
        if (script_counts[i] > best_count) {
            best_count = script_counts[i];
            best_script = static_cast<ScriptClass>(i);
        }
    }
    if (best_count > 0) return unique_candidate_for(best_script, config.candidates);

    // Stage 2: Latin candidates compete on profile scores. Iterating the
    // fixed enum order makes ties resolve en < de < es.
    if (script_counts[static_cast<std::size_t>(ScriptClass::Latin)] == 0)
        return std::nullopt;
    std::optional<LanguageTag> best;
    double best_score = 0.0;
    for (LanguageTag lang : kAllLanguages) {
        if (script_of(lang) != ScriptClass::Latin) continue;
        if (std::find(config.candidates.begin(), config.candidates.end(),
                      lang) == config.candidates.end())
            continue;
        double score = latin_score(text, config.latin_profiles.at(lang));
        if (!best || score > best_score) {
            best = lang;
            best_score = score;
        }
    }
    return best;
}

}  // namespace uleval
