#include "unlearn_eval/nmix.hpp"

#include <stdexcept>

#include "unlearn_eval/segmenter.hpp"

namespace uleval {

std::optional<double> nmix_n(std::string_view sentence, int n,
                             LanguageTag query_lang,
                             const DetectorConfig& detector) {
    if (n <= 0) throw std::invalid_argument("nmix_n: n must be >= 1");
    TokenSequence tokens = tokenize(sentence);
    std::size_t mismatched = 0;
    std::size_t retained = 0;
    for (const std::string& fragment :
         ngrams(tokens, static_cast<std::size_t>(n))) {
        auto detected = detect(fragment, detector);
        if (!detected) continue;
        ++retained;
        if (*detected != query_lang) ++mismatched;
    }
    if (retained == 0) return std::nullopt;
    return 100.0 * static_cast<double>(mismatched) /
           static_cast<double>(retained);
}

NMixResult nmix_average(std::string_view sentence,
                        const std::vector<int>& levels,
                        LanguageTag query_lang,
                        const DetectorConfig& detector) {
    if (levels.empty())
        throw std::invalid_argument("nmix_average: empty level set");
    NMixResult result;
    TokenSequence tokens = tokenize(sentence);
    double sum = 0.0;
    for (int n : levels) {
        if (n <= 0) throw std::invalid_argument("nmix_average: n must be >= 1");
        std::size_t mismatched = 0;
        std::size_t retained = 0;
        for (const std::string& fragment :
             ngrams(tokens, static_cast<std::size_t>(n))) {
            auto detected = detect(fragment, detector);
            if (!detected) continue;
            ++retained;
            if (*detected != query_lang) ++mismatched;
        }
        if (retained == 0) continue;
        double score = 100.0 * static_cast<double>(mismatched) /
                       static_cast<double>(retained);
        result.per_n[n] = score;
        result.fragments_scored[n] = retained;
        sum += score;
    }
    if (result.per_n.empty()) {
        result.skipped = true;
        return result;
    }
    result.avg = sum / static_cast<double>(result.per_n.size());
    return result;
}

std::map<GroupKey, NMixGroupStats> nmix_corpus(
    const std::vector<GenerationRecord>& records,
    const std::vector<int>& levels, const DetectorConfig& detector) {
    struct Accumulator {
        double sum = 0.0;
        std::int64_t scored = 0;
        std::int64_t skipped = 0;
    };
    std::map<GroupKey, Accumulator> acc;
    for (const GenerationRecord& record : records) {
        GroupKey key{record.model_id, record.query_language, record.split};
        NMixResult r =
            nmix_average(record.output, levels, record.query_language, detector);
        Accumulator& a = acc[key];
        if (r.skipped) {
            ++a.skipped;
        } else {
            a.sum += r.avg;
            ++a.scored;
        }
    }
    std::map<GroupKey, NMixGroupStats> out;
    for (const auto& [key, a] : acc) {
        NMixGroupStats stats;
        stats.n_scored = a.scored;
        stats.n_skipped = a.skipped;
        if (a.scored > 0) stats.mean = a.sum / static_cast<double>(a.scored);
        out[key] = stats;
    }
    return out;
}

}  // namespace uleval
