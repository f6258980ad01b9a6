#include "unlearn_eval/dataset.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace uleval {

ValidationReport validate_dataset(const std::vector<QAPair>& pairs) {
    ValidationReport report;

    std::set<LanguageTag> languages;
    for (const QAPair& p : pairs) languages.insert(p.language);
    report.languages.assign(languages.begin(), languages.end());

    std::map<std::string, int> id_counts;
    std::map<std::pair<std::int64_t, std::string>, std::set<LanguageTag>> cells;
    std::map<std::int64_t, std::set<SplitLabel>> profile_splits;

    for (const QAPair& p : pairs) {
        ++id_counts[p.pair_id];
        cells[{p.profile_id, p.attribute}].insert(p.language);
        profile_splits[p.profile_id].insert(p.split);
        if (p.question.empty())
            report.violations.push_back(
                {ViolationKind::EmptyText,
                 "empty question in pair '" + p.pair_id + "'"});
        if (p.answer.empty())
            report.violations.push_back(
                {ViolationKind::EmptyText,
                 "empty answer in pair '" + p.pair_id + "'"});
    }

    for (const auto& [id, count] : id_counts) {
        if (count > 1)
            report.violations.push_back(
                {ViolationKind::DuplicatePairId,
                 "pair_id '" + id + "' appears " + std::to_string(count) +
                     " times"});
    }

    for (const auto& [cell, present] : cells) {
        for (LanguageTag lang : languages) {
            if (present.count(lang)) continue;
            report.violations.push_back(
                {ViolationKind::MissingVariant,
                 "profile " + std::to_string(cell.first) + " attribute '" +
                     cell.second + "' has no " +
                     std::string(to_string(lang)) + " variant"});
        }
    }

    for (const auto& [profile_id, splits] : profile_splits) {
        if (splits.size() > 1)
            report.violations.push_back(
                {ViolationKind::SplitInconsistency,
                 "profile " + std::to_string(profile_id) +
                     " has pairs in both splits"});
    }

    return report;
}

std::vector<std::string> check_generations_against_qa(
    const std::vector<GenerationRecord>& generations,
    const std::vector<QAPair>& pairs) {
    std::map<std::string, const QAPair*> by_id;
    for (const QAPair& p : pairs) by_id[p.pair_id] = &p;

    std::vector<std::string> problems;
    for (const GenerationRecord& g : generations) {
        auto it = by_id.find(g.pair_id);
        if (it == by_id.end()) {
            problems.push_back("generation references unknown pair_id '" +
                               g.pair_id + "'");
            continue;
        }
        const QAPair& p = *it->second;
        if (g.query_language != p.language)
            problems.push_back("pair '" + g.pair_id + "': query_language " +
                               std::string(to_string(g.query_language)) +
                               " != dataset language " +
                               std::string(to_string(p.language)));
        if (g.split != p.split)
            problems.push_back("pair '" + g.pair_id + "': split " +
                               std::string(to_string(g.split)) +
                               " != dataset split " +
                               std::string(to_string(p.split)));
        if (g.reference != p.answer)
            problems.push_back("pair '" + g.pair_id +
                               "': reference differs from dataset answer");
    }
    return problems;
}

}  // namespace uleval
