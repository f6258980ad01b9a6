#pragma once

#include <string>
#include <vector>

#include "unlearn_eval/records.hpp"

namespace uleval {

enum class ViolationKind {
    MissingVariant,      // a (profile, attribute) cell lacks a language
    SplitInconsistency,  // a profile straddles forget and retain
    DuplicatePairId,
    EmptyText,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<LanguageTag> languages;  // inferred from the data
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

// Semantic checks over a QA dataset: parallelism across the inferred
// language set, per-profile split coherence, pair_id uniqueness, nonempty
// texts. Problems are reported, never thrown.
ValidationReport validate_dataset(const std::vector<QAPair>& pairs);

// Cross-checks generation records against the dataset they were produced
// from: pair_id known, query_language/split/reference agree. Returns one
// message per mismatch.
std::vector<std::string> check_generations_against_qa(
    const std::vector<GenerationRecord>& generations,
    const std::vector<QAPair>& pairs);

}  // namespace uleval
