#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "unlearn_eval/nmix.hpp"  // GroupKey
#include "unlearn_eval/records.hpp"

namespace uleval {

// 1 iff the two strings are codepoint-identical after NFC and ASCII
// whitespace trimming. Case-sensitive; no other normalization.
int exact_match(std::string_view output, std::string_view reference);

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t lcs_len = 0;
};

struct RougeOptions {
    bool lowercase = true;  // Latin/Cyrillic tokens are case-folded
};

// ROUGE-L between output and reference. Both sides tokenize under the
// segmenter's script rules (codepoint tokens for Han/Thai runs, word tokens
// elsewhere); `lang` names the query language of the record being scored.
RougeScore rouge_l(std::string_view output, std::string_view reference,
                   LanguageTag lang, const RougeOptions& options = {});

struct RefGroupStats {
    double em_mean = 0.0;
    double km_mean = 0.0;  // mean ROUGE-L F1 (or recall, per options)
    std::int64_t n_records = 0;
};

struct ScoreOptions {
    RougeOptions rouge;
    bool km_use_recall = false;
};

// Per-(model, language, split) means of EM and KM. Empty outputs score
// (0, 0) rather than being skipped.
std::map<GroupKey, RefGroupStats> score_corpus(
    const std::vector<GenerationRecord>& records,
    const ScoreOptions& options = {});

enum class LossVariant { GA, GD };

LossVariant parse_loss_variant(std::string_view text);

struct LossAudit {
    LossVariant variant = LossVariant::GA;
    double alpha = 1.0;
    double forget_term = 0.0;  // mean log-likelihood over forget records
    double retain_term = 0.0;  // mean over retain records; 0 for GA
    double total = 0.0;        // GA: alpha*forget; GD: alpha*forget - retain
    std::int64_t n_forget = 0;
    std::int64_t n_retain = 0;
};

// Scalar bookkeeping over supplied log-likelihoods; nothing is evaluated or
// differentiated. Requires alpha > 0, at least one forget record, and for
// GD at least one retain record (throws std::invalid_argument naming the
// missing split).
LossAudit loss_audit(const std::vector<LogProbRecord>& records, double alpha,
                     LossVariant variant);

}  // namespace uleval
