#include "unlearn_eval/refmetrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "unlearn_eval/segmenter.hpp"
#include "unlearn_eval/unicode.hpp"

namespace uleval {

namespace {

std::vector<std::string> rouge_tokens(std::string_view text,
                                      const RougeOptions& options) {
    std::vector<std::string> out;
    for (const Token& token : tokenize(text))
        out.push_back(options.lowercase ? fold_case(token.text) : token.text);
    return out;
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    // Two-row DP; rows iterate over `a`, columns over `b`.
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

int exact_match(std::string_view output, std::string_view reference) {
    std::string a = nfc(trim_ascii(output));
    std::string b = nfc(trim_ascii(reference));
    return a == b ? 1 : 0;
}

RougeScore rouge_l(std::string_view output, std::string_view reference,
                   LanguageTag /*lang*/, const RougeOptions& options) {
    std::vector<std::string> out_tokens = rouge_tokens(output, options);
    std::vector<std::string> ref_tokens = rouge_tokens(reference, options);

    RougeScore score;
    score.lcs_len = lcs_length(out_tokens, ref_tokens);
    double lcs = static_cast<double>(score.lcs_len);
    score.precision =
        out_tokens.empty() ? 0.0 : lcs / static_cast<double>(out_tokens.size());
    score.recall =
        ref_tokens.empty() ? 0.0 : lcs / static_cast<double>(ref_tokens.size());
    double denom = score.precision + score.recall;
    score.f1 = denom > 0.0 ? 2.0 * score.precision * score.recall / denom : 0.0;
    return score;
}

std::map<GroupKey, RefGroupStats> score_corpus(
    const std::vector<GenerationRecord>& records,
    const ScoreOptions& options) {
    struct Accumulator {
        double em_sum = 0.0;
        double km_sum = 0.0;
        std::int64_t n = 0;
    };
    std::map<GroupKey, Accumulator> acc;
    for (const GenerationRecord& record : records) {
        GroupKey key{record.model_id, record.query_language, record.split};
        Accumulator& a = acc[key];
        a.em_sum += exact_match(record.output, record.reference);
        RougeScore rouge = rouge_l(record.output, record.reference,
                                   record.query_language, options.rouge);
        a.km_sum += options.km_use_recall ? rouge.recall : rouge.f1;
        ++a.n;
    }
    std::map<GroupKey, RefGroupStats> out;
    for (const auto& [key, a] : acc) {
        RefGroupStats stats;
        stats.n_records = a.n;
        stats.em_mean = a.em_sum / static_cast<double>(a.n);
        stats.km_mean = a.km_sum / static_cast<double>(a.n);
        out[key] = stats;
    }
    return out;
}

LossVariant parse_loss_variant(std::string_view text) {
    if (text == "ga" || text == "GA") return LossVariant::GA;
    if (text == "gd" || text == "GD") return LossVariant::GD;
    throw std::invalid_argument("unknown loss variant: '" + std::string(text) +
                                "' (expected ga or gd)");
}

LossAudit loss_audit(const std::vector<LogProbRecord>& records, double alpha,
                     LossVariant variant) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("loss_audit: alpha must be positive");

    double forget_sum = 0.0, retain_sum = 0.0;
    std::int64_t n_forget = 0, n_retain = 0;
    for (const LogProbRecord& r : records) {
        if (r.split == SplitLabel::forget) {
            forget_sum += r.log_likelihood;
            ++n_forget;
        } else {
            retain_sum += r.log_likelihood;
            ++n_retain;
        }
    }
    if (n_forget == 0)
        throw std::invalid_argument("loss_audit: no records in split 'forget'");
    if (variant == LossVariant::GD && n_retain == 0)
        throw std::invalid_argument("loss_audit: no records in split 'retain'");

    LossAudit audit;
    audit.variant = variant;
    audit.alpha = alpha;
    audit.n_forget = n_forget;
    audit.n_retain = n_retain;
    audit.forget_term = forget_sum / static_cast<double>(n_forget);
    if (variant == LossVariant::GA) {
        audit.retain_term = 0.0;
        audit.total = alpha * audit.forget_term;
    } else {
        audit.retain_term = retain_sum / static_cast<double>(n_retain);
        audit.total = alpha * audit.forget_term - audit.retain_term;
    }
    return audit;
}

}  // namespace uleval
