#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unlearn_eval/nmix.hpp"  // GroupKey
#include "unlearn_eval/records.hpp"

namespace uleval {

struct JudgeConfig {
    std::string endpoint_url;  // chat-completion compatible POST endpoint
    std::string model_name;
    std::string api_key_env_var = "UNLEARN_EVAL_API_KEY";  // name, never value
    int max_concurrency = 4;
    int retries = 2;
    std::chrono::milliseconds timeout{30000};
    std::string cache_dir;  // empty disables caching
    double temperature = 0.0;
    double requests_per_second = 0.0;  // 0 = unthrottled
};

enum class VerdictValue { YES, NO, AMBIGUOUS };

constexpr std::string_view to_string(VerdictValue v) {
    switch (v) {
        case VerdictValue::YES: return "YES";
        case VerdictValue::NO: return "NO";
        case VerdictValue::AMBIGUOUS: return "AMBIGUOUS";
    }
    return "??";
}

struct Verdict {
    VerdictValue value = VerdictValue::AMBIGUOUS;
    std::string raw_response;
    bool cached = false;
};

// The versioned instruction template. Its hash travels in run manifests so
// reports are traceable to the exact prompt text.
std::string_view judge_prompt_template();
std::string judge_prompt_hash();

// Deterministic prompt asking for informational equivalence regardless of
// language, answered with exactly [YES] or [NO]. Payload texts are fenced
// and any fence-like sequences inside them are neutralized.
std::string build_prompt(std::string_view output, std::string_view reference);

// First bracketed [YES]/[NO] token wins, case-insensitive, prose tolerated;
// a bare yes/no as the whole trimmed response also parses. Everything else
// is AMBIGUOUS. Total and pure.
Verdict parse_verdict(std::string_view response);

// Transport abstraction so tests can count or fail requests. complete()
// returns the assistant text; throws on transport failure.
class JudgeTransport {
  public:
    virtual ~JudgeTransport() = default;
    virtual std::string complete(const std::string& prompt,
                                 const JudgeConfig& config) = 0;
};

std::unique_ptr<JudgeTransport> make_http_transport();

struct JudgeGroupStats {
    double yes_ratio = 0.0;  // YES / (YES + NO); 0 when both are zero
    std::int64_t n_yes = 0;
    std::int64_t n_no = 0;
    std::int64_t n_ambiguous = 0;
};

// One request per record, bounded by config.max_concurrency, cached by a
// content key of (model, prompt) under config.cache_dir. Records whose
// request still fails after retries become AMBIGUOUS; the run aborts with
// NetworkError only if every issued request failed.
std::map<GroupKey, JudgeGroupStats> judge_corpus(
    const std::vector<GenerationRecord>& records, const JudgeConfig& config,
    JudgeTransport& transport);

// ---- Offline deterministic judge ----------------------------------------

// What the mock judge knows about one pair: the profile name and the pair's
// attribute value in every configured language.
struct MockPairContext {
    std::string name;
    std::vector<std::string> values;
};

// Context assembled from a profiles file; pair ids resolve through their
// deterministic "{profile_id}-{attribute}-{lang}" shape.
class QaContext {
  public:
    explicit QaContext(const std::vector<Profile>& profiles);

    // Throws std::invalid_argument for an unparseable or unknown pair_id.
    MockPairContext for_pair(const std::string& pair_id) const;

  private:
    std::map<std::int64_t, const Profile*> by_id_;
    std::vector<Profile> profiles_;
};

// YES iff the output contains, after NFC + case folding, the pair's
// attribute value in any configured language and the profile name.
// Word-ish boundary matching keeps "male" from matching inside "female".
VerdictValue mock_judge(std::string_view output, std::string_view reference,
                        const MockPairContext& context);

std::map<GroupKey, JudgeGroupStats> mock_judge_corpus(
    const std::vector<GenerationRecord>& records, const QaContext& context);

// ---- Cross-language judge validation -------------------------------------

// matrix[a][b] = fraction of parallel answer pairs (answer in languages[a]
// judged against the same pair's answer in languages[b]) judged NO.
struct JudgeMatrix {
    std::vector<LanguageTag> languages;
    std::vector<std::vector<double>> non_equivalence;
};

JudgeMatrix validate_judge_mock(const std::vector<QAPair>& pairs,
                                const QaContext& context);

JudgeMatrix validate_judge(const std::vector<QAPair>& pairs,
                           const JudgeConfig& config,
                           JudgeTransport& transport);

}  // namespace uleval
