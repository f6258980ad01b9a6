#include "unlearn_eval/synth.hpp"

#include <map>
#include <stdexcept>

namespace uleval {

SynthBehavior parse_behavior(std::string_view text) {
    SynthBehavior behavior;
    auto with_target = [&](std::string_view prefix,
                           SynthBehavior::Kind kind) -> bool {
        if (text.size() <= prefix.size() ||
            text.substr(0, prefix.size()) != prefix ||
            text[prefix.size()] != ':')
            return false;
        behavior.kind = kind;
        behavior.target =
            language_from_code(text.substr(prefix.size() + 1));
        return true;
    };
    if (text == "identity") {
        behavior.kind = SynthBehavior::Kind::identity;
    } else if (text == "refusal") {
        behavior.kind = SynthBehavior::Kind::refusal;
    } else if (text == "forget-aware") {
        behavior.kind = SynthBehavior::Kind::forget_aware;
    } else if (with_target("confused", SynthBehavior::Kind::confused) ||
               with_target("forget-aware-confused",
                           SynthBehavior::Kind::forget_aware_confused)) {
        // target parsed above
    } else {
        throw std::invalid_argument(
            "unknown behavior '" + std::string(text) +
            "' (expected identity, confused:<lang>, refusal, forget-aware "
            "or forget-aware-confused:<lang>)");
    }
    return behavior;
}

std::string_view refusal_text(LanguageTag lang) {
    switch (lang) {
        case LanguageTag::en: return "I don't know.";
        case LanguageTag::de: return "Ich weiß es nicht.";
        case LanguageTag::es: return "No lo sé.";
        case LanguageTag::zh: return "我不知道。";
        case LanguageTag::ru: return "Я не знаю.";
        case LanguageTag::ko: return "모르겠습니다.";
        case LanguageTag::hi: return "मुझे नहीं पता।";
        case LanguageTag::th: return "ฉันไม่ทราบ";
    }
    return "I don't know.";
}

std::vector<GenerationRecord> synthesize_generations(
    const std::vector<QAPair>& pairs, const SynthBehavior& behavior,
    const std::string& model_id, std::uint64_t /*seed*/) {
    using Kind = SynthBehavior::Kind;

    std::map<std::pair<std::int64_t, std::string>,
             std::map<LanguageTag, const QAPair*>>
        parallel;
    if (behavior.kind == Kind::confused ||
        behavior.kind == Kind::forget_aware_confused) {
        for (const QAPair& p : pairs)
            parallel[{p.profile_id, p.attribute}][p.language] = &p;
    }

    auto parallel_answer = [&](const QAPair& p) -> const std::string& {
        const auto& variants = parallel.at({p.profile_id, p.attribute});
        auto it = variants.find(*behavior.target);
        if (it == variants.end())
            throw std::invalid_argument(
                "confused target language '" +
                std::string(to_string(*behavior.target)) +
                "' has no parallel pair for '" + p.pair_id + "'");
        return it->second->answer;
    };

    std::vector<GenerationRecord> out;
    out.reserve(pairs.size());
    for (const QAPair& p : pairs) {
        GenerationRecord g;
        g.pair_id = p.pair_id;
        g.query_language = p.language;
        g.question = p.question;
        g.reference = p.answer;
        g.model_id = model_id;
        g.split = p.split;
        switch (behavior.kind) {
            case Kind::identity:
                g.output = p.answer;
                break;
            case Kind::confused:
                g.output = parallel_answer(p);
                break;
            case Kind::refusal:
                g.output = std::string(refusal_text(p.language));
                break;
            case Kind::forget_aware:
                g.output = p.split == SplitLabel::forget
                               ? std::string(refusal_text(p.language))
                               : p.answer;
                break;
            case Kind::forget_aware_confused:
                g.output = p.split == SplitLabel::forget
                               ? std::string(refusal_text(p.language))
                               : parallel_answer(p);
                break;
        }
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace uleval
