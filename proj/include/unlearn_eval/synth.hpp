#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unlearn_eval/records.hpp"

namespace uleval {

// Deterministic stand-ins for an unlearned model, used to exercise the
// metric stack end to end without any inference:
//   identity               output = reference
//   confused:<lang>        output = the parallel reference in <lang>
//   refusal                fixed per-language refusal string
//   forget-aware           reference on retain pairs, refusal on forget
//   forget-aware-confused:<lang>
//                          refusal on forget pairs, parallel <lang>
//                          reference on retain pairs (a model that
//                          "forgot" but answers retain queries in the
//                          wrong language)
struct SynthBehavior {
    enum class Kind { identity, confused, refusal, forget_aware,
                      forget_aware_confused };
    Kind kind = Kind::identity;
    std::optional<LanguageTag> target;  // set for the confused variants
};

// Parses "identity", "confused:zh", "refusal", "forget-aware",
// "forget-aware-confused:zh". Throws std::invalid_argument otherwise.
SynthBehavior parse_behavior(std::string_view text);

std::string_view refusal_text(LanguageTag lang);

// One generation per QA pair. The confused variants require the target
// language to be present in the dataset (parallel answers are looked up by
// (profile, attribute)). `seed` is accepted for interface uniformity; all
// behaviors are deterministic.
std::vector<GenerationRecord> synthesize_generations(
    const std::vector<QAPair>& pairs, const SynthBehavior& behavior,
    const std::string& model_id, std::uint64_t seed);

}  // namespace uleval
