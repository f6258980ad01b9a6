#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uleval {

// Writing system of a supported language. Latin is shared by en/de/es; every
// other script identifies exactly one language in the supported set.
enum class ScriptClass { Latin, Han, Hangul, Cyrillic, Devanagari, Thai };

enum class LanguageTag { en, de, es, zh, ru, ko, hi, th };

inline constexpr std::array<LanguageTag, 8> kAllLanguages = {
    LanguageTag::en, LanguageTag::de, LanguageTag::es, LanguageTag::zh,
    LanguageTag::ru, LanguageTag::ko, LanguageTag::hi, LanguageTag::th};

constexpr std::string_view to_string(LanguageTag lang) {
    switch (lang) {
        case LanguageTag::en: return "en";
        case LanguageTag::de: return "de";
        case LanguageTag::es: return "es";
        case LanguageTag::zh: return "zh";
        case LanguageTag::ru: return "ru";
        case LanguageTag::ko: return "ko";
        case LanguageTag::hi: return "hi";
        case LanguageTag::th: return "th";
    }
    return "??";
}

constexpr std::string_view to_string(ScriptClass script) {
    switch (script) {
        case ScriptClass::Latin: return "Latin";
        case ScriptClass::Han: return "Han";
        case ScriptClass::Hangul: return "Hangul";
        case ScriptClass::Cyrillic: return "Cyrillic";
        case ScriptClass::Devanagari: return "Devanagari";
        case ScriptClass::Thai: return "Thai";
    }
    return "??";
}

constexpr ScriptClass script_of(LanguageTag lang) {
    switch (lang) {
        case LanguageTag::en:
        case LanguageTag::de:
        case LanguageTag::es: return ScriptClass::Latin;
        case LanguageTag::zh: return ScriptClass::Han;
        case LanguageTag::ru: return ScriptClass::Cyrillic;
        case LanguageTag::ko: return ScriptClass::Hangul;
        case LanguageTag::hi: return ScriptClass::Devanagari;
        case LanguageTag::th: return ScriptClass::Thai;
    }
    return ScriptClass::Latin;
}

std::optional<LanguageTag> parse_language(std::string_view code);

// Throwing variant for inputs that are supposed to be valid already.
LanguageTag language_from_code(std::string_view code);

// Script of a single codepoint, or nullopt for digits, punctuation,
// whitespace and every block outside the six supported scripts.
std::optional<ScriptClass> script_of_codepoint(char32_t cp);

// Parses a comma-separated tag list such as "en,de,zh,ru,ko".
// Throws std::invalid_argument on unknown tags or an empty list.
std::vector<LanguageTag> parse_language_list(std::string_view csv);

}  // namespace uleval
