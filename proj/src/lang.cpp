#include "unlearn_eval/lang.hpp"

#include <stdexcept>

namespace uleval {

std::optional<LanguageTag> parse_language(std::string_view code) {
    for (LanguageTag lang : kAllLanguages) {
        if (to_string(lang) == code) return lang;
    }
    return std::nullopt;
}

LanguageTag language_from_code(std::string_view code) {
    if (auto lang = parse_language(code)) return *lang;
    throw std::invalid_argument("unsupported language tag: " +
                                std::string(code));
}

std::optional<ScriptClass> script_of_codepoint(char32_t cp) {
    // ASCII fast path: letters only, digits and punctuation are neutral.
    if (cp < 0x80) {
        if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z'))
            return ScriptClass::Latin;
        return std::nullopt;
    }
    // Latin-1 letters and the Latin Extended blocks.
    if ((cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) ||
        (cp >= 0x100 && cp <= 0x24F) || (cp >= 0x1E00 && cp <= 0x1EFF))
        return ScriptClass::Latin;
    // Cyrillic + Supplement + Extended-A/B/C.
    if ((cp >= 0x400 && cp <= 0x52F) || (cp >= 0x1C80 && cp <= 0x1C8F) ||
        (cp >= 0x2DE0 && cp <= 0x2DFF) || (cp >= 0xA640 && cp <= 0xA69F))
        return ScriptClass::Cyrillic;
    // Devanagari letters and signs; U+0964..0965 are punctuation (danda),
    // U+0966..096F are digits.
    if ((cp >= 0x900 && cp <= 0x963) || (cp >= 0x970 && cp <= 0x97F) ||
        (cp >= 0xA8E0 && cp <= 0xA8FF))
        return ScriptClass::Devanagari;
    // Thai letters, vowels and tone marks; digits U+0E50..0E59 and the
    // symbols U+0E3F (baht), U+0E4F, U+0E5A, U+0E5B are neutral.
    if ((cp >= 0xE01 && cp <= 0xE3A) || (cp >= 0xE40 && cp <= 0xE4E))
        return ScriptClass::Thai;
    // Hangul: Jamo, Compatibility Jamo, Syllables, Jamo Extended-A/B.
    if ((cp >= 0x1100 && cp <= 0x11FF) || (cp >= 0x3130 && cp <= 0x318F) ||
        (cp >= 0xA960 && cp <= 0xA97F) || (cp >= 0xAC00 && cp <= 0xD7FF))
        return ScriptClass::Hangul;
    // Han: URO + Extension A, Compatibility Ideographs, Supplementary
    // Ideographic Plane extensions.
    if ((cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
        (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2EBEF) ||
        (cp >= 0x2F800 && cp <= 0x2FA1F))
        return ScriptClass::Han;
    return std::nullopt;
}

std::vector<LanguageTag> parse_language_list(std::string_view csv) {
    std::vector<LanguageTag> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::string_view item = csv.substr(
            pos, comma == std::string_view::npos ? csv.size() - pos
                                                 : comma - pos);
        if (!item.empty()) out.push_back(language_from_code(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (out.empty())
        throw std::invalid_argument("empty language list: '" +
                                    std::string(csv) + "'");
    return out;
}

}  // namespace uleval
