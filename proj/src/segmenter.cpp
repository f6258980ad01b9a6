#include "unlearn_eval/segmenter.hpp"

#include <stdexcept>

#include "unlearn_eval/lang.hpp"
#include "unlearn_eval/unicode.hpp"

namespace uleval {

namespace {

enum class CharKind { WordLetter, HanThai, Hangul, Digit, Other };

CharKind kind_of(char32_t cp) {
    if (cp >= U'0' && cp <= U'9') return CharKind::Digit;
    auto script = script_of_codepoint(cp);
    if (!script) return CharKind::Other;
    switch (*script) {
        case ScriptClass::Han:
        case ScriptClass::Thai: return CharKind::HanThai;
        case ScriptClass::Hangul: return CharKind::Hangul;
        default: return CharKind::WordLetter;
    }
}

bool is_joiner(char32_t cp) {
    return cp == U'\'' || cp == 0x2019 /* right single quote */ || cp == U'-';
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
    std::vector<char32_t> cps = utf8_decode(text);
    TokenSequence tokens;
    std::size_t i = 0;
    const std::size_t n = cps.size();
    while (i < n) {
        CharKind kind = kind_of(cps[i]);
        if (kind == CharKind::Other) {
            ++i;
            continue;
        }
        if (kind == CharKind::HanThai) {
            std::string one;
            utf8_append(one, cps[i]);
            tokens.push_back({std::move(one), true});
            ++i;
            continue;
        }
        // Word-letter, Hangul and digit runs; apostrophes/hyphens join only
        // when both neighbours continue the same run kind.
        std::string run;
        utf8_append(run, cps[i]);
        std::size_t j = i + 1;
        while (j < n) {
            if (kind_of(cps[j]) == kind) {
                utf8_append(run, cps[j]);
                ++j;
            } else if (kind == CharKind::WordLetter && is_joiner(cps[j]) &&
                       j + 1 < n && kind_of(cps[j + 1]) == kind) {
                utf8_append(run, cps[j]);
                utf8_append(run, cps[j + 1]);
                j += 2;
            } else {
                break;
            }
        }
        tokens.push_back({std::move(run), false});
        i = j;
    }
    return tokens;
}

std::string render(const TokenSequence& tokens, std::size_t begin,
                   std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin && !(tokens[i - 1].concatenated && tokens[i].concatenated))
            out.push_back(' ');
        out += tokens[i].text;
    }
    return out;
}

std::vector<std::string> ngrams(const TokenSequence& tokens, std::size_t n) {
    if (n == 0) throw std::invalid_argument("ngrams: n must be >= 1");
    std::vector<std::string> out;
    if (tokens.empty()) return out;
    if (tokens.size() < n) {
        out.push_back(render(tokens, 0, tokens.size()));
        return out;
    }
    out.reserve(tokens.size() - n + 1);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        out.push_back(render(tokens, i, i + n));
    return out;
}

}  // namespace uleval
