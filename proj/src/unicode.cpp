#include "unlearn_eval/unicode.hpp"

#include <algorithm>
#include <cctype>

namespace uleval {

namespace {

struct DecompEntry {
    char32_t cp;
    char32_t first;
    char32_t second;  // 0 for singleton decompositions
};
struct CccEntry {
    char32_t cp;
    std::uint8_t ccc;
};
struct ComposeEntry {
    char32_t first;
    char32_t second;
    char32_t composed;
};
struct CaseEntry {
    char32_t cp;
    char32_t lower;
};

#include "generated/unicode_tables.inc"

// Hangul syllable composition constants (Unicode ch. 3.12).
constexpr char32_t kSBase = 0xAC00, kLBase = 0x1100, kVBase = 0x1161,
                   kTBase = 0x11A7;
constexpr int kLCount = 19, kVCount = 21, kTCount = 28;
constexpr int kNCount = kVCount * kTCount;
constexpr int kSCount = kLCount * kNCount;

const DecompEntry* find_decomp(char32_t cp) {
    auto it = std::lower_bound(
        std::begin(kDecompTable), std::end(kDecompTable), cp,
        [](const DecompEntry& e, char32_t v) { return e.cp < v; });
    if (it != std::end(kDecompTable) && it->cp == cp) return &*it;
    return nullptr;
}

char32_t find_composition(char32_t a, char32_t b) {
    auto it = std::lower_bound(
        std::begin(kComposeTable), std::end(kComposeTable),
        std::pair<char32_t, char32_t>{a, b},
        [](const ComposeEntry& e, const std::pair<char32_t, char32_t>& v) {
            return e.first != v.first ? e.first < v.first : e.second < v.second;
        });
    if (it != std::end(kComposeTable) && it->first == a && it->second == b)
        return it->composed;
    return 0;
}

void decompose_into(char32_t cp, std::vector<char32_t>& out) {
    if (cp >= kSBase && cp < kSBase + kSCount) {
        int index = static_cast<int>(cp - kSBase);
        out.push_back(kLBase + index / kNCount);
        out.push_back(kVBase + (index % kNCount) / kTCount);
        if (index % kTCount != 0) out.push_back(kTBase + index % kTCount);
        return;
    }
    if (const DecompEntry* e = find_decomp(cp)) {
        decompose_into(e->first, out);
        if (e->second) decompose_into(e->second, out);
        return;
    }
    out.push_back(cp);
}

}  // namespace

std::uint8_t combining_class(char32_t cp) {
    auto it = std::lower_bound(
        std::begin(kCccTable), std::end(kCccTable), cp,
        [](const CccEntry& e, char32_t v) { return e.cp < v; });
    if (it != std::end(kCccTable) && it->cp == cp) return it->ccc;
    return 0;
}

char32_t to_lower(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'A' && cp <= U'Z') ? cp + 0x20 : cp;
    }
    auto it = std::lower_bound(
        std::begin(kLowerTable), std::end(kLowerTable), cp,
        [](const CaseEntry& e, char32_t v) { return e.cp < v; });
    if (it != std::end(kLowerTable) && it->cp == cp) return it->lower;
    return cp;
}

std::vector<char32_t> utf8_decode(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char b0 = static_cast<unsigned char>(text[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 >> 5) == 0x6 && i + 1 < text.size()) {
            unsigned char b1 = static_cast<unsigned char>(text[i + 1]);
            if ((b1 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x1F) << 6) | (b1 & 0x3F);
                len = 2;
                if (cp < 0x80) cp = 0xFFFD;  // overlong
            }
        } else if ((b0 >> 4) == 0xE && i + 2 < text.size()) {
            unsigned char b1 = static_cast<unsigned char>(text[i + 1]);
            unsigned char b2 = static_cast<unsigned char>(text[i + 2]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(b1 & 0x3F) << 6) |
                     (b2 & 0x3F);
                len = 3;
                if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
            }
        } else if ((b0 >> 3) == 0x1E && i + 3 < text.size()) {
            unsigned char b1 = static_cast<unsigned char>(text[i + 1]);
            unsigned char b2 = static_cast<unsigned char>(text[i + 2]);
            unsigned char b3 = static_cast<unsigned char>(text[i + 3]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80 &&
                (b3 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x07) << 18) | (char32_t(b1 & 0x3F) << 12) |
                     (char32_t(b2 & 0x3F) << 6) | (b3 & 0x3F);
                len = 4;
                if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
            }
        }
        if (cp == 0xFFFD && len == 1) {
            // skip just the offending byte
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void utf8_append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string utf8_encode(const std::vector<char32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) utf8_append(out, cp);
    return out;
}

std::string nfc(std::string_view text) {
    std::vector<char32_t> decomposed;
    decomposed.reserve(text.size());
    for (char32_t cp : utf8_decode(text)) decompose_into(cp, decomposed);

    // Canonical ordering: stable sort runs of nonzero combining class.
    for (std::size_t i = 1; i < decomposed.size(); ++i) {
        std::uint8_t ccc = combining_class(decomposed[i]);
        if (ccc == 0) continue;
        std::size_t j = i;
        while (j > 0 && combining_class(decomposed[j - 1]) > ccc) {
            std::swap(decomposed[j - 1], decomposed[j]);
            --j;
        }
    }

    // Canonical composition.
    std::vector<char32_t> out;
    out.reserve(decomposed.size());
    std::ptrdiff_t last_starter = -1;
    std::uint8_t last_ccc = 0;
    for (char32_t cp : decomposed) {
        std::uint8_t ccc = combining_class(cp);
        if (last_starter >= 0 && (last_ccc < ccc || last_ccc == 0)) {
            char32_t starter = out[static_cast<std::size_t>(last_starter)];
            char32_t composed = 0;
            // Hangul L+V and LV+T compose algorithmically.
            if (starter >= kLBase && starter < kLBase + kLCount &&
                cp >= kVBase && cp < kVBase + kVCount) {
                composed = kSBase + ((starter - kLBase) * kVCount +
                                     (cp - kVBase)) * kTCount;
            } else if (starter >= kSBase && starter < kSBase + kSCount &&
                       (starter - kSBase) % kTCount == 0 && cp > kTBase &&
                       cp < kTBase + kTCount) {
                composed = starter + (cp - kTBase);
            } else {
                composed = find_composition(starter, cp);
            }
            if (composed) {
                out[static_cast<std::size_t>(last_starter)] = composed;
                continue;
            }
        }
        if (ccc == 0) last_starter = static_cast<std::ptrdiff_t>(out.size());
        last_ccc = ccc;
        out.push_back(cp);
    }
    return utf8_encode(out);
}

std::string fold_case(std::string_view text) {
    std::vector<char32_t> cps = utf8_decode(nfc(text));
    for (char32_t& cp : cps) cp = to_lower(cp);
    return utf8_encode(cps);
}

std::string_view trim_ascii(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
               c == '\v';
    };
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return text.substr(begin, end - begin);
}

}  // namespace uleval
