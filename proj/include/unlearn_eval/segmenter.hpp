#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace uleval {

// A single token plus the rule for joining it to its neighbours when a
// fragment is rendered back to text. Han and Thai codepoints concatenate
// (no whitespace in the source script); everything else is space-joined.
struct Token {
    std::string text;
    bool concatenated = false;
};

using TokenSequence = std::vector<Token>;

// Splitting rules:
//   - runs of Latin/Cyrillic/Devanagari letters, with internal apostrophes
//     and hyphens, form one token;
//   - every Han or Thai codepoint is its own (concatenated) token;
//   - Hangul syllable runs split on whitespace;
//   - digit runs form tokens;
//   - punctuation and symbols are dropped.
TokenSequence tokenize(std::string_view text);

// Renders tokens [begin, end) to text: a space is inserted between two
// neighbours unless both are concatenated.
std::string render(const TokenSequence& tokens, std::size_t begin,
                   std::size_t end);

// Overlapping n-token windows rendered to text. A nonempty sequence shorter
// than n yields the whole sequence as a single fragment; an empty sequence
// yields nothing. Throws std::invalid_argument for n = 0.
std::vector<std::string> ngrams(const TokenSequence& tokens, std::size_t n);

}  // namespace uleval
