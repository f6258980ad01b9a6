#include <doctest.h>

#include "unlearn_eval/unicode.hpp"

using namespace uleval;

// Expected strings were produced with an independent normalizer
// (python3 unicodedata, UCD 13) and frozen here.
TEST_CASE("nfc composes combining sequences") {
    CHECK(nfc("a\xcc\x88") == "\xc3\xa4");                    // a + umlaut
    CHECK(nfc("A\xcc\x8a") == "\xc3\x85");                    // A + ring
    CHECK(nfc("n\xcc\x83o") == "\xc3\xb1o");                  // n + tilde
    CHECK(nfc("\xd0\x98\xcc\x86") == "\xd0\x99");             // Cyrillic Й
    CHECK(nfc("\xe3\x82\xab\xe3\x82\x99") == "\xe3\x82\xac"); // katakana ガ
}

TEST_CASE("nfc reorders marks canonically before composing") {
    // e + acute + cedilla and e + cedilla + acute agree after normalization.
    std::string a = nfc("e\xcc\x81\xcc\xa7");
    std::string b = nfc("e\xcc\xa7\xcc\x81");
    CHECK(a == b);
    CHECK(a == "\xc8\xa9\xcc\x81");
    // dot-below (ccc 220) sorts before dot-above (ccc 230)
    CHECK(nfc("q\xcc\x87\xcc\xa3") == "q\xcc\xa3\xcc\x87");
}

TEST_CASE("nfc composes hangul jamo algorithmically") {
    CHECK(nfc("\xe1\x84\x80\xe1\x85\xa1") == "\xea\xb0\x80");             // 가
    CHECK(nfc("\xe1\x84\x80\xe1\x85\xa1\xe1\x86\xa8") == "\xea\xb0\x81"); // 각
    CHECK(nfc("\xea\xb0\x80\xe1\x86\xa8") == "\xea\xb0\x81");             // LV+T
}

TEST_CASE("nfc handles singleton decompositions") {
    CHECK(nfc("\xe2\x84\xab") == "\xc3\x85");  // Angstrom sign
    CHECK(nfc("\xe2\x84\xa6") == "\xce\xa9");  // Ohm sign
}

TEST_CASE("nfc leaves already-normalized text alone") {
    const char* samples[] = {
        "Stra\xc3\x9f""e",
        "\xe0\xa4\xa8\xe0\xa4\xae\xe0\xa4\xb8\xe0\xa5\x8d\xe0\xa4\xa4\xe0\xa5\x87",
        "\xe3\x82\xac",
        "hello world 123",
        "",
    };
    for (const char* s : samples) CHECK(nfc(s) == s);
}

TEST_CASE("nfc is idempotent") {
    const char* samples[] = {"a\xcc\x88 q\xcc\x87\xcc\xa3",
                             "\xe1\x84\x80\xe1\x85\xa1\xe1\x86\xa8 x",
                             "Stra\xc3\x9f""e \xd0\x98\xcc\x86"};
    for (const char* s : samples) CHECK(nfc(nfc(s)) == nfc(s));
}

TEST_CASE("fold_case lowercases across scripts") {
    CHECK(fold_case("Hello World") == "hello world");
    CHECK(fold_case("\xc3\x84PFEL") == "\xc3\xa4pfel");  // ÄPFEL
    CHECK(fold_case("\xd0\x9f\xd0\x9e\xd0\x9b") ==
          "\xd0\xbf\xd0\xbe\xd0\xbb");  // ПОЛ
    CHECK(fold_case("\xe4\xb8\xad\xe6\x96\x87") == "\xe4\xb8\xad\xe6\x96\x87");
    // decomposed input folds to the same bytes as composed input
    CHECK(fold_case("A\xcc\x88") == fold_case("\xc3\x84"));
}

TEST_CASE("utf8 decode round-trips and replaces ill-formed bytes") {
    std::string text = "a\xc3\xa4\xe4\xb8\xad\xf0\x9f\x98\x80";
    CHECK(utf8_encode(utf8_decode(text)) == text);

    auto bad = utf8_decode("a\xc0\x80"
                           "b");  // overlong encoding
    bool has_replacement = false;
    for (char32_t cp : bad) has_replacement |= cp == 0xFFFD;
    CHECK(has_replacement);

    auto truncated = utf8_decode("\xe4\xb8");  // dangling lead byte
    CHECK(!truncated.empty());
}

TEST_CASE("trim_ascii strips only edges") {
    CHECK(trim_ascii("  X ") == "X");
    CHECK(trim_ascii("\t a b \r\n") == "a b");
    CHECK(trim_ascii("") == "");
    CHECK(trim_ascii("   ") == "");
}
