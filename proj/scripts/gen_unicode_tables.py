#!/usr/bin/env python3
"""Regenerates src/generated/unicode_tables.inc from Python's unicodedata.

The C++ normalizer needs three tables: canonical decompositions, canonical
combining classes, and primary composition pairs (composition exclusions are
handled by testing each candidate pair against unicodedata.normalize).  A
simple-lowercase table is emitted alongside for case folding.

Run from the repository root:  python3 scripts/gen_unicode_tables.py
"""

import sys
import unicodedata

OUT_PATH = "src/generated/unicode_tables.inc"
MAX_CP = 0x110000


def canonical_decomposition(cp):
    d = unicodedata.decomposition(chr(cp))
    if not d or d.startswith("<"):
        return None
    parts = [int(h, 16) for h in d.split()]
    if len(parts) > 2:  # canonical decompositions are 1 or 2 codepoints
        raise AssertionError(f"unexpected decomposition length at U+{cp:04X}")
    return parts


def main():
    decomp = {}
    ccc = {}
    lower = {}
    for cp in range(MAX_CP):
        if 0xAC00 <= cp <= 0xD7A3:
            continue  # Hangul syllables decompose algorithmically
        ch = chr(cp)
        parts = canonical_decomposition(cp)
        if parts:
            decomp[cp] = parts
        c = unicodedata.combining(ch)
        if c:
            ccc[cp] = c
        lo = ch.lower()
        if len(lo) == 1 and lo != ch:
            lower[cp] = ord(lo)

    # Primary composites: two-codepoint canonical decompositions whose pair
    # actually recomposes under NFC (this filters the composition exclusions).
    compose = []
    for cp, parts in decomp.items():
        if len(parts) != 2:
            continue
        a, b = parts
        if unicodedata.normalize("NFC", chr(a) + chr(b)) == chr(cp):
            compose.append((a, b, cp))
    compose.sort()

    with open(OUT_PATH, "w", encoding="utf-8") as f:
        w = f.write
        w("// Generated by scripts/gen_unicode_tables.py"
          f" (Unicode {unicodedata.unidata_version}). Do not edit.\n\n")

        w("inline constexpr DecompEntry kDecompTable[] = {\n")
        for cp in sorted(decomp):
            parts = decomp[cp]
            second = parts[1] if len(parts) == 2 else 0
            w(f"    {{0x{cp:X}, 0x{parts[0]:X}, 0x{second:X}}},\n")
        w("};\n\n")

        w("inline constexpr CccEntry kCccTable[] = {\n")
        for cp in sorted(ccc):
            w(f"    {{0x{cp:X}, {ccc[cp]}}},\n")
        w("};\n\n")

        w("inline constexpr ComposeEntry kComposeTable[] = {\n")
        for a, b, cp in compose:
            w(f"    {{0x{a:X}, 0x{b:X}, 0x{cp:X}}},\n")
        w("};\n\n")

        w("inline constexpr CaseEntry kLowerTable[] = {\n")
        for cp in sorted(lower):
            w(f"    {{0x{cp:X}, 0x{lower[cp]:X}}},\n")
        w("};\n")

    print(f"wrote {OUT_PATH}: {len(decomp)} decompositions, "
          f"{len(ccc)} combining classes, {len(compose)} composition pairs, "
          f"{len(lower)} lowercase mappings", file=sys.stderr)


if __name__ == "__main__":
    main()
