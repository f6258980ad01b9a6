#!/usr/bin/env python3
"""Embeds repo data files into a generated C++ source fragment.

Usage: embed_data.py OUT name=path [name=path ...]

Each file becomes `inline constexpr std::string_view <name> = R"..."`;
the build wires this up, data/ remains the canonical copy.
"""

import sys

DELIM = "ULEVDATA"


def main():
    out_path = sys.argv[1]
    chunks = ["// Generated by scripts/embed_data.py. Do not edit.\n"]
    for arg in sys.argv[2:]:
        name, _, path = arg.partition("=")
        with open(path, "r", encoding="utf-8") as fh:
            content = fh.read()
        if f'){DELIM}"' in content:
            raise SystemExit(f"{path}: contains the raw-string delimiter")
        chunks.append(
            f'inline constexpr std::string_view {name} = '
            f'R"{DELIM}({content}){DELIM}";\n'
        )
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(chunks))


if __name__ == "__main__":
    main()
