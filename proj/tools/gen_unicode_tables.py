#!/usr/bin/env python3
"""Regenerates src/unicode_tables.cpp and tests/data/unicode_norm_fixture.tsv
from the Python unicodedata module.

Usage: python3 tools/gen_unicode_tables.py <repo_root>

The generated tables cover the full code space: canonical decompositions,
canonical combining classes, recomposition pairs, general-category ranges,
and simple 1:1 lowercase mappings. Hangul syllables are handled
algorithmically in code and excluded here.
"""

import random
import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE, HANGUL_S_COUNT = 0xAC00, 11172


def canonical_decomposition(cp):
    d = unicodedata.decomposition(chr(cp))
    if not d or d.startswith("<"):
        return None
    parts = [int(x, 16) for x in d.split()]
    if len(parts) == 1:
        return (parts[0], 0)
    assert len(parts) == 2, hex(cp)
    return (parts[0], parts[1])


def gather():
    decomp = []
    compose = []
    ccc = []
    lower = []
    cats = {"L": [], "Lu": [], "M": [], "N": [], "P": [], "S": [], "Z": []}

    for cp in range(MAX_CP):
        if HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT:
            continue
        ch = chr(cp)
        cat = unicodedata.category(ch)
        if cat == "Cn":
            continue

        d = canonical_decomposition(cp)
        if d is not None:
            decomp.append((cp, d[0], d[1]))
            if d[1] != 0:
                # A pair recomposes under NFC iff round-tripping through NFD
                # restores the precomposed character (excluded composites and
                # non-starter decompositions do not).
                if unicodedata.normalize("NFC", unicodedata.normalize("NFD", ch)) == ch:
                    compose.append((d[0], d[1], cp))

        c = unicodedata.combining(ch)
        if c != 0:
            ccc.append((cp, c))

        lo = ch.lower()
        if len(lo) == 1 and lo != ch:
            lower.append((cp, ord(lo)))

        first = cat[0]
        if first in cats:
            cats[first].append(cp)
        if cat == "Lu":
            cats["Lu"].append(cp)

    ranges = {}
    for name, cps in cats.items():
        rs = []
        for cp in cps:
            if rs and rs[-1][1] + 1 == cp:
                rs[-1][1] = cp
            else:
                rs.append([cp, cp])
        ranges[name] = rs
    return decomp, sorted(compose), ccc, lower, ranges


def emit_cpp(path, decomp, compose, ccc, lower, ranges):
    out = []
    out.append("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n"
               % unicodedata.unidata_version)
    out.append('#include "agmg/unicode_tables.hpp"\n')
    out.append("namespace agmg::uni::tables {\n")

    out.append("const DecompEntry kDecomp[] = {")
    out.append(",".join("{0x%X,0x%X,0x%X}" % e for e in decomp))
    out.append("};\n")
    out.append("const std::size_t kDecompCount = %d;\n" % len(decomp))

    out.append("const ComposeEntry kCompose[] = {")
    out.append(",".join("{0x%X,0x%X,0x%X}" % e for e in compose))
    out.append("};\n")
    out.append("const std::size_t kComposeCount = %d;\n" % len(compose))

    out.append("const CccEntry kCcc[] = {")
    out.append(",".join("{0x%X,%d}" % e for e in ccc))
    out.append("};\n")
    out.append("const std::size_t kCccCount = %d;\n" % len(ccc))

    out.append("const LowerEntry kLower[] = {")
    out.append(",".join("{0x%X,0x%X}" % e for e in lower))
    out.append("};\n")
    out.append("const std::size_t kLowerCount = %d;\n" % len(lower))

    for name in ("L", "Lu", "M", "N", "P", "S", "Z"):
        rs = ranges[name]
        out.append("const Range kCat%s[] = {" % name)
        out.append(",".join("{0x%X,0x%X}" % (a, b) for a, b in rs))
        out.append("};\n")
        out.append("const std::size_t kCat%sCount = %d;\n" % (name, len(rs)))

    out.append("}  // namespace agmg::uni::tables\n")
    with open(path, "w", encoding="utf-8") as f:
        f.write("".join(out))


def esc(s):
    return "".join("\\u%08X" % ord(c) for c in s)


def emit_fixture(path):
    cases = []

    def add(s):
        cases.append((s, unicodedata.normalize("NFC", s),
                      unicodedata.normalize("NFD", s)))

    for cp in list(range(0x0370, 0x0400)) + list(range(0x1F00, 0x2000)):
        if unicodedata.category(chr(cp)) != "Cn":
            add(chr(cp))

    marks = [0x0300, 0x0301, 0x0304, 0x0306, 0x0308, 0x0313, 0x0314, 0x0342, 0x0345]
    bases = [ord(c) for c in "αεηιουωρΑΕΗΙΟΥΩΡ"]
    for b in bases:
        for m in marks:
            add(chr(b) + chr(m))
        for m1 in (0x0313, 0x0314):
            for m2 in (0x0300, 0x0301, 0x0342):
                add(chr(b) + chr(m1) + chr(m2))
                add(chr(b) + chr(m1) + chr(m2) + chr(0x0345))
        add(chr(b) + chr(0x0301) + chr(0x0345))
        add(chr(b) + chr(0x0342) + chr(0x0345))
        # marks out of canonical order
        add(chr(b) + chr(0x0345) + chr(0x0301))

    add("é")
    add("ñ")
    add("ḍ̇")
    add("Å")
    add("가")           # Hangul L+V
    add("각")     # Hangul L+V+T
    add("豈")                 # CJK compat singleton
    add("Å")                 # Angstrom sign singleton
    add("ά")                 # oxia singleton -> tonos
    add("ᾷ")

    rng = random.Random(20240811)
    pool = ([chr(c) for c in range(0x03B1, 0x03CA)] +
            [chr(c) for c in bases] + [chr(m) for m in marks] +
            list("abc .,;") + ["ᾷ", "ἄ", "ῆ"])
    for _ in range(400):
        s = "".join(rng.choice(pool) for _ in range(rng.randint(1, 12)))
        add(s)

    with open(path, "w", encoding="utf-8") as f:
        f.write("# input\tnfc\tnfd (all \\uXXXXXXXX escaped)\n")
        for s, c, d in cases:
            f.write("%s\t%s\t%s\n" % (esc(s), esc(c), esc(d)))
    return len(cases)


def main():
    root = sys.argv[1] if len(sys.argv) > 1 else "."
    decomp, compose, ccc, lower, ranges = gather()
    emit_cpp(root + "/src/unicode_tables.cpp", decomp, compose, ccc, lower, ranges)
    n = emit_fixture(root + "/tests/data/unicode_norm_fixture.tsv")
    print("decomp=%d compose=%d ccc=%d lower=%d fixture_cases=%d" %
          (len(decomp), len(compose), len(ccc), len(lower), n))
    for name, rs in ranges.items():
        print("cat%s ranges=%d" % (name, len(rs)))


if __name__ == "__main__":
    main()
