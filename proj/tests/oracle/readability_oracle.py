#!/usr/bin/env python3
"""Independent oracle for the readability metrics.

Implements the documented text rules (word rule, sentence rule, syllable
heuristic, familiar-word normalization, and the three grade formulas) in
plain Python, separately from the C++ library, and freezes expected values
for a fixed set of snippets into tests/data/metrics_oracle.json.

Run from the repository root:  python3 tests/oracle/readability_oracle.py
"""

import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(os.path.dirname(HERE))
LEXICON_PATH = os.path.join(ROOT, "data", "dale_chall_familiar_words.txt")
OUT_PATH = os.path.join(ROOT, "tests", "data", "metrics_oracle.json")

# ---------------------------------------------------------------- characters

APOSTROPHES = {"'", "’"}
HYPHENS = {"-", "‐", "‑"}
EXTRA_WHITESPACE = (
    {" ", " ", " ", " ", " ", "　"}
    | {chr(c) for c in range(0x2000, 0x200B)}
)
NON_LETTER_PUNCT = (
    {chr(c) for c in range(0x2012, 0x2016)}
    | {"‘", "‚", "‛", "“", "”", "„", "‟"}
    | {"…", "«", "»", "·", "•"}
)


def is_space(ch):
    return ch in " \t\n\v\f\r" or ch in EXTRA_WHITESPACE


def is_digit(ch):
    return "0" <= ch <= "9"


def is_letter(ch):
    if ch.isascii():
        return ch.isalpha()
    if ch in APOSTROPHES or ch in HYPHENS or ch in EXTRA_WHITESPACE:
        return False
    return ch not in NON_LETTER_PUNCT


def is_alnum(ch):
    return is_letter(ch) or is_digit(ch)


# ------------------------------------------------------------------ tokenize

def tokenize(text):
    tokens = []
    run = []
    for ch in text + " ":
        if is_alnum(ch) or ch in APOSTROPHES or ch in HYPHENS:
            run.append(ch)
        elif run:
            i, j = 0, len(run)
            while i < j and not is_alnum(run[i]):
                i += 1
            while j > i and not is_alnum(run[j - 1]):
                j -= 1
            if i < j:
                tokens.append("".join(run[i:j]))
            run = []
    if not tokens:
        raise ValueError("EmptyText")
    return tokens


# ----------------------------------------------------------------- sentences

ABBREVIATIONS = ["dr", "mr", "mrs", "ms", "prof", "fig", "eq", "e.g", "i.e", "et al", "vs"]
CLOSERS = {'"', "'", ")", "]", "’", "”"}
OPENERS = {'"', "'", "(", "[", "‘", "“"}


def _ends_with_abbreviation(prefix):
    low = prefix.lower()
    for abbr in ABBREVIATIONS:
        if low.endswith(abbr):
            before = len(low) - len(abbr) - 1
            if before < 0 or not is_alnum(low[before]):
                return True
    return False


def segment_sentences(text):
    if not any(is_alnum(ch) for ch in text):
        raise ValueError("EmptyText")
    sentences = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        ch = text[i]
        if ch in ".!?":
            j = i
            terminators = 0
            while j < n and (text[j] in ".!?" or text[j] in CLOSERS):
                if text[j] in ".!?":
                    terminators += 1
                j += 1
            abbreviated = (
                ch == "." and terminators == 1 and _ends_with_abbreviation(text[:i])
            )
            if not abbreviated:
                k = j
                while k < n and is_space(text[k]):
                    k += 1
                m = k
                while m < n and text[m] in OPENERS:
                    m += 1
                if k > j and m < n and (("A" <= text[m] <= "Z") or is_digit(text[m])):
                    sentences.append(text[start:j].strip())
                    start = k
                    i = k
                    continue
            i = j
        else:
            i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return [s for s in sentences if s]


# ----------------------------------------------------------------- syllables

VOWELS = set("aeiouy")


def _part_syllables(part):
    letters = [c.lower() for c in part if c.isascii() and c.isalpha()]
    if not letters:
        return 0
    groups = 0
    prev_vowel = False
    for c in letters:
        v = c in VOWELS
        if v and not prev_vowel:
            groups += 1
        prev_vowel = v
    if len(letters) >= 2 and letters[-1] == "e":
        ends_le_after_consonant = (
            len(letters) >= 3 and letters[-2] == "l" and letters[-3] not in VOWELS
        )
        if not ends_le_after_consonant:
            groups -= 1
    return max(groups, 1)


def count_syllables(token):
    total = 0
    for part in _split_hyphens(token):
        total += _part_syllables(part)
    return max(total, 1)


def _split_hyphens(token):
    parts = []
    cur = []
    for ch in token:
        if ch in HYPHENS:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p]


# ------------------------------------------------------------------- lexicon

def load_lexicon(path):
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.add(line.lower().rstrip("."))
    if not words:
        raise ValueError("EmptyLexicon")
    return words


def _normalize(token):
    t = "".join("'" if c in APOSTROPHES else c for c in token).lower()
    if t.endswith("'s"):
        t = t[:-2]
    elif t.endswith("'"):
        t = t[:-1]
    return t


def _candidates(w):
    cands = [w]
    n = len(w)
    if w.endswith("ies") and n >= 5:
        cands.append(w[:-3] + "y")
    if w.endswith("es") and n > 3:
        cands.append(w[:-2])
    if w.endswith("s") and not w.endswith("ss") and n > 2:
        cands.append(w[:-1])
    if w.endswith("ied") and n >= 5:
        cands.append(w[:-3] + "y")
    if w.endswith("ed") and n > 3:
        cands.append(w[:-2])
        cands.append(w[:-1])
        if n > 4 and w[-3] == w[-4]:
            cands.append(w[:-3])
    if w.endswith("ing") and n > 4:
        cands.append(w[:-3])
        cands.append(w[:-3] + "e")
        if n > 5 and w[-4] == w[-5]:
            cands.append(w[:-4])
        if w.endswith("ying") and n >= 5:
            cands.append(w[:-4] + "ie")
    return cands


def is_familiar(token, lexicon):
    if not any(is_letter(c) for c in token):
        return True
    parts = _split_hyphens(token)
    if len(parts) > 1:
        return all(is_familiar(p, lexicon) for p in parts)
    w = _normalize(token)
    return any(c in lexicon for c in _candidates(w))


# ------------------------------------------------------------------ formulas

def compute_stats(text, lexicon):
    sentences = segment_sentences(text)
    words = tokenize(text)
    letters = sum(1 for w in words for c in w if is_letter(c))
    syllables = sum(count_syllables(w) for w in words)
    difficult = sum(1 for w in words if not is_familiar(w, lexicon))
    return {
        "sentence_count": len(sentences),
        "word_count": len(words),
        "letter_count": letters,
        "syllable_count": syllables,
        "difficult_word_count": difficult,
    }


def scores_from_stats(s):
    words = s["word_count"]
    cli = 0.0588 * (100.0 * s["letter_count"] / words) \
        - 0.296 * (100.0 * s["sentence_count"] / words) - 15.8
    fkgl = 0.39 * (words / s["sentence_count"]) \
        + 11.8 * (s["syllable_count"] / words) - 15.59
    pct_difficult = 100.0 * s["difficult_word_count"] / words
    dcrs = 0.1579 * pct_difficult + 0.0496 * (words / s["sentence_count"])
    if pct_difficult > 5.0:
        dcrs += 3.6365
    return cli, fkgl, dcrs


# ------------------------------------------------------------------ fixtures

SNIPPETS = [
    "The quick brown fox jumps over the lazy dog.",
    "Hi.",
    "Microfluidic diagnostics everywhere.",
    "Dr. Smith arrived. He left.",
    "state-of-the-art model",
    "It's 98% done",
    "The dog ran. The cat sat. The bird flew away over the green field.",
    "She asked a question. Did he answer? Yes! He said it was fine.",
    "Mr. Brown met Mrs. White and Prof. Green, e.g. at the old station near the river.",
    "The study used 1,431 samples for training and 1,000 for testing.",
    "A little table stood by the door. A purple candle burned on it all night.",
    "Making cakes requires flour, butter, eggs, and a working oven.",
    "The dog's bone was buried under the dogs' favorite tree.",
    "Babies cried while the carriage rolled through the crowded market square.",
    "Researchers validated the multiplexed genomic assay in rural communities.",
    "We tried running, stopping, and jumping before dying batteries ended the test.",
    "Results were reported et al. in an appendix, i.e. the long tables at the end.",
    "\"Stop now.\" He turned around. \"Why?\" She smiled and walked home.\n\nNobody followed them.",
    "Blockchain technology stores diagnostic records securely across many computers.",
    "The vaccine reached 98 villages. About 3.76 million doses arrived by boat.",
    "Photosynthesis converts sunlight into chemical energy inside every green leaf.",
    "He says it costs five dollars, which seems fair for a haircut these days.",
    "A café opened nearby. The naïve owner sold coffee, tea, and warm bread.",
    "Simple words help readers. Plain short lines carry the story farther than jargon ever could.",
]


def main():
    lexicon = load_lexicon(LEXICON_PATH)
    fixtures = []
    for text in SNIPPETS:
        stats = compute_stats(text, lexicon)
        cli, fkgl, dcrs = scores_from_stats(stats)
        fixtures.append({
            "text": text,
            "stats": stats,
            "cli": round(cli, 6),
            "fkgl": round(fkgl, 6),
            "dcrs": round(dcrs, 6),
        })
    payload = {
        "lexicon": os.path.relpath(LEXICON_PATH, ROOT),
        "fixtures": fixtures,
    }
    with open(OUT_PATH, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, ensure_ascii=False)
        fh.write("\n")
    print(f"wrote {len(fixtures)} fixtures to {OUT_PATH}")
    for f in fixtures[:6]:
        print(f"  {f['cli']:8.4f} {f['fkgl']:8.4f} {f['dcrs']:8.4f}  {f['text'][:48]!r}")


if __name__ == "__main__":
    sys.exit(main())
