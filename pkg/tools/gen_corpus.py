#!/usr/bin/env python
"""Generate the bundled demo corpus under data/.

Three pseudo-historical documents of token/tag lines, produced by a
seeded template grammar with tag-typical word endings, ambiguous
function words, spelling variants, and rare one-off forms. Output is
deterministic for a fixed seed.
"""

import random
from pathlib import Path

TEMPLATES = [
    (["DDS", "NA", "VAFIN", "ADJA"], 10),
    (["DDS", "NA", "VVFIN", "APPR", "DDS", "NA"], 10),
    (["PPER", "VAFIN", "AVD", "ADJA"], 8),
    (["NE", "VVFIN", "DDS", "NA"], 8),
    (["DDS", "ADJA", "NA", "VAFIN", "NA"], 6),
    (["PPER", "VMFIN", "PTKNEG", "VVFIN"], 5),
    (["APPR", "DDS", "NA", "VVFIN", "PPER"], 6),
    (["NA", "KON", "NA", "VAFIN", "ADJA"], 5),
    (["DDS", "VKFIN", "NA"], 5),
    (["AVD", "VAFIN", "PPER", "DDS", "NA"], 4),
    (["NE", "KON", "NE", "VVFIN", "APPR", "NA"], 3),
    (["PPER", "VVFIN", "DDS", "NA", "AVD"], 4),
]

WORDS = {
    "DDS": ["de", "dat", "desse", "dit", "den", "der", "dem", "düsse"],
    "NA": [
        "recht", "stad", "man", "gud", "borch", "water", "lant", "hus",
        "vrede", "bode", "gelt", "herte", "kerke", "rad", "schip", "volk",
        "word", "dach", "jar", "vredebrake", "richter", "koning",
    ],
    "NE": ["Bremen", "Hinrik", "Kolberg", "Johan", "Lubeke", "Gherd", "Wismar"],
    "VAFIN": ["is", "was", "sint", "weren", "hebben", "hadde", "wert"],
    "VKFIN": ["is", "was", "blift", "heet", "dunket"],
    "VVFIN": [
        "secht", "sprikt", "gift", "nimmt", "kumpt", "deit", "steit",
        "vindet", "bringet", "holdet", "schrivet", "richtet",
    ],
    "VMFIN": ["schal", "mach", "wil", "moste", "kan"],
    "ADJA": ["grot", "old", "gude", "junk", "recht", "vri", "klene", "wis", "gud", "vrede"],
    "APPR": ["in", "to", "van", "mit", "up", "bi", "vor", "na"],
    "AVD": ["ok", "noch", "wol", "dar", "hir", "do", "alse", "denne"],
    "KON": ["unde", "edder", "men", "dat", "do", "alse"],
    "PPER": ["he", "se", "wi", "ik", "gi", "em", "one"],
    "PTKNEG": ["nicht", "nen"],
}

# spelling variants injected with small probability, clusterable by
# Levenshtein distance <= 2 back onto their base forms
VARIANTS = {
    "denne": ["denet", "dhenet"],
    "recht": ["reht", "recht"],
    "unde": ["vnde", "und"],
    "water": ["watere"],
    "secht": ["segt"],
    "borch": ["borgh"],
}

ENDINGS = {
    "NA": ["e", "en", "inge", "heit"],
    "VVFIN": ["et", "t"],
    "ADJA": ["e", "en"],
    "NE": ["us", "hard", "mar"],
}

STEMS = ["klo", "ber", "swar", "ding", "vel", "hor", "mak", "sten", "wed", "gra"]


def rare_word(rng, tag):
    stem = rng.choice(STEMS) + rng.choice("aeiou") + rng.choice("bdgklmnrst")
    word = stem + rng.choice(ENDINGS.get(tag, [""]))
    if tag == "NE":
        word = word.capitalize()
    return word


def zipf_choice(rng, items, skew):
    # document-specific rotation gives each document its own head words
    n = len(items)
    weights = [1.0 / (1 + ((i + skew) % n)) for i in range(n)]
    return rng.choices(items, weights=weights)[0]


def gen_document(name, n_tokens, seed, skew, rare_rate):
    rng = random.Random(seed)
    lines = []
    templates, weights = zip(*TEMPLATES)
    while len(lines) < n_tokens:
        template = rng.choices(templates, weights=weights)[0]
        for tag in template:
            if tag in ENDINGS and rng.random() < rare_rate:
                word = rare_word(rng, tag)
            else:
                word = zipf_choice(rng, WORDS[tag], skew)
                if word in VARIANTS and rng.random() < 0.25:
                    word = rng.choice(VARIANTS[word])
            lines.append(f"{word}\t{tag}")
    return lines[:n_tokens]


def main():
    out_dir = Path(__file__).resolve().parent.parent / "data"
    out_dir.mkdir(exist_ok=True)
    docs = [
        ("bremen.tsv", 2400, 101, 0, 0.08),
        ("kolberg.tsv", 2700, 202, 3, 0.10),
        ("wismar.tsv", 2500, 303, 6, 0.09),
    ]
    for name, n, seed, skew, rare in docs:
        lines = gen_document(name, n, seed, skew, rare)
        (out_dir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {name}: {n} tokens")


if __name__ == "__main__":
    main()
