#!/usr/bin/env python3
"""Generate the bundled directional fixture.

Each document has 16 ten-word sentences (four per quartile) built from
one-syllable nonce words that are unique to the document. The spotlight
copies two sentences of one quartile and adds a three-word sentence reusing
words from a third sentence of that quartile. The summary has one long
sentence per quartile made of rare polysyllabic words, each carrying that
quartile's key-fact phrase verbatim.

Usage: gen_fixture.py OUT_DIR [--records 20] [--seed 7]
"""

import argparse
import json
import random
from pathlib import Path

ONSETS = "b d f g h j k l m n p r s t v w z".split() + ["bl", "br", "dr", "fl", "gr", "pl", "pr", "sk", "sl", "sp", "st", "tr"]
VOWELS = ["a", "e", "i", "o", "u"]
CODAS = "b d g k m n p t x".split() + ["ft", "lk", "mp", "nd", "nk", "sk", "st"]

FUNCTION = ["the", "and", "of", "to", "in", "on", "at", "for", "with", "by", "from", "near", "as", "but", "or"]

RARE = [
    "ineluctable", "perspicacious", "obfuscation", "incontrovertible", "antediluvian",
    "sesquipedalian", "magnanimous", "recalcitrant", "pusillanimous", "circumlocution",
    "idiosyncratic", "quintessential", "indefatigable", "surreptitious", "unprecedented",
    "extraordinarily", "consequentially", "multifarious", "heterogeneous", "interdisciplinary",
    "phenomenological", "epistemological", "characteristically", "administratively",
    "disproportionately", "infrastructural", "reconceptualization", "indistinguishable",
    "overcapitalization", "institutionalization", "paradigmatically", "counterintuitively",
    "authoritatively", "irreconcilable", "unquestionably", "hypothetically",
]


def nonce_words(rng, used, count):
    out = []
    while len(out) < count:
        w = rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS)
        if w in used or w in FUNCTION or w == "was":
            continue
        used.add(w)
        out.append(w)
    return out


def make_sentence(rng, content):
    """Ten tokens: six content words and four function words, the first three
    words always content."""
    words = list(content)
    for _ in range(4):
        words.insert(rng.randrange(3, len(words) + 1), rng.choice(FUNCTION))
    return words


def render(words):
    return " ".join([words[0].capitalize()] + words[1:]) + "."


def build(records, seed):
    rng = random.Random(seed)
    used = set()
    corpus, facts = [], []
    for r in range(records):
        rid = f"syn-{r:03d}"
        sentences = [make_sentence(rng, nonce_words(rng, used, 6)) for _ in range(16)]
        quartiles = [sentences[4 * q:4 * q + 4] for q in range(4)]
        # key fact of each quartile: the first three words of its first sentence
        key_phrases = [quartiles[q][0][0:3] for q in range(4)]

        focus = rng.randrange(4)
        q = quartiles[focus]
        content_third = [w for w in q[2] if w not in FUNCTION]
        spotlight = " ".join([render(q[0]), render(q[1]),
                              render([content_third[0], "was", content_third[1]])])

        summary_sentences = []
        for k in range(4):
            rare = rng.sample(RARE, 12)
            words = rare[:4] + ["the"] + key_phrases[k] + ["and"] + rare[4:]
            summary_sentences.append(render(words))
        summary = " ".join(summary_sentences)

        corpus.append({
            "id": rid,
            "title": f"Synthetic document {r}",
            "document": " ".join(render(s) for s in sentences),
            "spotlight": spotlight,
            "summary": summary,
            "domain_tag": "synthetic",
        })
        for phrase in key_phrases:
            facts.append({"record_id": rid, "text": " ".join(phrase), "source": "document"})
    return corpus, facts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir")
    ap.add_argument("--records", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    corpus, facts = build(args.records, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"directional_{args.records}"
    with open(out / f"{stem}.jsonl", "w", encoding="utf-8") as f:
        for rec in corpus:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    with open(out / f"{stem}.facts.jsonl", "w", encoding="utf-8") as f:
        for fact in facts:
            f.write(json.dumps(fact, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
