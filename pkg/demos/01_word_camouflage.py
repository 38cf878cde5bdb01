"""Tour of the three camouflage engines and their building blocks.

Run:  python demos/01_word_camouflage.py
"""

from dataclasses import replace

from wordcamo import (
    SeedPath,
    camouflage_word,
    canonical_spec,
    default_table,
    derive_rng,
    extract_keywords,
    swap_syllables,
    syllabify,
    tokenize,
)
from wordcamo.engines import leet_transform, punct_transform

text = "Offensive language spreads fake news faster than any correction"
print("text:        ", text)

tokens = tokenize(text)
keywords = extract_keywords(text, max_top_n=5)
print("keywords:    ", [tokens[k.token_index].text for k in keywords])
print("syllables:   ", syllabify("Methodology"))
print("swap 2<->3:  ", swap_syllables("Methodology", 2, 3))
print()

# Each complexity level camouflages the same keyword differently.
rng = derive_rng(SeedPath(7, "demo/word"))
for level in (1, 2, 3):
    spec = canonical_spec(level, "v1")
    word_tok = tokens[keywords[0].token_index]
    out, record = camouflage_word(word_tok.text, word_tok, spec, rng)
    print(f"level {level}: {word_tok.text!r} -> {out!r}  (method: {record.method})")
print()

# Forcing every substitution reproduces the classic substitutions.
forced = replace(
    canonical_spec(1, "v1"),
    leet_change_prb=1.0, leet_change_frq=1.0, leet_uniform_change=1.0,
)
basic = default_table("basic")
for seed in range(64):
    out = leet_transform("Offensive", basic, forced, derive_rng(SeedPath(seed, "demo/leet")))
    if out == "0ff3ns1v3":
        print(f"seed {seed}: Offensive -> {out}")
        break

dash_only = replace(
    canonical_spec(2, "v1"),
    punt_hyphenate_prb=0.0, punt_uniform_change_prb=1.0,
    punt_word_splitting_prb=0.0, symbols=("-",),
)
rng = derive_rng(SeedPath(0, "demo/punct"))
print("punctuation:", punct_transform("fake", dash_only, rng),
      punct_transform("news", dash_only, rng))
