#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Clipped unigram precision and multi-reference ROUGE-1 recall on terms."""
import json
from collections import Counter
from fractions import Fraction

FIXTURES = [
    ([["a", "b"]], [[["a", "c"]]]),
    ([["dog_NOUN", "Self_motion_FRAME", "grass_NOUN"]], [[["dog_NOUN", "Self_motion_FRAME", "grass_NOUN"]]]),
    ([["x", "x", "x", "y"]], [[["x", "y", "z"], ["x", "x", "w"]]]),
    ([["a", "b"], ["c"], []], [[["b", "a", "a"]], [["d"], ["c", "d"]], [["e"]]]),
    ([["man_NOUN", "Placing_FRAME", "bench_NOUN", "park_NOUN"], ["cat_NOUN"]],
     [[["man_NOUN", "Placing_FRAME", "bench_NOUN"], ["person_NOUN", "Placing_FRAME", "park_NOUN"]],
      [["cat_NOUN", "Posture_FRAME"], ["cat_NOUN", "cat_NOUN", "bed_NOUN"]]]),
]


def pr(cands, refs):
    clipped = produced = 0
    recall = Fraction(0)
    for c, rs in zip(cands, refs):
        cc = Counter(c)
        mx = Counter()
        for r in rs:
            for t, n in Counter(r).items():
                mx[t] = max(mx[t], n)
        clipped += sum(min(n, mx[t]) for t, n in cc.items())
        produced += len(c)
        recall += max(Fraction(sum(min(n, Counter(r)[t]) for t, n in cc.items()), len(r)) for r in rs if r)
    return Fraction(clipped, produced), recall / len(cands)


out = []
for cands, refs in FIXTURES:
    p, r = pr(cands, refs)
    out.append({"precision": [p.numerator, p.denominator], "recall": [r.numerator, r.denominator]})
print(json.dumps(out))
