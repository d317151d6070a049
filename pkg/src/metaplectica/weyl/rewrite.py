"""Word rewriting for the extended Heisenberg algebra.

A word is a tuple over ``"Q"``, ``"D"``, ``"E"``.  The rules are

    D Q -> Q D + 1,   E E -> E,   D E -> 0,   E Q -> 0,

plus the optional contraction ``E D^k Q^m E -> m! delta_km E``.  Rewriting
terminates in sums of ``Q^h E^eps D^k`` words.  :func:`normal_forms_all_orders`
explores every choice of redex to check that the result does not depend on the
reduction order.
"""
from __future__ import annotations

import math
import random
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..errors import DegreeCapError
from .algebra import DEGREE_CAP, AlgebraElement, Monomial

__all__ = [
    "GENERATORS",
    "redexes",
    "rewrite_at",
    "normal_order",
    "normal_forms_all_orders",
    "is_confluent_on",
    "word_to_element",
]

GENERATORS = ("Q", "D", "E")

Word = Tuple[str, ...]
Combination = Tuple[Tuple[int, Word], ...]


def _check_word(word: Sequence[str], cap: int) -> Word:
    word = tuple(word)
    for g in word:
        if g not in GENERATORS:
            raise ValueError(f"unknown generator {g!r}")
    if len(word) > cap:
        raise DegreeCapError(f"word length {len(word)} exceeds cap {cap}")
    return word


def _contraction_at(word: Word, i: int) -> Optional[Tuple[int, int, int]]:
    """``(end, k, m)`` if ``E D^k Q^m E`` starts at ``i`` (with k + m > 0)."""
    if word[i] != "E":
        return None
    j = i + 1
    k = 0
    while j < len(word) and word[j] == "D":
        k += 1
        j += 1
    m = 0
    while j < len(word) and word[j] == "Q":
        m += 1
        j += 1
    if j < len(word) and word[j] == "E" and k + m > 0:
        return j + 1, k, m
    return None


def redexes(word: Word, contraction: bool = False) -> List[Tuple[str, int]]:
    """All ``(rule, position)`` pairs at which a rule applies."""
    out = []
    for i in range(len(word) - 1):
        pair = word[i] + word[i + 1]
        if pair in ("DQ", "EE", "DE", "EQ"):
            out.append((pair, i))
    if contraction:
        for i in range(len(word)):
            if _contraction_at(word, i):
                out.append(("contract", i))
    return out


def rewrite_at(word: Word, rule: str, i: int) -> List[Tuple[int, Word]]:
    """Apply one rule at position ``i``; returns ``[(coefficient, word), ...]``."""
    left = word[:i]
    if rule == "DQ":
        right = word[i + 2:]
        return [(1, left + ("Q", "D") + right), (1, left + right)]
    if rule == "EE":
        return [(1, left + ("E",) + word[i + 2:])]
    if rule in ("DE", "EQ"):
        return []
    if rule == "contract":
        end, k, m = _contraction_at(word, i)
        if k != m:
            return []
        return [(math.factorial(m), left + ("E",) + word[end:])]
    raise ValueError(f"unknown rule {rule!r}")


def _word_monomial(word: Word) -> Monomial:
    h = 0
    while h < len(word) and word[h] == "Q":
        h += 1
    eps = 1 if h < len(word) and word[h] == "E" else 0
    return Monomial(h, eps, len(word) - h - eps)


def _pick(options, strategy: str, rng: Optional[random.Random]):
    if strategy == "leftmost":
        return min(options, key=lambda r: r[1])
    if strategy == "rightmost":
        return max(options, key=lambda r: r[1])
    if strategy == "random":
        return (rng or random.Random(0)).choice(options)
    raise ValueError(f"unknown strategy {strategy!r}")


def normal_order(
    word: Sequence[str],
    strategy: str = "leftmost",
    contraction: bool = True,
    rng: Optional[random.Random] = None,
    cap: int = DEGREE_CAP,
) -> AlgebraElement:
    """Reduce ``word`` to normal form by repeated single rewrites.

    Parameters
    ----------
    strategy : {"leftmost", "rightmost", "random"}
        Which redex to rewrite next.  Contractions take precedence when
        ``contraction`` is set, since they avoid expanding the word.
    """
    word = _check_word(word, cap)
    pending: Dict[Word, int] = {word: 1}
    done: Dict[Monomial, int] = {}
    while pending:
        w, c = pending.popitem()
        if c == 0:
            continue
        options = redexes(w, contraction)
        if not options:
            mono = _word_monomial(w)
            done[mono] = done.get(mono, 0) + c
            continue
        contractions = [r for r in options if r[0] == "contract"]
        rule, i = _pick(contractions or options, strategy, rng)
        for c2, w2 in rewrite_at(w, rule, i):
            pending[w2] = pending.get(w2, 0) + c * c2
    return AlgebraElement(done)


def _as_key(terms: Dict[Monomial, int]) -> FrozenSet:
    return frozenset((m, c) for m, c in terms.items() if c)


@lru_cache(maxsize=None)
def _all_forms(word: Word, contraction: bool) -> FrozenSet[FrozenSet]:
    options = redexes(word, contraction)
    if not options:
        return frozenset([frozenset([(_word_monomial(word), 1)])])
    results = set()
    for rule, i in options:
        partials = [dict()]
        for c, w in rewrite_at(word, rule, i):
            new = []
            for form in _all_forms(w, contraction):
                for acc in partials:
                    merged = dict(acc)
                    for m, cm in form:
                        merged[m] = merged.get(m, 0) + c * cm
                    new.append(merged)
            partials = new
        results.update(_as_key(p) for p in partials)
    return frozenset(results)


def normal_forms_all_orders(word: Sequence[str], contraction: bool = True) -> List[AlgebraElement]:
    """Every normal form reachable from ``word`` over all reduction orders."""
    word = _check_word(word, DEGREE_CAP)
    return [AlgebraElement(dict(f)) for f in _all_forms(word, contraction)]


def is_confluent_on(words: Iterable[Sequence[str]], contraction: bool = True) -> bool:
    """True when each word has exactly one normal form over all reduction orders."""
    return all(len(_all_forms(tuple(w), contraction)) == 1 for w in words)


def word_to_element(word: Sequence[str]) -> AlgebraElement:
    """Product of generators computed with the closed-form monomial product."""
    gens = {"Q": AlgebraElement.Q(), "D": AlgebraElement.D(), "E": AlgebraElement.E()}
    out = AlgebraElement.one()
    for g in _check_word(word, DEGREE_CAP):
        out = out * gens[g]
    return out
