"""Deterministic test corpora of modules, module pairs and value shifts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .groups import Q, GroupElement, UpSet
from .spectrum import (
    ROOT,
    ModuleTuple,
    SpectrumTree,
    colon,
    full,
    ideal_sum,
    intersect,
    leq,
    localization_max,
    localization_ring,
    prime_ideal,
    primary_samples,
    product,
    reconcile,
    translate,
    unit,
)

DENOM = 6


@dataclass
class Corpus:
    ideals: list[ModuleTuple]
    pairs: list[tuple[int, int]]
    shifts: list[dict[str, GroupElement]]

    def proper(self, tree: SpectrumTree) -> list[ModuleTuple]:
        """Nonzero ideals of R other than R itself."""
        R = unit(tree)
        return [I for I in self.ideals if not I.is_zero and I != R and leq(I, R)]


def _coord(rng: random.Random, kind: str, size: int) -> Fraction:
    if kind == Q:
        return Fraction(rng.randint(-size * DENOM, size * DENOM), DENOM)
    return Fraction(rng.randint(-size, size))


def random_cut(rng: random.Random, group, size: int = 4) -> UpSet:
    level = rng.randrange(group.rank)
    quotient = group.quotient(level)
    bound = [_coord(rng, f, size) for f in quotient.factors]
    return UpSet.cut(group, level, bound, rng.random() < 0.5)


def random_shift(rng: random.Random, tree: SpectrumTree, size: int = 2) -> dict[str, GroupElement]:
    """Values of one element of K on every branch, agreeing at shared primes."""
    shift: dict[str, GroupElement] = {}
    for b, g in tree.branches:
        best = None
        for c in shift:
            N = tree.meet(tree.at(b, 0), c)
            if N.id == ROOT:
                continue
            if best is None or N.depth_on(b) < best[1].depth_on(b):
                best = (c, N)
        coords = [_coord(rng, f, size) for f in g.factors]
        if best is not None:
            c, N = best
            head = shift[c].project(N.depth_on(c)).coords
            coords[: len(head)] = head
        shift[b] = g.element(tuple(coords))
    return shift


def structured(tree: SpectrumTree, depth: int = 3) -> list[ModuleTuple]:
    """R, K, every prime, R_P, P R_P and the primary samples."""
    out = [unit(tree), full(tree)]
    for P in tree.nonzero():
        out += [prime_ideal(tree, P), localization_ring(tree, P), localization_max(tree, P)]
        out += primary_samples(tree, P, depth)
    return out


def build_corpus(tree: SpectrumTree, seed: int = 0, cases: int = 200, depth: int = 3, size: int = 4) -> Corpus:
    rng = random.Random(seed)
    ideals: list[ModuleTuple] = []

    def add(I):
        if not I.is_zero and I not in ideals:
            ideals.append(I)

    for I in structured(tree, depth):
        add(I)
    base = list(ideals)
    target = max(24, len(base) + 12)
    attempts = 0
    while len(ideals) < target and attempts < 50 * target:
        attempts += 1
        comps = {b: random_cut(rng, g, size) for b, g in tree.branches}
        add(reconcile(tree, comps))
    # closure under a few ideal operations keeps the corpus from being too generic
    for _ in range(8):
        I, J = rng.choice(ideals), rng.choice(ideals)
        for K in (ideal_sum(tree, I, J), intersect(tree, I, J), product(tree, I, J)):
            add(K)
        if not J.is_zero:
            add(colon(tree, I, J))
    for _ in range(6):
        add(translate(tree, rng.choice(base), random_shift(rng, tree)))

    n = len(ideals)
    all_pairs = list(combinations_with_replacement(range(n), 2))
    if len(all_pairs) > cases:
        pairs = sorted(rng.sample(all_pairs, cases))
    else:
        pairs = all_pairs
    shifts = [random_shift(rng, tree) for _ in range(max(n, 24))]
    return Corpus(ideals, pairs, shifts)
