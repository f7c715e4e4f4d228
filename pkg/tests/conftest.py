"""Shared helpers: compact word construction and random generators."""

from __future__ import annotations

import random

import pytest

from wildwords import (Arch, ArchSystem, IndexExpr, Name, as_finite, letter,
                       lit, parse_word, validate_arch_system)
from wildwords.words import BlockTemplate, free_reduce


def W(text):
    """Parse DSL text into a word expression."""
    return parse_word(text)


def fw(text):
    """Parse DSL text into a finite letter tuple."""
    return as_finite(parse_word(text))


def nm(family, index):
    return Name(family, index)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def random_finite_word(rng, length, families=("p", "q"), max_index=3):
    return tuple(letter(rng.choice(families), rng.randint(1, max_index),
                        rng.choice((1, -1)))
                 for _ in range(length))


def random_reduced_word(rng, length, families=("p", "q"), max_index=3):
    w = free_reduce(random_finite_word(rng, length, families, max_index))
    return w


def brute_force_maximal_systems(w):
    """Independent oracle: enumerate all arc subsets, keep the valid ones,
    filter to inclusion-maximal.  Only for very short words."""
    arcs = [Arch(i, j) for i in range(len(w)) for j in range(i + 1, len(w))
            if w[i] == w[j].inverse()]
    assert len(arcs) <= 14, "oracle only for tiny words"
    valid = []
    for mask in range(1 << len(arcs)):
        chosen = frozenset(a for k, a in enumerate(arcs) if mask >> k & 1)
        if not validate_arch_system(ArchSystem(w, chosen)):
            valid.append(chosen)
    maximal = [s for s in valid
               if not any(s < other for other in valid)]
    return sorted(tuple(sorted(s)) for s in maximal)


def random_band_spec(rng, ctx="h1y", max_len=6, max_m=3, max_n=3, max_k=3):
    """Random well-formed band-system description, built by normalizing a
    random denominator; retried until the numerator has at most max_k
    cancelling factors."""
    from wildwords import Commutator, Conjugate, spec_from_factors

    while True:
        w1 = random_reduced_word(rng, rng.randint(0, max_len))
        conjugates = []
        commutators = []
        if ctx in ("h1y", "pi1y"):
            for _ in range(rng.randint(0, max_m)):
                theta = random_reduced_word(rng, rng.randint(0, max_len))
                kind = rng.choice("pq")
                eta = random_reduced_word(rng, rng.randint(0, max_len), (kind,), 3)
                conjugates.append(Conjugate(theta, eta, kind))
        if ctx in ("h1y", "h1z"):
            families = ("p", "q") if ctx == "h1y" else ("p",)
            for _ in range(rng.randint(0, max_n)):
                sigma = random_reduced_word(rng, rng.randint(0, max_len), families, 3)
                tau = random_reduced_word(rng, rng.randint(0, max_len), families, 3)
                commutators.append(Commutator(sigma, tau))
        if ctx == "h1z":
            w1 = random_reduced_word(rng, rng.randint(0, max_len), ("p",), 3)
        spec = spec_from_factors(w1, conjugates, commutators)
        if len(spec.u_parts) <= max_k:
            return spec


def random_word_expr(rng, depth=2):
    """Random expression in constructor normal form (restricted)."""
    from wildwords import concat, inverse, limit_rec, omega_prod, power

    def rand_index():
        coeff = rng.randint(1, 2)
        offset = rng.randint(0, 2)
        return IndexExpr(coeff, offset)

    def rand_template(var_needed=True):
        n = rng.randint(1, 3)
        entries = []
        for _ in range(n):
            entries.append((rng.choice("pq"), rand_index(), rng.choice((1, -1))))
        return BlockTemplate(tuple(entries))

    def rand_atom():
        kind = rng.randrange(4)
        if kind == 0:
            return lit(random_finite_word(rng, rng.randint(1, 4)))
        if kind == 1:
            return omega_prod("i", rng.randint(1, 3), rand_template())
        if kind == 2:
            exp = rng.choice([IndexExpr(1, 1), IndexExpr(0, 2), IndexExpr(2, 0)])
            return limit_rec("i", rng.randint(1, 2), rand_template(), exp)
        return inverse(rand_atom())

    def rand_expr(d):
        if d == 0:
            return rand_atom()
        kind = rng.randrange(3)
        if kind == 0:
            return concat(*(rand_expr(d - 1) for _ in range(rng.randint(1, 3))))
        if kind == 1:
            return power(rand_expr(d - 1), rng.randint(2, 4))
        return rand_atom()

    return rand_expr(depth)
