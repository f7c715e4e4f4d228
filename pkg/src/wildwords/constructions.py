"""Explicit constructions: commutator families indexed by monotone functions,
recursive limit words, divisibility witnesses and the rational-presentation
relations.

A strictly monotone function is stored as an explicit finite prefix plus an
affine tail, which makes tail equivalence of two functions (equal from some
shifts on) exactly decidable.  The limit word obtained by inserting the next
atom's power after each atom occurrence is represented in the closed
recursive form D(v) = atom(v) . D(v+1)^exponent(v); truncations reproduce the
step-by-step insertion process.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .deciders import (Certificate, DeletePure, GroupContext, TriVerdict,
                       context_for_space, eq_h1, griffiths_pi1,
                       verify_certificate_detailed)
from .errors import AtomsNotCommutators, NotMonotone, PipelineStuck
from .positions import SubwordLocator, delete_range, positions_of
from .unify import word_equal
from .words import (BlockTemplate, IndexExpr, LimitRec, Name, WordExpr,
                    concat, letter, limit_rec, lit, no, omega_prod, power,
                    template, unknown, var_index, yes)


@dataclass(frozen=True)
class MonotoneFunction:
    """Strictly increasing function on positive integers: explicit prefix
    values, then the affine tail coeff*n + offset."""

    prefix: tuple
    coeff: int
    offset: int

    def __post_init__(self):
        for a, b in zip(self.prefix, self.prefix[1:]):
            if b <= a:
                raise NotMonotone(f"prefix not strictly increasing: {self.prefix}")
        if self.coeff < 1:
            raise NotMonotone("tail coefficient must be at least 1")
        junction = self.coeff * (len(self.prefix) + 1) + self.offset
        if junction < 1:
            raise NotMonotone("tail leaves the positive integers")
        if self.prefix and junction <= self.prefix[-1]:
            raise NotMonotone("tail does not continue increasing past the prefix")

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError("arguments start at 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.coeff * n + self.offset

    def tail_start(self) -> int:
        return len(self.prefix) + 1


def identity_function() -> MonotoneFunction:
    return MonotoneFunction((), 1, 0)


def functions_equivalent(f: MonotoneFunction, g: MonotoneFunction) -> TriVerdict:
    """Whether the two functions have a common tail: some n, m with
    f(n+l) = g(m+l) for all l >= 0.  Exactly decidable on this
    representation; Yes carries a minimal witness (n, m)."""
    if f.coeff != g.coeff:
        return no("tail slopes differ")
    diff = g.offset - f.offset
    if diff % f.coeff:
        return no("tail offsets differ by a non-multiple of the slope")
    delta = diff // f.coeff  # f(n) == g(n - delta) on the affine tails
    n = max(f.tail_start(), g.tail_start() + delta, 1)
    m = n - delta
    if m < 1:
        n += 1 - m
        m = 1
    # extend the agreement backwards as far as it goes
    while n > 1 and m > 1 and f(n - 1) == g(m - 1):
        n -= 1
        m -= 1
    return yes((n, m))


def _commutator_entries(first, second):
    return ((first[0], first[1], -1), (second[0], second[1], -1),
            (first[0], first[1], 1), (second[0], second[1], 1))


def commutator_word(k: MonotoneFunction, space: str) -> WordExpr:
    """The infinite commutator product indexed by a monotone function.

    For the Griffiths space ('y') block i is the commutator of p at k(i) with
    q at k(i); for the Hawaiian Earring ('z') block i is the commutator of p
    at k(2i-1) with p at k(2i).
    """
    if space == "y":
        explicit = len(k.prefix)  # blocks with any prefix-valued index
        blocks = []
        for i in range(1, explicit + 1):
            v = k(i)
            blocks.append(lit((letter("p", v, -1), letter("q", v, -1),
                               letter("p", v), letter("q", v))))
        tail_ix = IndexExpr(k.coeff, k.offset)
        tail = omega_prod("i", explicit + 1,
                          template(*_commutator_entries(("p", tail_ix), ("q", tail_ix))))
        return concat(*blocks, tail)
    if space == "z":
        first_tail_block = len(k.prefix) // 2 + 1
        while 2 * first_tail_block - 1 <= len(k.prefix):
            first_tail_block += 1
        blocks = []
        for i in range(1, first_tail_block):
            a, b = k(2 * i - 1), k(2 * i)
            blocks.append(lit((letter("p", a, -1), letter("p", b, -1),
                               letter("p", a), letter("p", b))))
        odd = IndexExpr(2 * k.coeff, k.offset - k.coeff)   # k(2i-1) on the tail
        even = IndexExpr(2 * k.coeff, k.offset)            # k(2i)
        tail = omega_prod("i", first_tail_block,
                          template(*_commutator_entries(("p", odd), ("p", even))))
        return concat(*blocks, tail)
    raise ValueError(f"unknown space {space!r}")


def distinctness_in_h1(f: MonotoneFunction, g: MonotoneFunction, space: str,
                       ctx: GroupContext | None = None) -> TriVerdict:
    """Whether the commutator words of two tail-inequivalent functions define
    distinct homology classes.  No means distinct (their quotient is a
    nonzero class); the inequivalence precondition is enforced."""
    equiv = functions_equivalent(f, g)
    if equiv.is_yes:
        raise ValueError("functions are tail equivalent; distinctness needs "
                         "inequivalent inputs")
    u = commutator_word(f, space)
    v = commutator_word(g, space)
    return eq_h1(u, v, space, ctx)


# ---------------------------------------------------------------------------
# Limit words


@dataclass(frozen=True)
class LimitWordSpec:
    """Atom template over one variable, start index, exponent rule."""

    atom: BlockTemplate
    start: int = 1
    exponent: IndexExpr = IndexExpr(1, 1)  # v + 1


def limit_word(spec: LimitWordSpec) -> WordExpr:
    """The word reached in the limit by inserting atom(v+1) to the power
    exponent(v) after each occurrence of atom(v), in closed recursive form."""
    return limit_rec("i", spec.start, spec.atom, spec.exponent)


def standard_limit_word() -> WordExpr:
    """The limit word whose atoms are the commutators of p and q at equal
    indices; its homology class is divisible by every positive integer."""
    ix = var_index()
    return limit_word(LimitWordSpec(template(*_commutator_entries(("p", ix), ("q", ix)))))


def _require_limit(w: WordExpr) -> LimitRec:
    if not isinstance(w, LimitRec):
        raise ValueError("expected a limit word in recursive form")
    return w


def _copies_product(w: LimitRec, upto: int) -> int:
    """Number of copies of the depth-``upto`` unit inside the whole word."""
    return prod(w.exponent(v) for v in range(w.start, upto))


def delete_small_atoms(w: WordExpr, below: int) -> WordExpr:
    """The word left after deleting every occurrence of the atoms at depths
    before ``below``: a power of the depth-``below`` unit."""
    d = _require_limit(w)
    if below < d.start:
        raise ValueError("deletion depth before the start of the recursion")
    if below == d.start:
        return d
    return power(d.unit(below), _copies_product(d, below))


def repeating_unit(w: WordExpr, depth: int) -> WordExpr:
    """The unit whose power is the atom-deleted word: the subword from the
    first letter of the depth-``depth`` word up to its second atom."""
    d = _require_limit(w)
    if depth < d.start:
        raise ValueError("depth before the start of the recursion")
    return d if depth == d.start else d.unit(depth)


def _require_commutator_atoms(d: LimitRec, ctx: GroupContext) -> None:
    es = d.head.entries
    if len(es) != 4:
        raise AtomsNotCommutators("atoms must be four-letter commutators")
    (f1, i1, s1), (f2, i2, s2), (f3, i3, s3), (f4, i4, s4) = es
    if not (f1 == f3 and i1 == i3 and s1 == -1 and s3 == 1 and
            f2 == f4 and i2 == i4 and s2 == -1 and s4 == 1):
        raise AtomsNotCommutators("atoms must be commutators of two letters")
    for fam in (f1, f2):
        ctx.family_kind(fam)


def _delete_atoms_certificate(source: WordExpr, d: LimitRec, below: int,
                              ctx: GroupContext):
    """Pure singleton deletions removing all atoms at depths before ``below``
    from the recursive word, left to right per depth."""
    moves = []
    current = source
    for depth in range(d.start, below):
        names = {Name(fam, ix(depth)) for fam, ix, _ in d.head.entries}
        expected = 4 * _copies_product(d, depth)
        removed = 0
        for name in sorted(names):
            while True:
                hits = positions_of(current, name)
                if not hits:
                    break
                path, letterval = hits[0]
                kind = ctx.family_kind(name.family)
                loc = SubwordLocator.single(path)
                moves.append(DeletePure(loc, kind))
                current = delete_range(current, loc)
                removed += 1
        if removed != expected:
            raise PipelineStuck(
                f"depth {depth}: deleted {removed} letters, expected {expected}")
    return moves, current


def divisibility_witness(w: WordExpr, n: int,
                         ctx: GroupContext | None = None):
    """A root and a certificate showing the limit word is an n-th power in
    first homology of the Griffiths space.

    Returns (x, certificate): deleting all atom occurrences at depths before
    n (pure singleton moves, realizable because the atoms are commutators)
    turns the word into the n-th power of x.
    """
    ctx = ctx or context_for_space("y")
    d = _require_limit(w)
    if n < 1:
        raise ValueError("the exponent must be positive")
    _require_commutator_atoms(d, ctx)
    depth = d.start + n - 1
    total = _copies_product(d, depth)
    if total % n:
        raise PipelineStuck(f"copy count {total} is not divisible by {n}")
    x = power(d.unit(depth) if depth > d.start else d, total // n)
    if n == 1:
        return x, Certificate(d, (), d)
    moves, final = _delete_atoms_certificate(d, d, depth, ctx)
    target = power(d.unit(depth), total)
    v = word_equal(final, target)
    if not v.is_yes:
        raise PipelineStuck(f"deleted word not certified equal to the power: {v!r}")
    cert = Certificate(d, tuple(moves), target)
    ok, why = verify_certificate_detailed(cert, griffiths_h1_for(ctx))
    if not ok:
        raise PipelineStuck(f"divisibility certificate failed: {why}")
    return x, cert


def griffiths_h1_for(ctx: GroupContext) -> GroupContext:
    if ctx.target == "h1_griffiths":
        return ctx
    return GroupContext("h1_griffiths", ctx.p_families, ctx.q_families or frozenset({"q"}))


def check_power_relation(w: WordExpr, depth: int,
                         ctx: GroupContext | None = None) -> TriVerdict:
    """Verify in the Griffiths fundamental group that the depth-``depth``
    unit equals the next unit raised to its exponent: deleting the single
    leading atom realizes the relation with four pure moves."""
    ctx = ctx or griffiths_pi1()
    d = _require_limit(w)
    _require_commutator_atoms(d, ctx)
    if depth < d.start:
        raise ValueError("depth before the start of the recursion")
    u = d if depth == d.start else d.unit(depth)
    moves, final = _delete_atoms_certificate(u, u, depth + 1, ctx)
    target = power(u.unit(), u.exponent(depth))
    v = word_equal(final, target)
    if not v.is_yes:
        return unknown(v.bound or 0)
    cert = Certificate(u, tuple(moves), target)
    ok, why = verify_certificate_detailed(cert, ctx)
    if not ok:
        raise PipelineStuck(f"relation certificate failed: {why}")
    return yes(cert)
