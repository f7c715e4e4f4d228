"""Word-problem deciders and certificate verification.

Four target groups are supported: the group of restricted reduced words over
one alphabet family (the fundamental group of the Hawaiian Earring), the
fundamental group of the Griffiths space, and the first homology groups of
both spaces.  Equality verdicts come with replayable evidence: a certificate
of transformation moves for Yes, a finite projection or legality witness for
No.  Unknown is the only unwitnessed verdict.

Moves mirror the transformation types of the finite word-problem criteria:
deleting a pure one-family subword, deleting two disjoint mutually inverse
subwords, permuting two consecutive subwords, and one reduction step.  A
certificate transforms its source and its target word toward a common word;
each move is tagged with the side it acts on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arches import group_product, reduced_form
from .errors import InvalidLocator, NotRestricted, UnificationInconclusive
from .positions import Cut, SubwordLocator, split_at_cuts
from .unify import limitrec_align, unify_omega_tails, word_equal
from .words import (DEFAULT_BOUND, EMPTY, Concat, Inverse, LimitRec, Lit,
                    Name, OmegaProd, Power, TriVerdict, WordExpr, _Empty,
                    atoms, concat, exponent_sum, inverse, is_finite_expr,
                    mentioned_names, no, project, require_restricted,
                    unknown, yes)

TARGETS = ("wp", "pi1_griffiths", "h1_hawaiian", "h1_griffiths")


@dataclass(frozen=True)
class GroupContext:
    """Target group plus the partition of alphabet families into the two
    sides of the wedge."""

    target: str
    p_families: frozenset = frozenset({"p"})
    q_families: frozenset = frozenset({"q"})

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        if self.target in ("pi1_griffiths", "h1_griffiths"):
            if not self.p_families or not self.q_families:
                raise ValueError("the Griffiths-space targets need both families")
        else:
            if not self.p_families:
                raise ValueError("at least one letter family is required")
        if self.p_families & self.q_families:
            raise ValueError("family partition must be disjoint")

    def family_kind(self, family: str) -> str:
        if family in self.p_families:
            return "p"
        if family in self.q_families:
            return "q"
        raise ValueError(f"family {family!r} not in this context")

    @property
    def mode(self) -> str:
        return "pq" if self.target in ("pi1_griffiths", "h1_griffiths") else "p"


def hawaiian_word_group(p_families=frozenset({"p"})) -> GroupContext:
    return GroupContext("wp", frozenset(p_families), frozenset())


def griffiths_pi1(p_families=frozenset({"p"}), q_families=frozenset({"q"})) -> GroupContext:
    return GroupContext("pi1_griffiths", frozenset(p_families), frozenset(q_families))


def hawaiian_h1(p_families=frozenset({"p"})) -> GroupContext:
    return GroupContext("h1_hawaiian", frozenset(p_families), frozenset())


def griffiths_h1(p_families=frozenset({"p"}), q_families=frozenset({"q"})) -> GroupContext:
    return GroupContext("h1_griffiths", frozenset(p_families), frozenset(q_families))


def context_for_space(space: str) -> GroupContext:
    if space == "z":
        return hawaiian_h1()
    if space == "y":
        return griffiths_h1()
    raise ValueError(f"unknown space {space!r}, expected 'z' or 'y'")


# ---------------------------------------------------------------------------
# Moves and certificates


@dataclass(frozen=True)
class DeletePure:
    """Delete a subword whose letters all belong to one family side."""

    locator: SubwordLocator
    family_kind: str  # 'p' | 'q'
    side: str = "source"


@dataclass(frozen=True)
class DeleteInversePair:
    """Delete two disjoint mutually inverse subwords, first before second."""

    first: SubwordLocator
    second: SubwordLocator
    side: str = "source"


@dataclass(frozen=True)
class Swap:
    """Permute two consecutive subwords, first immediately before second."""

    first: SubwordLocator
    second: SubwordLocator
    side: str = "source"


@dataclass(frozen=True)
class Reduce:
    """Replace the word by its reduced form."""

    side: str = "source"


Move = object  # informal union of the four move classes


@dataclass(frozen=True)
class Certificate:
    """A finite move sequence carrying both words to one common word."""

    source: WordExpr
    moves: tuple
    target: WordExpr


_ADMISSIBLE = {
    "wp": (Reduce,),
    "pi1_griffiths": (DeletePure, Reduce),
    "h1_hawaiian": (DeleteInversePair, Swap),
    "h1_griffiths": (DeletePure, DeleteInversePair, Swap),
}


def word_families(w: WordExpr) -> set[str]:
    out: set[str] = set()

    def walk(e):
        if isinstance(e, Lit):
            out.update(x.name.family for x in e.letters)
        elif isinstance(e, Concat):
            for p in e.parts:
                walk(p)
        elif isinstance(e, Power):
            walk(e.base)
        elif isinstance(e, Inverse):
            walk(e.child)
        elif isinstance(e, OmegaProd):
            out.update(e.block.families())
        elif isinstance(e, LimitRec):
            out.update(e.head.families())

    walk(w)
    return out


def _check_families(w: WordExpr, ctx: GroupContext) -> None:
    for fam in word_families(w):
        ctx.family_kind(fam)


def verify_certificate_detailed(cert: Certificate, ctx: GroupContext,
                                bound: int = DEFAULT_BOUND):
    """Replay every move, checking its precondition and admissibility, then
    compare the two final words.  Returns (ok, diagnostic)."""
    state = {"source": cert.source, "target": cert.target}
    for k, mv in enumerate(cert.moves):
        if not isinstance(mv, _ADMISSIBLE[ctx.target]):
            return False, f"move {k}: {type(mv).__name__} not admissible for {ctx.target}"
        if mv.side not in state:
            return False, f"move {k}: unknown side {mv.side!r}"
        w = state[mv.side]
        try:
            if isinstance(mv, DeletePure):
                parts = split_at_cuts(w, [mv.locator.lo, mv.locator.hi])
                sub = parts[1]
                if isinstance(sub, _Empty):
                    return False, f"move {k}: empty deletion"
                kinds = {ctx.family_kind(f) for f in word_families(sub)}
                if kinds != {mv.family_kind}:
                    return False, f"move {k}: subword is not pure {mv.family_kind}"
                w = concat(parts[0], parts[2])
            elif isinstance(mv, DeleteInversePair):
                parts = split_at_cuts(
                    w, [mv.first.lo, mv.first.hi, mv.second.lo, mv.second.hi])
                a, x, b, y, c = parts
                if isinstance(x, _Empty) or isinstance(y, _Empty):
                    return False, f"move {k}: empty deletion"
                v = word_equal(y, inverse(x), bound)
                if not v.is_yes:
                    return False, f"move {k}: subwords not certified mutually inverse ({v!r})"
                w = concat(a, b, c)
            elif isinstance(mv, Swap):
                parts = split_at_cuts(
                    w, [mv.first.lo, mv.first.hi, mv.second.lo, mv.second.hi])
                a, u, m, v2, c = parts
                if not isinstance(m, _Empty):
                    return False, f"move {k}: subwords are not consecutive"
                w = concat(a, v2, u, c)
            elif isinstance(mv, Reduce):
                w = reduced_form(w)
            else:
                return False, f"move {k}: unknown move {mv!r}"
        except (InvalidLocator, NotRestricted, UnificationInconclusive, ValueError) as exc:
            return False, f"move {k}: {exc}"
        state[mv.side] = w
    v = word_equal(state["source"], state["target"], bound)
    if v.is_yes:
        return True, None
    return False, f"final words not certified equal ({v!r})"


def verify_certificate(cert: Certificate, ctx: GroupContext,
                       bound: int = DEFAULT_BOUND) -> bool:
    ok, _ = verify_certificate_detailed(cert, ctx, bound)
    return ok


# ---------------------------------------------------------------------------
# Legality


@dataclass(frozen=True)
class LegalityReport:
    verdict: TriVerdict
    mode: str  # 'p' | 'pq'
    diagnostics: object = None


def _atom_pure_kind(atom: WordExpr, ctx: GroupContext):
    """The single family kind of an atom, or None if mixed."""
    fams = word_families(atom)
    kinds = {ctx.family_kind(f) for f in fams}
    if len(kinds) == 1:
        return kinds.pop()
    return None


def _infinite_atoms(w: WordExpr):
    """(index, atom) pairs for atoms denoting infinite words."""
    return [(i, a) for i, a in enumerate(atoms(w)) if not is_finite_expr(a)]


def _tails_unify(a: WordExpr, b: WordExpr):
    """Whether a forward-infinite atom and a later backward-infinite atom can
    carry mutually inverse infinite subwords: some tail of the forward word
    must equal some tail of the inverse's underlying word."""
    fa = a
    fb = b.child if isinstance(b, Inverse) else b
    if isinstance(fa, OmegaProd) and isinstance(fb, OmegaProd):
        return unify_omega_tails(fa.block, fa.start, fb.block, fb.start) is not None
    if isinstance(fa, LimitRec) and isinstance(fb, LimitRec):
        return limitrec_align(fa, fb) is not None
    return False


def check_legal(w: WordExpr, mode: str, ctx: GroupContext | None = None,
                bound: int = DEFAULT_BOUND) -> LegalityReport:
    """Decide legality: restricted, in 'pq' mode all pure one-family subwords
    finite, and no presentation with two disjoint mutually inverse infinite
    subwords.

    An infinite pure subword exists exactly when some infinite atom uses a
    single family side.  An infinite mutually inverse pair exists exactly
    when some forward-infinite atom tail coincides with the underlying tail
    of a later backward-infinite atom (in either role order); this is decided
    by template unification.  Sound: Yes and No only with certificates.
    """
    if mode not in ("p", "pq"):
        raise ValueError(f"unknown mode {mode!r}")
    if ctx is None:
        ctx = griffiths_h1() if mode == "pq" else hawaiian_h1()
    require_restricted(w)
    _check_families(w, ctx)

    infinite = _infinite_atoms(w)
    if mode == "pq":
        for i, a in infinite:
            kind = _atom_pure_kind(a, ctx)
            if kind is not None:
                return LegalityReport(
                    no(("infinite pure subword", i, kind)), mode,
                    f"atom {i} uses only {kind}-side letters")

    inconclusive = None
    for i, a in infinite:
        for j, b in infinite:
            if j <= i:
                continue
            a_fwd = not isinstance(a, Inverse)
            b_fwd = not isinstance(b, Inverse)
            if a_fwd == b_fwd:
                continue  # subword order types cannot be mutually inverse
            fwd, bwd = (a, b) if a_fwd else (b, a)
            try:
                hit = _tails_unify(fwd, bwd)
            except UnificationInconclusive as exc:
                inconclusive = exc.bound
                continue
            if hit:
                return LegalityReport(
                    no(("infinite inverse pair", i, j)), mode,
                    f"atoms {i} and {j} share an infinite mutually inverse subword")
    if inconclusive is not None:
        return LegalityReport(unknown(inconclusive), mode, "tail comparison inconclusive")
    return LegalityReport(yes(), mode, None)


# ---------------------------------------------------------------------------
# Pure-subword units for the greedy triviality search


def _first_pure_unit(w: WordExpr, ctx: GroupContext):
    """The first deletable pure subword: a maximal one-family letter run in a
    literal atom, or a wholly pure symbolic atom.  Returns (locator, kind)."""
    parts = atoms(w)
    is_conc = isinstance(w, Concat)
    for k, atom in enumerate(parts):
        if isinstance(atom, Lit):
            letters = atom.letters
            kind0 = ctx.family_kind(letters[0].name.family)
            j = 1
            while j < len(letters) and ctx.family_kind(letters[j].name.family) == kind0:
                j += 1
            prefix = (("c", k),) if is_conc else ()
            lo = Cut.before(prefix + (("w", 0),))
            hi = Cut.after_pos(prefix + (("w", j - 1),))
            return SubwordLocator(lo, hi), kind0
        kind = _atom_pure_kind(atom, ctx)
        if kind is not None:
            return SubwordLocator(Cut.gap(k), Cut.gap(k + 1)), kind
    return None


# ---------------------------------------------------------------------------
# Deciders


def eq_in_word_group(u: WordExpr, v: WordExpr, bound: int = DEFAULT_BOUND) -> TriVerdict:
    """Equality in the group of restricted reduced words: Yes exactly when
    the product of u with the inverse of v reduces to the empty word."""
    require_restricted(u)
    require_restricted(v)
    try:
        prod = group_product(reduced_form(u), inverse(reduced_form(v)))
    except UnificationInconclusive as exc:
        return unknown(exc.bound)
    if isinstance(prod, _Empty):
        return yes()
    names = sorted(mentioned_names(prod, bound))
    from .words import free_reduce

    for size in (1, 2):
        if size == 1:
            candidates = [frozenset([n]) for n in names]
        else:
            candidates = [frozenset([a, b]) for i, a in enumerate(names)
                          for b in names[i + 1:]]
        for fs in candidates:
            if free_reduce(project(prod, fs)):
                return no(tuple(sorted(fs)))
    return unknown(bound)


def trivial_pi1_griffiths(w: WordExpr, ctx: GroupContext | None = None,
                          budget: int = DEFAULT_BOUND) -> TriVerdict:
    """Triviality in the fundamental group of the Griffiths space.

    Greedy fixpoint: delete every available pure one-family subword, reduce,
    repeat.  Reaching the empty word gives Yes with a replayable certificate.
    A stable nonempty residue is necessarily infinite with all pure subwords
    finite; finitely many pure deletions then remove only finitely many
    letters of it, so the verdict is No with the residue as witness.  The
    step budget bounds the number of passes; exceeding it yields Unknown.
    """
    ctx = ctx or griffiths_pi1()
    if ctx.target != "pi1_griffiths":
        raise ValueError("context must target the Griffiths fundamental group")
    require_restricted(w)
    _check_families(w, ctx)
    moves: list = []
    try:
        cur = reduced_form(w)
    except UnificationInconclusive as exc:
        return unknown(exc.bound)
    if cur != w:
        moves.append(Reduce())
    for _ in range(budget):
        if isinstance(cur, _Empty):
            return yes(Certificate(w, tuple(moves), EMPTY))
        changed = False
        while True:
            unit = _first_pure_unit(cur, ctx)
            if unit is None:
                break
            locator, kind = unit
            moves.append(DeletePure(locator, kind))
            parts = split_at_cuts(cur, [locator.lo, locator.hi])
            cur = concat(parts[0], parts[2])
            changed = True
        if not changed:
            break
        try:
            red = reduced_form(cur)
        except UnificationInconclusive as exc:
            return unknown(exc.bound)
        if red != cur:
            moves.append(Reduce())
            cur = red
    if isinstance(cur, _Empty):
        return yes(Certificate(w, tuple(moves), EMPTY))
    if _first_pure_unit(cur, ctx) is not None:
        return unknown(budget)  # budget ran out mid-search
    if is_finite_expr(cur):
        # unreachable: a finite word is a concatenation of pure runs
        return unknown(budget)
    return no(("stable infinite residue with finite pure subwords", cur))


def eq_pi1_griffiths(u: WordExpr, v: WordExpr, ctx: GroupContext | None = None,
                     budget: int = DEFAULT_BOUND) -> TriVerdict:
    ctx = ctx or griffiths_pi1()
    try:
        diff = group_product(reduced_form(u), inverse(reduced_form(v)))
    except UnificationInconclusive as exc:
        return unknown(exc.bound)
    return trivial_pi1_griffiths(diff, ctx, budget)


def trivial_h1(w: WordExpr, space: str, ctx: GroupContext | None = None,
               bound: int = DEFAULT_BOUND) -> TriVerdict:
    """Triviality in first homology of the Hawaiian Earring ('z') or the
    Griffiths space ('y').

    Finite words: for 'z' trivial exactly when every letter has exponent sum
    zero; for 'y' always trivial.  Infinite reduced words that are legal in
    the space's mode are never trivial; outside the legal fragment the answer
    is Unknown.
    """
    ctx = ctx or context_for_space(space)
    require_restricted(w)
    _check_families(w, ctx)
    try:
        r = reduced_form(w)
    except UnificationInconclusive as exc:
        return unknown(exc.bound)
    if is_finite_expr(r):
        if space == "y":
            return yes()
        from .words import as_finite

        sums: dict = {}
        for x in as_finite(r):
            sums[x.name] = sums.get(x.name, 0) + x.sign
        for name in sorted(sums):
            if sums[name] != 0:
                return no(("nonzero exponent sum", name, sums[name]))
        return yes()
    report = check_legal(r, ctx.mode, ctx, bound)
    if report.verdict.is_yes:
        return no(("infinite legal reduced word", report))
    return unknown(bound)


def eq_h1(u: WordExpr, v: WordExpr, space: str, ctx: GroupContext | None = None,
          bound: int = DEFAULT_BOUND) -> TriVerdict:
    ctx = ctx or context_for_space(space)
    try:
        diff = group_product(reduced_form(u), inverse(reduced_form(v)))
    except UnificationInconclusive as exc:
        return unknown(exc.bound)
    return trivial_h1(diff, space, ctx, bound)
