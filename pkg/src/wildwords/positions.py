"""Letter positions, cuts and subword extraction on word expressions.

A position is a path of branch selectors into the expression tree: concat
child, power copy, inverse descent, product block and offset, recursion copy
and head offset.  Positions of one expression are totally ordered; the order
reverses below each Inverse node.  A cut is a boundary immediately before or
after a position (or at either infinity); a subword locator is a pair of cuts
and denotes the connected range between them.

Path steps:
    ('c', k)   concat child k
    ('p', c)   power copy c
    ('i',)     inverse descent (orientation flip)
    ('w', j)   letter j of a literal
    ('o', v)   product block with variable value v
    ('b', j)   offset j inside an instantiated block
    ('h',)     recursion head
    ('r', c)   recursion copy c of the next-depth word
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .errors import InvalidLocator
from .words import (EMPTY, Concat, Inverse, Letter, LimitRec, Lit, OmegaProd,
                    Power, WordExpr, _Empty, _solved_blocks, concat, inverse,
                    lit, omega_prod, power)

Path = tuple


@dataclass(frozen=True)
class Cut:
    """A boundary between letters.

    Kinds: -1 before everything, +1 after everything, 0 immediately
    before/after a letter position, 3 at a gap between top-level atoms
    (``path`` then holds the atom index).  Gap cuts exist because a boundary
    between a forward-infinite and a backward-infinite atom is adjacent to no
    letter at all.
    """

    kind: int
    path: Path | None = None
    after: bool = False

    @staticmethod
    def before(path: Path) -> "Cut":
        return Cut(0, tuple(path), False)

    @staticmethod
    def after_pos(path: Path) -> "Cut":
        return Cut(0, tuple(path), True)

    @staticmethod
    def gap(atom_index: int) -> "Cut":
        return Cut(3, (atom_index,), False)


NEG_INF = Cut(-1)
POS_INF = Cut(1)


@dataclass(frozen=True)
class SubwordLocator:
    """The connected range of positions between two cuts."""

    lo: Cut
    hi: Cut

    @staticmethod
    def whole() -> "SubwordLocator":
        return SubwordLocator(NEG_INF, POS_INF)

    @staticmethod
    def single(path: Path) -> "SubwordLocator":
        return SubwordLocator(Cut.before(path), Cut.after_pos(path))

    @staticmethod
    def range(first: Path, last: Path) -> "SubwordLocator":
        return SubwordLocator(Cut.before(first), Cut.after_pos(last))


# ---------------------------------------------------------------------------
# Resolution and ordering


def letter_at(expr: WordExpr, path: Path) -> Letter:
    """The letter a position resolves to."""
    try:
        return _letter_at(expr, tuple(path))
    except (IndexError, KeyError, AssertionError, TypeError) as exc:
        raise InvalidLocator(f"path {path!r} does not resolve: {exc}") from exc


def _letter_at(expr, path):
    step = path[0]
    if isinstance(expr, Lit):
        assert step[0] == "w" and len(path) == 1
        j = step[1]
        assert 0 <= j < len(expr.letters)
        return expr.letters[j]
    if isinstance(expr, Concat):
        assert step[0] == "c"
        return _letter_at(expr.parts[step[1]], path[1:])
    if isinstance(expr, Power):
        assert step[0] == "p" and 0 <= step[1] < expr.exponent
        return _letter_at(expr.base, path[1:])
    if isinstance(expr, Inverse):
        assert step[0] == "i"
        return _letter_at(expr.child, path[1:]).inverse()
    if isinstance(expr, OmegaProd):
        assert step[0] == "o" and step[1] >= expr.start and len(path) == 2
        b = path[1]
        assert b[0] == "b"
        letters = expr.block.instantiate(step[1])
        assert 0 <= b[1] < len(letters)
        return letters[b[1]]
    if isinstance(expr, LimitRec):
        if step[0] == "h":
            b = path[1]
            assert b[0] == "b" and len(path) == 2
            letters = expr.head.instantiate(expr.start)
            assert 0 <= b[1] < len(letters)
            return letters[b[1]]
        assert step[0] == "r" and 0 <= step[1] < expr.exponent(expr.start)
        return _letter_at(expr.unit(), path[1:])
    raise AssertionError(f"cannot descend into {expr!r}")


def _step_rank(expr, step):
    # Rank of a first path component among the children of one node, in word
    # order before orientation flips.
    kind = step[0]
    if isinstance(expr, LimitRec):
        if kind == "h":
            return (0, 0)
        if kind == "r":
            return (1, step[1])
    if kind in ("c", "p", "w", "o", "b", "r"):
        return (0, step[1])
    if kind in ("i", "h"):
        return (0, 0)
    raise InvalidLocator(f"unknown path step {step!r}")


def compare_positions(expr: WordExpr, p: Path, q: Path) -> int:
    """-1, 0 or 1 as position p comes before, at or after q in word order."""
    direction = 1
    e = expr
    p = tuple(p)
    q = tuple(q)
    while True:
        if not p or not q:
            if not p and not q:
                return 0
            raise InvalidLocator("positions of different depth at a letter")
        ra, rb = _step_rank(e, p[0]), _step_rank(e, q[0])
        if ra != rb:
            return direction * (-1 if ra < rb else 1)
        step = p[0]
        if isinstance(e, Lit):
            if p[1:] or q[1:]:
                raise InvalidLocator("literal positions have a single step")
            return 0
        if isinstance(e, Concat):
            e = e.parts[step[1]]
        elif isinstance(e, Power):
            e = e.base
        elif isinstance(e, Inverse):
            direction = -direction
            e = e.child
        elif isinstance(e, OmegaProd):
            b1, b2 = p[1], q[1]
            if b1[1] != b2[1]:
                return direction * (-1 if b1[1] < b2[1] else 1)
            return 0
        elif isinstance(e, LimitRec):
            if step[0] == "h":
                b1, b2 = p[1], q[1]
                if b1[1] != b2[1]:
                    return direction * (-1 if b1[1] < b2[1] else 1)
                return 0
            e = e.unit()
        else:
            raise InvalidLocator(f"cannot descend into {e!r}")
        p = p[1:]
        q = q[1:]


def _atom_slot(expr: WordExpr, c: Cut):
    """Sort key of a finite cut at the granularity of top-level atoms: a gap
    before atom k gets 2k, a letter cut inside atom j gets 2j+1."""
    from .words import atoms

    if c.kind == 3:
        k = c.path[0]
        if not (0 <= k <= len(atoms(expr))):
            raise InvalidLocator(f"gap index {k} out of range")
        return 2 * k, None, None
    p = tuple(c.path)
    if isinstance(expr, Concat):
        if p[0][0] != "c":
            raise InvalidLocator("expected a concat step at the root")
        return 2 * p[0][1] + 1, expr.parts[p[0][1]], p[1:]
    return 1, expr, p


def compare_cuts(expr: WordExpr, a: Cut, b: Cut) -> int:
    inf_rank = {-1: -1, 1: 1, 0: 0, 3: 0}
    ra, rb = inf_rank[a.kind], inf_rank[b.kind]
    if ra != rb or ra != 0:
        return 0 if ra == rb else (-1 if ra < rb else 1)
    sa, atom_a, pa = _atom_slot(expr, a)
    sb, atom_b, pb = _atom_slot(expr, b)
    if sa != sb:
        return -1 if sa < sb else 1
    if a.kind == 3:
        return 0
    c = compare_positions(atom_a, pa, pb)
    if c != 0:
        return c
    if a.after == b.after:
        return 0
    return -1 if not a.after else 1


# ---------------------------------------------------------------------------
# Enumerating letter positions


def positions_of(expr: WordExpr, name) -> list[tuple[Path, Letter]]:
    """All positions carrying the given letter name, in word order.

    Finite for restricted words; callers are expected to have checked
    restrictedness.
    """
    if isinstance(expr, _Empty):
        return []
    if isinstance(expr, Lit):
        return [((("w", j),), x) for j, x in enumerate(expr.letters) if x.name == name]
    if isinstance(expr, Concat):
        out = []
        for k, part in enumerate(expr.parts):
            out.extend(((("c", k),) + p, x) for p, x in positions_of(part, name))
        return out
    if isinstance(expr, Power):
        inner = positions_of(expr.base, name)
        return [((("p", c),) + p, x) for c in range(expr.exponent) for p, x in inner]
    if isinstance(expr, Inverse):
        inner = positions_of(expr.child, name)
        return [((("i",),) + p, x.inverse()) for p, x in reversed(inner)]
    if isinstance(expr, OmegaProd):
        out = []
        for v in _solved_blocks(expr.block, expr.start, [name]):
            for j, x in enumerate(expr.block.instantiate(v)):
                if x.name == name:
                    out.append(((("o", v), ("b", j)), x))
        return out
    if isinstance(expr, LimitRec):
        hits = _solved_blocks(expr.head, expr.start, [name])
        if not hits:
            return []
        top = hits[-1]

        def rec(node):
            v = node.start
            if v > top:
                return []
            own = [((("h",), ("b", j)), x)
                   for j, x in enumerate(node.head.instantiate(v))
                   if x.name == name]
            deeper = rec(node.unit())
            for c in range(node.exponent(v)):
                own.extend(((("r", c),) + p, x) for p, x in deeper)
            return own

        return rec(expr)
    raise TypeError(f"not a word expression: {expr!r}")


def iter_letter_paths(expr: WordExpr):
    """Lazy in-order iteration of (path, letter).

    Raises ValueError on words with no first letter (reverse-ordered atoms).
    """
    if isinstance(expr, _Empty):
        return
    if isinstance(expr, Lit):
        for j, x in enumerate(expr.letters):
            yield (("w", j),), x
    elif isinstance(expr, Concat):
        for k, part in enumerate(expr.parts):
            for p, x in iter_letter_paths(part):
                yield (("c", k),) + p, x
    elif isinstance(expr, Power):
        for c in range(expr.exponent):
            for p, x in iter_letter_paths(expr.base):
                yield (("p", c),) + p, x
    elif isinstance(expr, Inverse):
        for p, x in iter_letter_paths_reversed(expr.child):
            yield (("i",),) + p, x.inverse()
    elif isinstance(expr, OmegaProd):
        v = expr.start
        while True:
            for j, x in enumerate(expr.block.instantiate(v)):
                yield (("o", v), ("b", j)), x
            v += 1
    elif isinstance(expr, LimitRec):
        v = expr.start
        for j, x in enumerate(expr.head.instantiate(v)):
            yield (("h",), ("b", j)), x
        # the first copy is itself infinite, so lazy forward iteration
        # never leaves it; later copies are unreachable by any finite prefix
        for p, x in iter_letter_paths(expr.unit()):
            yield (("r", 0),) + p, x
    else:
        raise TypeError(f"not a word expression: {expr!r}")


def iter_letter_paths_reversed(expr: WordExpr):
    """Lazy reverse-order iteration of (path, letter).

    Raises ValueError on words with no last letter (forward infinite atoms).
    """
    if isinstance(expr, _Empty):
        return
    if isinstance(expr, Lit):
        for j in range(len(expr.letters) - 1, -1, -1):
            yield (("w", j),), expr.letters[j]
    elif isinstance(expr, Concat):
        for k in range(len(expr.parts) - 1, -1, -1):
            for p, x in iter_letter_paths_reversed(expr.parts[k]):
                yield (("c", k),) + p, x
    elif isinstance(expr, Power):
        for c in range(expr.exponent - 1, -1, -1):
            for p, x in iter_letter_paths_reversed(expr.base):
                yield (("p", c),) + p, x
    elif isinstance(expr, Inverse):
        for p, x in iter_letter_paths(expr.child):
            yield (("i",),) + p, x.inverse()
    elif isinstance(expr, (OmegaProd, LimitRec)):
        raise ValueError("word has no last letter")
    else:
        raise TypeError(f"not a word expression: {expr!r}")


def prefix_paths(expr: WordExpr, count: int) -> list[tuple[Path, Letter]]:
    return list(islice(iter_letter_paths(expr), count))


def suffix_paths(expr: WordExpr, count: int) -> list[tuple[Path, Letter]]:
    """The last ``count`` (path, letter) pairs, in word order."""
    taken = list(islice(iter_letter_paths_reversed(expr), count))
    return taken[::-1]


# ---------------------------------------------------------------------------
# Splitting


def split_at_cuts(expr: WordExpr, cuts: list[Cut]) -> list[WordExpr]:
    """Split a word expression at finitely many cuts into len(cuts)+1 parts.

    Cuts must be sorted in word order (checked); equal cuts yield empty
    middle parts.
    """
    from .words import atoms

    finite = []
    lead_empty = 0
    tail_empty = 0
    for c in cuts:
        if c.kind == -1:
            if finite:
                raise InvalidLocator("cuts not sorted: -inf after a finite cut")
            lead_empty += 1
        elif c.kind == 1:
            tail_empty += 1
        else:
            if tail_empty:
                raise InvalidLocator("cuts not sorted: finite cut after +inf")
            finite.append(c)
    for a, b in zip(finite, finite[1:]):
        if compare_cuts(expr, a, b) > 0:
            raise InvalidLocator("cuts not sorted")
    for c in finite:
        if c.kind == 0:
            letter_at(expr, c.path)  # validates resolution

    parts_list = list(atoms(expr))
    # bucket cuts by atom slot, preserving their global order
    gap_counts: dict[int, int] = {}
    letter_groups: dict[int, list] = {}
    for c in finite:
        slot, atom, inner = _atom_slot(expr, c)
        if c.kind == 3:
            gap_counts[c.path[0]] = gap_counts.get(c.path[0], 0) + 1
        else:
            letter_groups.setdefault(slot // 2, []).append((tuple(inner), c.after))

    segments: list[WordExpr] = []
    current: list[WordExpr] = []
    for k in range(len(parts_list) + 1):
        for _ in range(gap_counts.get(k, 0)):
            segments.append(concat(*current))
            current = []
        if k < len(parts_list):
            inner = letter_groups.get(k)
            if inner:
                pieces = _split(parts_list[k], inner)
                current.append(pieces[0])
                for piece in pieces[1:]:
                    segments.append(concat(*current))
                    current = [piece]
            else:
                current.append(parts_list[k])
    segments.append(concat(*current))
    return [EMPTY] * lead_empty + segments + [EMPTY] * tail_empty


def _group_by_first(cuts):
    groups: dict = {}
    order = []
    for path, after in cuts:
        key = path[0]
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append((path[1:], after))
    return groups, order


def _assemble(children_with_cuts):
    """children_with_cuts: iterable of (piece_lists) where each element is a
    list of expression pieces [p0, p1, ..., pk] meaning k cuts inside it."""
    segments = []
    current = []
    for pieces in children_with_cuts:
        current.append(pieces[0])
        for piece in pieces[1:]:
            segments.append(concat(*current))
            current = [piece]
    segments.append(concat(*current))
    return segments


def _split(expr, cuts):
    if not cuts:
        return [expr]
    if isinstance(expr, Lit):
        idxs = []
        for path, after in cuts:
            assert path[0][0] == "w"
            idxs.append(path[0][1] + (1 if after else 0))
        pieces = []
        prev = 0
        for j in idxs:
            pieces.append(lit(expr.letters[prev:j]))
            prev = j
        pieces.append(lit(expr.letters[prev:]))
        return pieces

    if isinstance(expr, Concat):
        groups, _ = _group_by_first(cuts)
        rows = []
        for k, part in enumerate(expr.parts):
            key = ("c", k)
            if key in groups:
                rows.append(_split(part, groups[key]))
            else:
                rows.append([part])
        return _assemble(rows)

    if isinstance(expr, Power):
        groups, _ = _group_by_first(cuts)
        rows = []
        prev = 0
        for c in sorted(k[1] for k in groups):
            if c > prev:
                rows.append([power(expr.base, c - prev)])
            rows.append(_split(expr.base, groups[("p", c)]))
            prev = c + 1
        if expr.exponent > prev:
            rows.append([power(expr.base, expr.exponent - prev)])
        return _assemble(rows)

    if isinstance(expr, Inverse):
        inner = [(path[1:], not after) for path, after in reversed(cuts)]
        pieces = _split(expr.child, inner)
        return [inverse(p) for p in reversed(pieces)]

    if isinstance(expr, OmegaProd):
        L = len(expr.block)
        offs = []
        for path, after in cuts:
            assert path[0][0] == "o" and path[1][0] == "b"
            v, j = path[0][1], path[1][1]
            offs.append((v - expr.start) * L + j + (1 if after else 0))

        def letters_range(a, b):
            out = []
            for off in range(a, b):
                v, j = divmod(off, L)
                out.append(expr.block.instantiate(expr.start + v)[j])
            return tuple(out)

        pieces = []
        prev = 0
        for off in offs:
            pieces.append(lit(letters_range(prev, off)))
            prev = off
        v0, r = divmod(prev, L)
        tail_start = expr.start + v0
        if r == 0:
            tail = omega_prod(expr.var, tail_start, expr.block)
        else:
            rest = expr.block.instantiate(tail_start)[r:]
            tail = concat(lit(rest), omega_prod(expr.var, tail_start + 1, expr.block))
        pieces.append(tail)
        return pieces

    if isinstance(expr, LimitRec):
        head_letters = expr.head.instantiate(expr.start)
        e = expr.exponent(expr.start)
        unit = expr.unit()
        head_cuts = []
        copy_groups: dict = {}
        for path, after in cuts:
            if path[0][0] == "h":
                assert path[1][0] == "b"
                head_cuts.append(path[1][1] + (1 if after else 0))
            else:
                assert path[0][0] == "r"
                copy_groups.setdefault(path[0][1], []).append((path[1:], after))
        rows = []
        hpieces = []
        prev = 0
        for j in head_cuts:
            hpieces.append(lit(head_letters[prev:j]))
            prev = j
        hpieces.append(lit(head_letters[prev:]))
        rows.append(hpieces)
        prevc = 0
        for c in sorted(copy_groups):
            if c > prevc:
                rows.append([power(unit, c - prevc)])
            rows.append(_split(unit, copy_groups[c]))
            prevc = c + 1
        if e > prevc:
            rows.append([power(unit, e - prevc)])
        return _assemble(rows)

    raise InvalidLocator(f"cannot split {expr!r}")


def split3(expr: WordExpr, loc: SubwordLocator):
    """(before, subword, after) at a locator."""
    if compare_cuts(expr, loc.lo, loc.hi) > 0:
        raise InvalidLocator("locator cuts out of order")
    parts = split_at_cuts(expr, [loc.lo, loc.hi])
    return parts[0], parts[1], parts[2]


def locate(expr: WordExpr, loc: SubwordLocator) -> WordExpr:
    """The subword denoted by a locator, as a word expression.

    Subwords of restricted words are restricted.
    """
    return split3(expr, loc)[1]


def delete_range(expr: WordExpr, loc: SubwordLocator) -> WordExpr:
    before, _, after = split3(expr, loc)
    return concat(before, after)
