"""Arch systems on finite words, reduced forms, and the group product.

An arch system is a non-crossing, nesting-closed partial matching of mutually
inverse letters over a finite word.  Deleting the endpoints of a maximal
system yields the reduced form, which for restricted words is unique and, on
finite words, coincides with free-group reduction.

The second half of the module is the concatenation normalizer: factors are
cut into pieces so that repeatedly deleting adjacent mutually inverse pieces
reaches the reduced form of the concatenation.  Every cancellation happens at
a factor boundary, so the whole computation reduces to ``boundary_cancel``
between adjacent atoms.  If each residue atom is internally reduced and every
adjacent residue boundary admits no cancellation, the residue concatenation
is reduced: a hypothetical arch on it with a minimal piece span would either
sit inside one piece (excluded) or trap a whole intermediate piece with no
partners (excluded), so it would have to realize a boundary cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (ArchNotInSystem, InvalidSystem, LimitExceeded,
                     UnificationInconclusive)
from .unify import CANCEL_BUDGET, POWER_EXPAND_LIMIT, boundary_cancel
from .words import (DEFAULT_BOUND, EMPTY, Concat, FiniteWord, Inverse, Letter,
                    LimitRec, Lit, OmegaProd, Power, TriVerdict, WordExpr,
                    _Empty, atoms, concat, free_reduce, is_finite_expr, lit,
                    no, require_restricted, unknown, yes)

#: Longest word accepted by the exhaustive arch-system enumerator.
MAX_ENUM_LENGTH = 20

#: Default cap on the number of returned maximal systems.
DEFAULT_SYSTEM_CAP = 10_000


@dataclass(frozen=True, order=True)
class Arch:
    """One arch: initial and terminal letter positions (0-based)."""

    start: int
    end: int


@dataclass(frozen=True)
class ArchSystem:
    host: FiniteWord
    arches: frozenset

    def sorted_arches(self) -> tuple[Arch, ...]:
        return tuple(sorted(self.arches))


def validate_arch_system(system: ArchSystem) -> list[str]:
    """All rule violations of an arch system; empty means valid.

    Rules: arches pair a letter with one of its inverses, endpoints are
    pairwise distinct, arches do not cross, and every letter strictly inside
    an arch is an endpoint of an arch lying strictly inside it.
    """
    w = system.host
    n = len(w)
    problems = []
    endpoints = {}
    arches = system.sorted_arches()
    for a in arches:
        if not (0 <= a.start < a.end < n):
            problems.append(f"arch {a} out of range")
            continue
        if w[a.start] != w[a.end].inverse():
            problems.append(f"arch {a} does not join mutually inverse letters")
        for p in (a.start, a.end):
            if p in endpoints:
                problems.append(f"position {p} used by two arches")
            endpoints[p] = a
    for i, a in enumerate(arches):
        for b in arches[i + 1:]:
            if a.start < b.start < a.end < b.end:
                problems.append(f"arches {a} and {b} cross")
    for a in arches:
        for p in range(a.start + 1, a.end):
            b = endpoints.get(p)
            if b is None:
                problems.append(f"letter {p} inside arch {a} is unmatched")
            elif not (a.start < b.start and b.end < a.end):
                # crossing is reported separately
                pass
    return problems


def _require_valid(system: ArchSystem) -> None:
    problems = validate_arch_system(system)
    if problems:
        raise InvalidSystem("; ".join(problems))


@dataclass(frozen=True)
class EnumerationResult:
    systems: tuple[ArchSystem, ...]
    truncated: bool


def _residue_positions(n: int, arches) -> list[int]:
    used = set()
    for a in arches:
        used.add(a.start)
        used.add(a.end)
    return [i for i in range(n) if i not in used]


def _is_maximal(w: FiniteWord, arches) -> bool:
    res = _residue_positions(len(w), arches)
    for i, j in zip(res, res[1:]):
        if w[i] == w[j].inverse():
            return False
    return True


def enumerate_maximal_arch_systems(w: FiniteWord, cap: int = DEFAULT_SYSTEM_CAP) -> EnumerationResult:
    """All inclusion-maximal arch systems of a finite word.

    A system is maximal exactly when its residue contains no adjacent
    mutually inverse pair: such a pair could always be added as a new arch
    without breaking the rules.  Deterministically ordered; truncated at
    ``cap`` with a flag.
    """
    n = len(w)
    if n > MAX_ENUM_LENGTH:
        raise LimitExceeded(f"word of length {n} exceeds limit {MAX_ENUM_LENGTH}")
    out: list[tuple[Arch, ...]] = []
    truncated = False
    stack: list[int] = []
    current: list[Arch] = []

    def rec(i: int):
        nonlocal truncated
        if truncated:
            return
        if i == n:
            if not stack and _is_maximal(w, current):
                if len(out) >= cap:
                    truncated = True
                    return
                out.append(tuple(sorted(current)))
            return
        if not stack:
            rec(i + 1)  # leave letter unmatched (allowed only at depth zero)
        else:
            j = stack[-1]
            if w[j] == w[i].inverse():
                stack.pop()
                current.append(Arch(j, i))
                rec(i + 1)
                current.pop()
                stack.append(j)
        stack.append(i)  # open an arch at i
        rec(i + 1)
        stack.pop()

    rec(0)
    systems = tuple(ArchSystem(w, frozenset(a)) for a in sorted(set(out)))
    return EnumerationResult(systems, truncated)


def reduced_form_via(system: ArchSystem) -> FiniteWord:
    """Host word with all arch endpoints deleted."""
    _require_valid(system)
    keep = set(_residue_positions(len(system.host), system.arches))
    return tuple(x for i, x in enumerate(system.host) if i in keep)


def is_complete(system: ArchSystem) -> bool:
    _require_valid(system)
    return not _residue_positions(len(system.host), system.arches)


def parallel_arches(system: ArchSystem, a: Arch, b: Arch) -> bool:
    """Whether two arches are parallel: nested, with every arch starting
    between their initial points ending between their terminal points."""
    if a not in system.arches or b not in system.arches:
        raise ArchNotInSystem(f"{a} or {b} not in system")
    if a.start > b.start:
        a, b = b, a
    if not (a.start < b.start < b.end < a.end):
        return False
    for c in system.arches:
        if a.start < c.start < b.start and not (b.end < c.end < a.end):
            return False
    return True


# ---------------------------------------------------------------------------
# Concatenation normalization


@dataclass(frozen=True)
class Decomposition:
    """Result of the cancellation process on a factor list.

    ``factors[i]`` lists the pieces the i-th input factor was cut into, in
    order.  ``script`` lists the deletions of adjacent mutually inverse piece
    pairs, each piece named (factor index, piece index), in deletion order.
    ``residue`` holds the surviving pieces; their concatenation is the
    reduced form of the input concatenation.
    """

    factors: tuple[tuple[WordExpr, ...], ...]
    script: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    residue: tuple[WordExpr, ...]
    residue_refs: tuple[tuple[int, int], ...]

    def reduced_word(self) -> WordExpr:
        return concat(*self.residue)


def _finite_letters(w: WordExpr) -> FiniteWord:
    from .words import as_finite

    return as_finite(w)


def _expand_atoms(w: WordExpr) -> list[WordExpr]:
    """Flat atoms with symbolic powers expanded into copies."""
    out = []
    for a in atoms(w):
        if isinstance(a, Power):
            if is_finite_expr(a):
                out.append(Lit(_finite_letters(a)))
                continue
            if a.exponent > POWER_EXPAND_LIMIT:
                raise UnificationInconclusive(
                    POWER_EXPAND_LIMIT, "symbolic power too large to expand")
            inner = _expand_atoms(a.base)
            for _ in range(a.exponent):
                out.extend(inner)
        else:
            out.append(a)
    return out


def _template_pair_cancel_at(e1, e2, shift: int, start: int):
    """First v >= start at which entry e1 at block v and entry e2 at block
    v+shift are mutually inverse; None if never."""
    f1, ix1, s1 = e1
    f2, ix2, s2 = e2
    if f1 != f2 or s1 != -s2:
        return None
    c1, b1 = ix1.coeff, ix1.offset
    c2 = ix2.coeff
    b2 = ix2.coeff * shift + ix2.offset
    if c1 == c2:
        return start if b1 == b2 else None
    q, r = divmod(b2 - b1, c1 - c2)
    if r == 0 and q >= start:
        return q
    return None


def atom_internally_reduced(atom: WordExpr):
    """(True, None) or (False, witness) for one atom; exact on this fragment."""
    if isinstance(atom, Lit):
        for i in range(len(atom.letters) - 1):
            if atom.letters[i] == atom.letters[i + 1].inverse():
                return False, ("adjacent", i, i + 1)
        return True, None
    if isinstance(atom, Inverse):
        return atom_internally_reduced(atom.child)
    if isinstance(atom, Power):
        for a in atoms(atom.base) or (atom.base,):
            ok, wit = atom_internally_reduced(a)
            if not ok:
                return ok, wit
        last = atoms(atom.base)[-1] if isinstance(atom.base, Concat) else atom.base
        first = atoms(atom.base)[0] if isinstance(atom.base, Concat) else atom.base
        if boundary_cancel(last, first)[0] != "none":
            return False, ("power-boundary",)
        return True, None
    if isinstance(atom, OmegaProd):
        es = atom.block.entries
        for j in range(len(es) - 1):
            v = _template_pair_cancel_at(es[j], es[j + 1], 0, atom.start)
            if v is not None:
                return False, ("block", v, j)
        v = _template_pair_cancel_at(es[-1], es[0], 1, atom.start)
        if v is not None:
            return False, ("block-boundary", v)
        return True, None
    if isinstance(atom, LimitRec):
        es = atom.head.entries
        for j in range(len(es) - 1):
            v = _template_pair_cancel_at(es[j], es[j + 1], 0, atom.start)
            if v is not None:
                return False, ("head", v, j)
        v = _template_pair_cancel_at(es[-1], es[0], 1, atom.start)
        if v is not None:
            return False, ("head-boundary", v)
        return True, None
    raise TypeError(f"not an atom: {atom!r}")


def normalize_concatenation(factors, budget: int = CANCEL_BUDGET) -> Decomposition:
    """Cut reduced factors into pieces and replay adjacent-inverse deletion.

    Each factor must itself be reduced (finite factors are checked by a free
    reduction fixpoint, symbolic atoms by exact template analysis).  The
    surviving pieces concatenate to the reduced form of the concatenation of
    the factors.  Raises UnificationInconclusive when a boundary comparison
    cannot be certified within the fragment.
    """
    records: dict[int, dict] = {}
    factor_lists: list[list[int]] = []
    counter = 0

    def new_piece(expr, fi):
        nonlocal counter
        counter += 1
        records[counter] = {"expr": expr, "factor": fi}
        return counter

    order_queue: list[int] = []
    for fi, f in enumerate(factors):
        require_restricted(f)
        ids = []
        if isinstance(f, Lit) or (is_finite_expr(f) and not isinstance(f, _Empty)):
            letters = _finite_letters(f)
            if free_reduce(letters) != letters:
                raise ValueError(f"factor {fi} is not reduced")
            if letters:
                ids.append(new_piece(Lit(letters), fi))
        elif isinstance(f, _Empty):
            pass
        else:
            for atom in _expand_atoms(f):
                ok, wit = atom_internally_reduced(atom)
                if not ok:
                    raise ValueError(f"factor {fi} is not reduced: {wit}")
                ids.append(new_piece(atom, fi))
        factor_lists.append(ids)
        order_queue.extend(ids)

    def split_piece(pid: int, first_expr, second_expr):
        fi = records[pid]["factor"]
        lst = factor_lists[fi]
        k = lst.index(pid)
        id1 = new_piece(first_expr, fi)
        id2 = new_piece(second_expr, fi)
        lst[k:k + 1] = [id1, id2]
        del records[pid]["expr"]
        records[pid]["replaced"] = (id1, id2)
        return id1, id2

    stack: list[int] = []
    script: list[tuple[int, int]] = []
    from collections import deque

    queue = deque(order_queue)
    while queue:
        cur = queue.popleft()
        while cur is not None:
            if not stack:
                stack.append(cur)
                break
            top = stack[-1]
            res = boundary_cancel(records[top]["expr"], records[cur]["expr"], budget)
            kind = res[0]
            if kind == "none":
                stack.append(cur)
                break
            if kind == "whole":
                script.append((top, cur))
                stack.pop()
                cur = None
                break
            _, s_keep, s_cancel, f_cancel, f_keep = res
            if isinstance(s_keep, _Empty):
                left_cancel = stack.pop()
            else:
                keep_id, cancel_id = split_piece(top, s_keep, s_cancel)
                stack[-1] = keep_id
                left_cancel = cancel_id
            if isinstance(f_keep, _Empty):
                right_cancel = cur
                cur = None
            else:
                cancel_id, keep_id = split_piece(cur, f_cancel, f_keep)
                right_cancel = cancel_id
                cur = keep_id
            script.append((left_cancel, right_cancel))
            if cur is not None and not isinstance(s_keep, _Empty):
                # a partial cancellation leaves a reduced boundary
                stack.append(cur)
                break

    # resolve piece ids to (factor, index) references
    ref_of: dict[int, tuple[int, int]] = {}
    factor_pieces = []
    for fi, lst in enumerate(factor_lists):
        exprs = []
        for k, pid in enumerate(lst):
            ref_of[pid] = (fi, k)
            exprs.append(records[pid]["expr"])
        factor_pieces.append(tuple(exprs))
    return Decomposition(
        factors=tuple(factor_pieces),
        script=tuple((ref_of[a], ref_of[b]) for a, b in script),
        residue=tuple(records[pid]["expr"] for pid in stack),
        residue_refs=tuple(ref_of[pid] for pid in stack),
    )


def replay_decomposition(dec: Decomposition) -> bool:
    """Check that deleting the scripted pairs, in order, is always an
    adjacent-inverse deletion and ends exactly in the residue."""
    from .unify import word_equal
    from .words import inverse

    order = [(fi, k) for fi, pieces in enumerate(dec.factors)
             for k in range(len(pieces))]
    pos = {ref: i for i, ref in enumerate(order)}
    alive = [True] * len(order)

    def piece(ref):
        return dec.factors[ref[0]][ref[1]]

    for left, right in dec.script:
        i, j = pos[left], pos[right]
        if not (alive[i] and alive[j]) or i >= j:
            return False
        if any(alive[k] for k in range(i + 1, j)):
            return False
        v = word_equal(piece(right), inverse(piece(left)))
        if not v.is_yes:
            return False
        alive[i] = alive[j] = False
    surviving = [order[i] for i in range(len(order)) if alive[i]]
    return tuple(surviving) == dec.residue_refs


def group_product(u: WordExpr, v: WordExpr, budget: int = CANCEL_BUDGET) -> WordExpr:
    """The product of two restricted reduced words: the reduced form of their
    concatenation."""
    return normalize_concatenation([u, v], budget).reduced_word()


def reduced_form(w: WordExpr, budget: int = CANCEL_BUDGET) -> WordExpr:
    """Reduced form of a restricted word expression.

    Finite expressions reduce freely.  Symbolic expressions must have
    internally reduced atoms (exactly checkable); cancellation across atom
    boundaries is then replayed.
    """
    require_restricted(w)
    if is_finite_expr(w):
        return lit(free_reduce(_finite_letters(w)))
    pre = []
    for atom in _expand_atoms(w):
        if isinstance(atom, Lit):
            reduced = free_reduce(atom.letters)
            if reduced:
                pre.append(Lit(reduced))
            continue
        ok, wit = atom_internally_reduced(atom)
        if not ok:
            raise UnificationInconclusive(
                DEFAULT_BOUND, f"cannot symbolically reduce inside atom: {wit}")
        pre.append(atom)
    return normalize_concatenation(pre, budget).reduced_word()


def is_reduced(w: WordExpr, bound: int = DEFAULT_BOUND) -> TriVerdict:
    """Whether a restricted word is reduced (admits no nonempty arch system).

    Exact on finite words: reducibility is equivalent to an adjacent mutually
    inverse pair (an innermost arch).  On symbolic words: every atom is
    checked by exact template analysis and every atom boundary by the
    cancellation engine; an inconclusive boundary yields Unknown.
    """
    require_restricted(w)
    if is_finite_expr(w):
        letters = _finite_letters(w)
        for i in range(len(letters) - 1):
            if letters[i] == letters[i + 1].inverse():
                return no(Arch(i, i + 1))
        return yes()
    try:
        parts = _expand_atoms(w)
    except UnificationInconclusive as exc:
        return unknown(exc.bound)
    for atom in parts:
        ok, wit = atom_internally_reduced(atom)
        if not ok:
            return no(("atom", wit))
    for i in range(len(parts) - 1):
        try:
            res = boundary_cancel(parts[i], parts[i + 1])
        except UnificationInconclusive as exc:
            return unknown(exc.bound)
        if res[0] != "none":
            return no(("boundary", i))
    return yes()
