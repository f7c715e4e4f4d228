"""Template unification, boundary cancellation and literal word equality.

Words built from affine-indexed templates have letter sequences that are
eventually periodic in family and sign, with indices affine in the block
variable.  This makes three questions exactly solvable:

* when do two infinite product tails coincide (shift matching with block
  refinement and phase rotation);
* how far do two such letter sequences agree before first diverging;
* whether two recursive limit words coincide from some depth on (their
  exponent and head templates must align as affine functions).

On top of these, ``boundary_cancel`` computes the maximal cancellation across
the boundary of two adjacent internally-reduced atoms, and ``word_equal``
decides literal equality of restricted words: a structural peeling alignment
certifies Yes, letter projections onto singletons and pairs certify No, and
anything else is Unknown up to a stated index bound.  Soundness is preferred
over completeness throughout; inconclusive template comparisons raise
``UnificationInconclusive`` rather than guessing.
"""

from __future__ import annotations

from collections import deque
from math import lcm

from .errors import UnificationInconclusive
from .positions import (Cut, iter_letter_paths, iter_letter_paths_reversed,
                        split_at_cuts)
from .words import (DEFAULT_BOUND, EMPTY, BlockTemplate, Concat, Inverse,
                    LimitRec, Lit, OmegaProd, Power, TriVerdict, WordExpr,
                    _Empty, atoms, inverse, mentioned_names, no, project,
                    require_restricted, unknown, yes)

#: Budget for letterwise peeling across boundaries whose agreement length has
#: no closed form (recursive limit atoms).
CANCEL_BUDGET = 4096

#: Budget (in peel/unroll operations) for the structural alignment.
ALIGN_BUDGET = 512

#: Guard for expanding symbolic powers into copies.
POWER_EXPAND_LIMIT = 4096


def has_first_letter(atom: WordExpr) -> bool:
    """Whether the atom's word has a least position."""
    if isinstance(atom, (Lit, OmegaProd, LimitRec)):
        return True
    if isinstance(atom, Inverse):
        return False
    if isinstance(atom, Power):
        return has_first_letter(atom.base if not isinstance(atom.base, Concat)
                                else atoms(atom.base)[0])
    raise TypeError(f"not an atom: {atom!r}")


def has_last_letter(atom: WordExpr) -> bool:
    if isinstance(atom, Lit):
        return True
    if isinstance(atom, (OmegaProd, LimitRec)):
        return False
    if isinstance(atom, Inverse):
        return True
    if isinstance(atom, Power):
        return has_last_letter(atom.base if not isinstance(atom.base, Concat)
                               else atoms(atom.base)[-1])
    raise TypeError(f"not an atom: {atom!r}")


# ---------------------------------------------------------------------------
# Infinite product tails


def _seq_entry(t: BlockTemplate, s: int, L: int, o: int, k0: int):
    """The letters at offsets o + k0 + L*m of the product from start s, as a
    function of m >= 0: (family, sign, slope, value at m=0)."""
    L_own = len(t.entries)
    n0 = o + k0
    fam, ix, sign = t.entries[n0 % L_own]
    v0 = s + n0 // L_own
    return fam, sign, ix.coeff * (L // L_own), ix(v0)


def unify_omega_tails(t1: BlockTemplate, s1: int, t2: BlockTemplate, s2: int):
    """Minimal letter offsets (o1, o2) such that the tail of the first product
    from o1 equals the tail of the second from o2, or None.

    Offsets (0, 0) mean the whole products are equal.  The two tails of a
    restricted word can only coincide from a unique earliest point, so the
    candidate set is a chain and the minimum is well defined.
    """
    L = lcm(len(t1.entries), len(t2.entries))
    candidates = []
    for r1 in range(L):
        for r2 in range(L):
            delta = None
            ok = True
            for k0 in range(L):
                f1, g1, sl1, v1 = _seq_entry(t1, s1, L, r1, k0)
                f2, g2, sl2, v2 = _seq_entry(t2, s2, L, r2, k0)
                if f1 != f2 or g1 != g2 or sl1 != sl2:
                    ok = False
                    break
                if sl1 == 0:
                    if v1 != v2:
                        ok = False
                        break
                else:
                    q, r = divmod(v2 - v1, sl1)
                    if r != 0 or (delta is not None and delta != q):
                        ok = False
                        break
                    delta = q
            if not ok:
                continue
            d = delta or 0
            o1 = r1 + L * max(d, 0)
            o2 = r2 + L * max(-d, 0)
            candidates.append((o1, o2))
    if not candidates:
        return None
    return min(candidates)


def omega_words_equal(a: OmegaProd, b: OmegaProd) -> bool:
    return unify_omega_tails(a.block, a.start, b.block, b.start) == (0, 0)


def omega_first_difference(a: OmegaProd, b: OmegaProd):
    """Index of the first letter where the two product words differ, or None
    if they are the same word."""
    L = lcm(len(a.block.entries), len(b.block.entries))
    first = None
    all_agree = True
    for k0 in range(L):
        f1, g1, sl1, v1 = _seq_entry(a.block, a.start, L, 0, k0)
        f2, g2, sl2, v2 = _seq_entry(b.block, b.start, L, 0, k0)
        if f1 != f2 or g1 != g2:
            diff_m = 0
        elif sl1 == sl2:
            if v1 == v2:
                continue
            diff_m = 0
        else:
            q, r = divmod(v2 - v1, sl1 - sl2)
            # values agree only at m = q (if integral); first difference is 0
            # unless they happen to agree there
            diff_m = 1 if (r == 0 and q == 0) else 0
        all_agree = False
        cand = k0 + L * diff_m
        first = cand if first is None else min(first, cand)
    if all_agree:
        return None
    return first


# ---------------------------------------------------------------------------
# Recursive limit words


def limitrec_align(d1: LimitRec, d2: LimitRec):
    """Minimal (m1, m2) with the two recursions identical from those depths on
    (heads and exponent rules equal as affine functions), or None.

    Raises UnificationInconclusive when the exponent rules align but the heads
    have different shapes, which this fragment cannot compare.
    """
    e1, e2 = d1.exponent, d2.exponent
    if e1.coeff != e2.coeff:
        return None
    constraints = [(e1.coeff, e2.offset - e1.offset)]
    heads_comparable = len(d1.head) == len(d2.head)
    if heads_comparable:
        for (f1, ix1, g1), (f2, ix2, g2) in zip(d1.head.entries, d2.head.entries):
            if f1 != f2 or g1 != g2 or ix1.coeff != ix2.coeff:
                return None
            constraints.append((ix1.coeff, ix2.offset - ix1.offset))
    delta = None
    for c, rhs in constraints:
        if c == 0:
            if rhs != 0:
                return None
        else:
            q, r = divmod(rhs, c)
            if r != 0:
                return None
            if delta is not None and delta != q:
                return None
            delta = q
    if not heads_comparable:
        raise UnificationInconclusive(
            DEFAULT_BOUND, "recursive atoms with different head shapes")
    if delta is None:
        return None
    m1 = max(d1.start, d2.start + delta)
    return (m1, m1 - delta)


def limitrec_whole_equal(d1: LimitRec, d2: LimitRec) -> bool:
    try:
        mm = limitrec_align(d1, d2)
    except UnificationInconclusive:
        return False
    return mm == (d1.start, d2.start)


# ---------------------------------------------------------------------------
# Common suffixes of forward-infinite words


def _omega_cut(p: OmegaProd, offset: int) -> Cut:
    L = len(p.block.entries)
    v, j = divmod(offset, L)
    return Cut.before((("o", p.start + v), ("b", j)))


def _limit_descend_steps(d: LimitRec, depth: int):
    steps = []
    v = d.start
    while v < depth:
        steps.append(("r", d.exponent(v) - 1))
        v += 1
    return steps


def _limit_unit_cut(d: LimitRec, depth: int) -> Cut:
    """Cut before the final depth-``depth`` copy of the recursion."""
    steps = _limit_descend_steps(d, depth)
    return Cut.before(tuple(steps) + (("h",), ("b", 0)))


def _limit_copy_cut(d: LimitRec, depth: int, copy: int) -> Cut:
    steps = _limit_descend_steps(d, depth - 1)
    return Cut.before(tuple(steps) + (("r", copy), ("h",), ("b", 0)))


def _limit_head_cut(d: LimitRec, depth: int, j: int) -> Cut:
    steps = _limit_descend_steps(d, depth - 1)
    return Cut.before(tuple(steps) + (("h",), ("b", j)))


def common_suffix_cuts(s_word: WordExpr, g_word: WordExpr):
    """Maximal common suffix of two forward-infinite atom words.

    Returns ('none',), ('whole_both',), ('whole_s', cut_in_g),
    ('whole_g', cut_in_s) or ('split', cut_in_s, cut_in_g), where each cut
    marks the first letter of the common suffix in that word.
    """
    if isinstance(s_word, OmegaProd) and isinstance(g_word, OmegaProd):
        r = unify_omega_tails(s_word.block, s_word.start, g_word.block, g_word.start)
        if r is None:
            return ("none",)
        o1, o2 = r
        if o1 == 0 and o2 == 0:
            return ("whole_both",)
        if o1 == 0:
            return ("whole_s", _omega_cut(g_word, o2))
        if o2 == 0:
            return ("whole_g", _omega_cut(s_word, o1))
        return ("split", _omega_cut(s_word, o1), _omega_cut(g_word, o2))

    if isinstance(s_word, LimitRec) and isinstance(g_word, LimitRec):
        mm = limitrec_align(s_word, g_word)  # may raise
        if mm is None:
            return ("none",)
        m1, m2 = mm
        if m1 == s_word.start and m2 == g_word.start:
            return ("whole_both",)
        if m1 == s_word.start:
            return ("whole_s", _limit_unit_cut(g_word, m2))
        if m2 == g_word.start:
            return ("whole_g", _limit_unit_cut(s_word, m1))
        ks = s_word.exponent(m1 - 1)
        kg = g_word.exponent(m2 - 1)
        if ks != kg:
            k = min(ks, kg)
            return ("split", _limit_copy_cut(s_word, m1, ks - k),
                    _limit_copy_cut(g_word, m2, kg - k))
        hs = s_word.head.instantiate(m1 - 1)
        hg = g_word.head.instantiate(m2 - 1)
        ln = 0
        while ln < len(hs) and hs[len(hs) - 1 - ln] == hg[len(hg) - 1 - ln]:
            ln += 1
        # full agreement of the level above would contradict minimality
        assert ln < len(hs)
        if ln == 0:
            return ("split", _limit_copy_cut(s_word, m1, 0),
                    _limit_copy_cut(g_word, m2, 0))
        return ("split", _limit_head_cut(s_word, m1, len(hs) - ln),
                _limit_head_cut(g_word, m2, len(hg) - ln))

    # an infinite product has order type of the naturals, a limit recursion a
    # strictly larger well-order; no common suffix is possible across kinds
    if isinstance(s_word, (OmegaProd, LimitRec)) and isinstance(g_word, (OmegaProd, LimitRec)):
        return ("none",)
    raise TypeError(f"not forward-infinite atoms: {s_word!r}, {g_word!r}")


# ---------------------------------------------------------------------------
# Boundary cancellation between adjacent reduced atoms


def _split2(expr, cut):
    parts = split_at_cuts(expr, [cut])
    return parts[0], parts[1]


def boundary_cancel(left: WordExpr, right: WordExpr, budget: int = CANCEL_BUDGET):
    """Maximal mutual cancellation across the boundary of two adjacent,
    internally reduced atoms.

    Returns one of
        ('none',)                                   boundary already reduced
        ('whole',)                                  the atoms are mutually inverse
        ('partial', s_keep, s_cut, f_cut, f_keep)   nonempty piece cancelled

    For a partial result, left == s_keep + s_cut, right == f_cut + f_keep,
    s_cut and f_cut are mutually inverse, and the boundary between s_keep and
    f_keep is reduced.  Raises UnificationInconclusive when the comparison
    leaves this fragment.
    """
    s_last = has_last_letter(left)
    f_first = has_first_letter(right)

    if s_last != f_first:
        # one side has a boundary letter, the other does not: any cancelling
        # piece would need a first (resp. last) letter that does not exist
        return ("none",)

    if not s_last:
        # forward-infinite against backward-infinite: only whole tails cancel
        g = right.child if isinstance(right, Inverse) else None
        if g is None:
            raise UnificationInconclusive(budget, "unnormalized boundary atom")
        res = common_suffix_cuts(left, g)
        if res[0] == "none":
            return ("none",)
        if res[0] == "whole_both":
            return ("whole",)
        if res[0] == "whole_s":
            g_cut = res[1]
            f_cut_pos = Cut((0), (("i",),) + tuple(g_cut.path), True)
            f_cancel, f_keep = _split2(right, f_cut_pos)
            return ("partial", EMPTY, left, f_cancel, f_keep)
        if res[0] == "whole_g":
            s_keep, s_cancel = _split2(left, res[1])
            return ("partial", s_keep, s_cancel, right, EMPTY)
        _, s_cut, g_cut = res
        s_keep, s_cancel = _split2(left, s_cut)
        f_cut_pos = Cut(0, (("i",),) + tuple(g_cut.path), True)
        f_cancel, f_keep = _split2(right, f_cut_pos)
        return ("partial", s_keep, s_cancel, f_cancel, f_keep)

    # both sides have boundary letters: cancellation is letter by letter
    exact_bound = None
    if isinstance(left, Lit):
        exact_bound = len(left.letters)
    if isinstance(right, Lit):
        b = len(right.letters)
        exact_bound = b if exact_bound is None else min(exact_bound, b)
    if exact_bound is None:
        lw = left.child if isinstance(left, Inverse) else None
        if isinstance(lw, OmegaProd) and isinstance(right, OmegaProd):
            if omega_words_equal(lw, right):
                return ("whole",)
            exact_bound = omega_first_difference(lw, right)
            assert exact_bound is not None
        elif isinstance(lw, LimitRec) and isinstance(right, LimitRec):
            if limitrec_whole_equal(lw, right):
                return ("whole",)
        # other infinite-infinite mixes fall through to the budget

    bound = exact_bound if exact_bound is not None else budget
    srev = iter_letter_paths_reversed(left)
    ffwd = iter_letter_paths(right)
    k = 0
    s_path = f_path = None
    while k < bound:
        try:
            sp, sx = next(srev)
        except StopIteration:
            break
        try:
            fp, fx = next(ffwd)
        except StopIteration:
            break
        if sx != fx.inverse():
            break
        s_path, f_path = sp, fp
        k += 1
    else:
        if exact_bound is None:
            raise UnificationInconclusive(
                budget, "boundary agreement exceeds the peeling budget")

    if k == 0:
        return ("none",)
    s_keep, s_cancel = _split2(left, Cut.before(s_path))
    f_cancel, f_keep = _split2(right, Cut(0, f_path, True))
    if isinstance(s_keep, _Empty) and isinstance(f_keep, _Empty):
        return ("whole",)
    return ("partial", s_keep, s_cancel, f_cancel, f_keep)


# ---------------------------------------------------------------------------
# Literal equality


def _push_atom_expansion(dq: deque, atom: WordExpr):
    """Replace a power head by one expanded copy plus the remainder."""
    from .words import power

    assert isinstance(atom, Power)
    rest = power(atom.base, atom.exponent - 1)
    for a in reversed(atoms(rest) if not isinstance(rest, Power) else (rest,)):
        dq.appendleft(a)
    for a in reversed(atoms(atom.base)):
        dq.appendleft(a)


def _first_letter(atom: WordExpr):
    for _, x in iter_letter_paths(atom):
        return x
    return None


def align_words(u: WordExpr, v: WordExpr, budget: int = ALIGN_BUDGET):
    """Structural peeling alignment.

    Returns ('eq', None), ('ne', witness_names | None) or (None, None) when
    the budget runs out or the comparison leaves the fragment.  'eq' and 'ne'
    results are definitive.
    """
    from .words import lit, power

    a = deque(atoms(u))
    b = deque(atoms(v))
    ops = budget
    while a and b:
        if ops <= 0:
            return (None, None)
        x, y = a[0], b[0]
        if x == y:
            a.popleft()
            b.popleft()
            continue
        if isinstance(x, Power) and isinstance(y, Power) and x.base == y.base:
            a.popleft()
            b.popleft()
            k = min(x.exponent, y.exponent)
            if x.exponent > k:
                a.appendleft(power(x.base, x.exponent - k))
            if y.exponent > k:
                b.appendleft(power(y.base, y.exponent - k))
            continue
        if isinstance(x, Power):
            if x.exponent > POWER_EXPAND_LIMIT:
                return (None, None)
            a.popleft()
            _push_atom_expansion(a, x)
            ops -= 1
            continue
        if isinstance(y, Power):
            if y.exponent > POWER_EXPAND_LIMIT:
                return (None, None)
            b.popleft()
            _push_atom_expansion(b, y)
            ops -= 1
            continue

        fx, fy = has_first_letter(x), has_first_letter(y)
        if fx != fy:
            return ("ne", None)

        if isinstance(x, Lit) and isinstance(y, Lit):
            k = 0
            n = min(len(x.letters), len(y.letters))
            while k < n and x.letters[k] == y.letters[k]:
                k += 1
            if k == 0:
                return ("ne", {x.letters[0].name, y.letters[0].name})
            a.popleft()
            b.popleft()
            if k < len(x.letters):
                a.appendleft(Lit(x.letters[k:]))
            if k < len(y.letters):
                b.appendleft(Lit(y.letters[k:]))
            continue

        if fx:
            # both words start with a letter
            lx, ly = _first_letter(x), _first_letter(y)
            if lx != ly:
                return ("ne", {lx.name, ly.name})
            if isinstance(x, OmegaProd) and isinstance(y, OmegaProd):
                if omega_words_equal(x, y):
                    a.popleft()
                    b.popleft()
                    continue
                # the leading natural-order segments differ
                return ("ne", None)
            if isinstance(x, LimitRec) and isinstance(y, LimitRec):
                if limitrec_whole_equal(x, y):
                    a.popleft()
                    b.popleft()
                    continue
                a.popleft()
                b.popleft()
                a.appendleft(power(x.unit(), x.exponent(x.start)))
                a.appendleft(lit(x.head.instantiate(x.start)))
                b.appendleft(power(y.unit(), y.exponent(y.start)))
                b.appendleft(lit(y.head.instantiate(y.start)))
                ops -= 1
                continue
            # peel the atom that hides its first letters behind a template
            for side, atom in ((a, x), (b, y)):
                if isinstance(atom, Lit):
                    continue
                side.popleft()
                if isinstance(atom, OmegaProd):
                    from .words import omega_prod

                    side.appendleft(omega_prod(atom.var, atom.start + 1, atom.block))
                    side.appendleft(lit(atom.block.instantiate(atom.start)))
                else:
                    side.appendleft(power(atom.unit(), atom.exponent(atom.start)))
                    side.appendleft(lit(atom.head.instantiate(atom.start)))
                ops -= 1
            continue

        # both words start at minus infinity
        if isinstance(x, Inverse) and isinstance(y, Inverse):
            cx, cy = x.child, y.child
            if isinstance(cx, OmegaProd) and isinstance(cy, OmegaProd):
                if omega_words_equal(cx, cy):
                    a.popleft()
                    b.popleft()
                    continue
                return ("ne", None)
            if isinstance(cx, LimitRec) and isinstance(cy, LimitRec):
                if limitrec_whole_equal(cx, cy):
                    a.popleft()
                    b.popleft()
                    continue
                a.popleft()
                b.popleft()
                a.appendleft(lit(tuple(reversed([t.inverse() for t in cx.head.instantiate(cx.start)]))))
                a.appendleft(power(inverse(cx.unit()), cx.exponent(cx.start)))
                b.appendleft(lit(tuple(reversed([t.inverse() for t in cy.head.instantiate(cy.start)]))))
                b.appendleft(power(inverse(cy.unit()), cy.exponent(cy.start)))
                ops -= 1
                continue
            # reverse-natural against reverse-recursive order types differ
            return ("ne", None)
        return (None, None)

    if not a and not b:
        return ("eq", None)
    return ("ne", None)


def word_equal(u: WordExpr, v: WordExpr, bound: int = DEFAULT_BOUND) -> TriVerdict:
    """Literal equality of restricted words.

    Yes when a structural alignment decomposes both words into matching
    pieces.  Otherwise letter projections onto all one- and two-name sets
    with indices up to ``bound`` are compared; equality of restricted words
    is characterized by agreement of all such projections, so a differing
    projection is a complete No witness and full agreement up to the bound
    yields Unknown(bound).
    """
    require_restricted(u)
    require_restricted(v)
    res, hint = align_words(u, v)
    if res == "eq":
        return yes()

    names = sorted(mentioned_names(u, bound) | mentioned_names(v, bound))
    ordered = []
    if hint:
        hint_pair = frozenset(hint)
        ordered.append(hint_pair)
    for i, n1 in enumerate(names):
        ordered.append(frozenset([n1]))
    for i, n1 in enumerate(names):
        for n2 in names[i + 1:]:
            ordered.append(frozenset([n1, n2]))
    seen = set()
    for fs in ordered:
        if fs in seen:
            continue
        seen.add(fs)
        pu = project(u, fs)
        pv = project(v, fs)
        if pu != pv:
            return no({"names": tuple(sorted(fs)), "left": pu, "right": pv})
    return unknown(bound)
