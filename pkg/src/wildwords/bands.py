"""Band systems over a doubly factored finite word.

A band system records one finite word (the host) together with two
factorizations: the denominator ``w1 . prod(theta_j^-1 eta_j theta_j) .
prod([sigma_i, tau_i])`` and the numerator ``t1 u1 t2 u2 ... tk uk t(k+1)``
where every u piece cancels to the empty word under a fixed pairing.  Line
bands stand on the w1, eta and t segments; arch bands join each mutually
inverse segment pair (theta, sigma, tau and the paired u pieces) by nested
arcs pairing letter r with letter len+1-r of the partner.

Every letter then lies on exactly one leaf, the maximal curve alternating
through arcs and, at its ends only, vertical lines.  Leaves running through
the same band sequence form parallelity classes; removing a class deletes its
letters from every factor and leaves a system of the same shape.  Certificate
extraction replays this removal pipeline and reads off transformation moves
for the word-problem deciders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arches import normalize_concatenation
from .deciders import (Certificate, DeleteInversePair, DeletePure,
                       GroupContext, Reduce, Swap, griffiths_h1,
                       verify_certificate_detailed)
from .errors import BadPairing, ClassNotFound, PipelineStuck, SpecMismatch
from .positions import Cut, SubwordLocator
from .words import FiniteWord, Lit, as_finite, invert_finite, lit, word_str


@dataclass(frozen=True)
class CancellationPattern:
    """A subdivision of one numerator u factor into pieces, with the pairing
    that deletes adjacent mutually inverse pieces down to the empty word."""

    pieces: tuple  # tuple[FiniteWord, ...]
    pairs: tuple   # tuple[(int, int), ...] in deletion order

    def word(self) -> FiniteWord:
        out = []
        for p in self.pieces:
            out.extend(p)
        return tuple(out)

    def validate(self) -> None:
        seen = set()
        for i, j in self.pairs:
            if not (0 <= i < j < len(self.pieces)):
                raise BadPairing(f"pair ({i},{j}) out of range")
            if i in seen or j in seen:
                raise BadPairing(f"piece in two pairs: ({i},{j})")
            seen.update((i, j))
            if self.pieces[j] != invert_finite(self.pieces[i]):
                raise BadPairing(f"pieces {i} and {j} are not mutually inverse")
        if len(seen) != len(self.pieces):
            raise BadPairing("pairing does not cover all pieces")
        alive = [True] * len(self.pieces)
        for i, j in self.pairs:
            if any(alive[k] for k in range(i + 1, j)):
                raise BadPairing(f"pair ({i},{j}) deleted while not adjacent")
            alive[i] = alive[j] = False


@dataclass(frozen=True)
class Conjugate:
    theta: FiniteWord
    eta: FiniteWord
    kind: str  # family side of eta: 'p' | 'q'


@dataclass(frozen=True)
class Commutator:
    sigma: FiniteWord
    tau: FiniteWord


@dataclass(frozen=True)
class BandSystemSpec:
    """Two factorizations of one host word, see the module docstring."""

    w1: FiniteWord
    conjugates: tuple
    commutators: tuple
    t_parts: tuple
    u_parts: tuple

    def denominator_factors(self):
        out = [(("w1",), self.w1)]
        for j, c in enumerate(self.conjugates):
            out.append((("theta_inv", j), invert_finite(c.theta)))
            out.append((("eta", j), c.eta))
            out.append((("theta", j), c.theta))
        for i, c in enumerate(self.commutators):
            out.append((("sigma_inv", i), invert_finite(c.sigma)))
            out.append((("tau_inv", i), invert_finite(c.tau)))
            out.append((("sigma", i), c.sigma))
            out.append((("tau", i), c.tau))
        return out

    def numerator_factors(self):
        out = []
        for s, t in enumerate(self.t_parts):
            out.append((("t", s), t))
            if s < len(self.u_parts):
                for m, piece in enumerate(self.u_parts[s].pieces):
                    out.append((("z", s, m), piece))
        return out

    def host(self) -> FiniteWord:
        out = []
        for _, w in self.denominator_factors():
            out.extend(w)
        return tuple(out)

    def numerator_word(self) -> FiniteWord:
        out = []
        for _, w in self.numerator_factors():
            out.extend(w)
        return tuple(out)

    def w2(self) -> FiniteWord:
        out = []
        for t in self.t_parts:
            out.extend(t)
        return tuple(out)


@dataclass(frozen=True)
class Band:
    index: int
    side: str       # 'upper' | 'lower'
    kind: str       # 'line' | 'arch'
    owner: tuple
    intervals: tuple  # one (start, end) for line, two for arch


@dataclass(frozen=True)
class Leaf:
    elements: tuple   # ('line', band, pos) and ('arc', band, pos, partner)
    positions: tuple  # host positions in traversal order
    closed: bool

    def band_signature(self):
        return tuple(e[1] for e in self.elements)

    def end_owners(self, bands):
        if self.closed:
            return None
        return (bands[self.elements[0][1]].owner, bands[self.elements[-1][1]].owner)


@dataclass(frozen=True)
class ParallelityClassification:
    classes: tuple  # tuple[tuple[int, ...], ...] of leaf indices


@dataclass(frozen=True)
class SurfaceInvariants:
    genus: int
    boundary_components: int
    distinguished_segments: int
    euler_characteristic: int


@dataclass(frozen=True)
class RemovalOutcome:
    case_label: str
    spec: BandSystemSpec
    system: "ArchLineBandSystem"
    deleted: tuple  # ((owner, offset_in_factor, letters), ...) contiguous runs


class ArchLineBandSystem:
    """Constructed band system: segments, bands, per-position connections."""

    def __init__(self, spec: BandSystemSpec, ctx: GroupContext | None = None):
        self.spec = spec
        self.ctx = ctx or griffiths_h1()
        self.host = spec.host()
        n = len(self.host)

        numerator = spec.numerator_word()
        if numerator != self.host:
            raise SpecMismatch(
                f"numerator {word_str(numerator)!r} differs from "
                f"denominator {word_str(self.host)!r}")
        for q, pattern in enumerate(spec.u_parts):
            try:
                pattern.validate()
            except BadPairing as exc:
                raise BadPairing(f"u[{q}]: {exc}") from exc
        for j, c in enumerate(spec.conjugates):
            kinds = {self.ctx.family_kind(x.name.family) for x in c.eta}
            if kinds - {c.kind}:
                raise SpecMismatch(f"eta[{j}] is not pure {c.kind}")

        def segment_table(factors):
            table = {}
            pos = 0
            for owner, word in factors:
                table[owner] = (pos, pos + len(word))
                pos += len(word)
            return table

        self.lower_segments = segment_table(spec.denominator_factors())
        self.upper_segments = segment_table(spec.numerator_factors())

        bands: list[Band] = []
        self.upper_conn: list = [None] * n
        self.lower_conn: list = [None] * n

        def add_line(side, owner, conn, table):
            seg = table[owner]
            if seg[0] == seg[1]:
                return
            b = Band(len(bands), side, "line", owner, (seg,))
            bands.append(b)
            for p in range(seg[0], seg[1]):
                conn[p] = ("line", b.index, p)

        def add_arch(side, owner, seg_a, seg_b, conn):
            if seg_a[0] == seg_a[1]:
                return
            if seg_a[1] - seg_a[0] != seg_b[1] - seg_b[0]:
                raise SpecMismatch(f"arch band {owner} joins segments of unequal length")
            if seg_a[0] > seg_b[0]:
                seg_a, seg_b = seg_b, seg_a
            b = Band(len(bands), side, "arch", owner, (seg_a, seg_b))
            bands.append(b)
            length = seg_a[1] - seg_a[0]
            for r in range(length):
                pa = seg_a[0] + r
                pb = seg_b[0] + (length - 1 - r)
                if self.host[pa] != self.host[pb].inverse():
                    raise SpecMismatch(
                        f"arch band {owner} pairs non-inverse letters at {pa},{pb}")
                conn[pa] = ("arc", b.index, pa, pb)
                conn[pb] = ("arc", b.index, pb, pa)

        add_line("lower", ("w1",), self.lower_conn, self.lower_segments)
        for j, _ in enumerate(spec.conjugates):
            add_line("lower", ("eta", j), self.lower_conn, self.lower_segments)
            add_arch("lower", ("theta", j), self.lower_segments[("theta_inv", j)],
                     self.lower_segments[("theta", j)], self.lower_conn)
        for i, _ in enumerate(spec.commutators):
            add_arch("lower", ("sigma", i), self.lower_segments[("sigma_inv", i)],
                     self.lower_segments[("sigma", i)], self.lower_conn)
            add_arch("lower", ("tau", i), self.lower_segments[("tau_inv", i)],
                     self.lower_segments[("tau", i)], self.lower_conn)
        for s, _ in enumerate(spec.t_parts):
            add_line("upper", ("t", s), self.upper_conn, self.upper_segments)
        for q, pattern in enumerate(spec.u_parts):
            for pi, (za, zb) in enumerate(pattern.pairs):
                add_arch("upper", ("u", q, pi), self.upper_segments[("z", q, za)],
                         self.upper_segments[("z", q, zb)], self.upper_conn)

        self.bands = tuple(bands)
        for p in range(n):
            if self.upper_conn[p] is None or self.lower_conn[p] is None:
                raise SpecMismatch(f"position {p} not covered by both sides")

        self._leaves = None
        self._classes = None

    @property
    def size(self) -> int:
        return len(self.host)

    # -- leaves ---------------------------------------------------------

    def leaves(self) -> tuple:
        """All leaves; every letter lies on exactly one of them."""
        if self._leaves is not None:
            return self._leaves
        conn = {"up": self.upper_conn, "down": self.lower_conn}
        other = {"up": "down", "down": "up"}
        assigned: set[int] = set()
        leaves: list[Leaf] = []

        def walk_open(pos, line_side):
            elements = [conn[line_side][pos]]
            positions = [pos]
            side = line_side
            while True:
                side = other[side]
                el = conn[side][pos]
                elements.append(el)
                if el[0] == "line":
                    return Leaf(tuple(elements), tuple(positions), False)
                pos = el[3]
                positions.append(pos)

        def walk_closed(start):
            elements = []
            positions = []
            pos, side = start, "up"
            while True:
                positions.append(pos)
                el = conn[side][pos]
                elements.append(el)
                pos = el[3]
                side = other[side]
                if pos == start and side == "up":
                    return Leaf(tuple(elements), tuple(positions), True)

        # open leaves first: start from every position that touches a line
        for p in range(len(self.host)):
            if p in assigned:
                continue
            if self.upper_conn[p][0] == "line":
                leaf = walk_open(p, "up")
            elif self.lower_conn[p][0] == "line":
                leaf = walk_open(p, "down")
            else:
                continue
            assigned.update(leaf.positions)
            leaves.append(leaf)
        # everything else lies on arc-only cycles
        for p in range(len(self.host)):
            if p in assigned:
                continue
            leaf = walk_closed(p)
            assigned.update(leaf.positions)
            leaves.append(leaf)
        leaves.sort(key=lambda leaf: min(leaf.positions))
        self._leaves = tuple(leaves)
        return self._leaves

    # -- parallelity -----------------------------------------------------

    def parallelity_classes(self) -> ParallelityClassification:
        """Partition of leaves: equal length and componentwise equal bands, up
        to direction, and up to rotation for closed leaves."""
        if self._classes is not None:
            return self._classes
        leaves = self.leaves()
        buckets: dict = {}
        for idx, leaf in enumerate(leaves):
            sig = leaf.band_signature()
            if leaf.closed:
                options = []
                for d in (sig, tuple(reversed(sig))):
                    for r in range(len(d)):
                        options.append(d[r:] + d[:r])
                key = ("closed", min(options))
            else:
                key = ("open", min(sig, tuple(reversed(sig))))
            buckets.setdefault(key, []).append(idx)
        classes = tuple(tuple(v) for _, v in
                        sorted(buckets.items(), key=lambda kv: kv[1][0]))
        self._classes = ParallelityClassification(classes)
        return self._classes

    # -- surface ----------------------------------------------------------

    def surface_invariants(self) -> SurfaceInvariants:
        """Fill the system to a compact orientable surface and measure it.

        The host segment thickens to a disk; every band becomes a ribbon glued
        along disjoint boundary arcs (its feet) in the plane order: upper feet
        left to right, then the right end, then lower feet right to left, then
        the left end.  The connector cells that fill the space between
        adjacent feet are boundary-trivial, so this cell structure has the
        same invariants.  The Euler characteristic is counted from the
        explicit cell lists, boundary components by walking boundary edges,
        genus from chi = 2 - 2g - b.
        """
        n = len(self.host)
        t = sum(1 for band in self.bands if band.kind == "line")
        if n == 0:
            return SurfaceInvariants(0, 1, t, 1)

        # feet: (band index, interval) tagged corners L/R
        upper_feet = []
        lower_feet = []
        for band in self.bands:
            target = upper_feet if band.side == "upper" else lower_feet
            for iv in band.intervals:
                target.append((band.index, iv))
        upper_feet.sort(key=lambda f: f[1])
        lower_feet.sort(key=lambda f: f[1])

        def corner(foot, side):
            return ("C", foot[0], foot[1], side)

        vertices: set = set()
        edges: list = []  # (id, v1, v2, boundary)
        faces = 1 + len(self.bands)

        for foot in upper_feet + lower_feet:
            vertices.add(corner(foot, "L"))
            vertices.add(corner(foot, "R"))
            edges.append((("foot", foot[0], foot[1]), corner(foot, "L"),
                          corner(foot, "R"), False))

        # boundary gaps of the base disk, walking its boundary once around
        cyc: list = []
        for foot in upper_feet:
            cyc.append((corner(foot, "L"), corner(foot, "R")))
        for foot in reversed(lower_feet):
            cyc.append((corner(foot, "R"), corner(foot, "L")))
        for i, (entry, exit_) in enumerate(cyc):
            nxt = cyc[(i + 1) % len(cyc)]
            edges.append((("gap", i), exit_, nxt[0], True))

        free_count = 0
        for band in self.bands:
            if band.kind == "line":
                (iv,) = band.intervals
                foot = (band.index, iv)
                f0 = ("F", band.index, 0)
                f1 = ("F", band.index, 1)
                vertices.update((f0, f1))
                edges.append((("lat", band.index, 0), corner(foot, "L"), f0, True))
                edges.append((("freeside", band.index), f0, f1, True))
                edges.append((("lat", band.index, 1), f1, corner(foot, "R"), True))
                free_count += 1
            else:
                iv1, iv2 = band.intervals
                f1 = (band.index, iv1)
                f2 = (band.index, iv2)
                edges.append((("outer", band.index), corner(f1, "L"),
                              corner(f2, "R"), True))
                edges.append((("inner", band.index), corner(f1, "R"),
                              corner(f2, "L"), True))

        chi = len(vertices) - len(edges) + faces

        incident: dict = {}
        for eid, a, b, boundary in edges:
            if not boundary:
                continue
            incident.setdefault(a, []).append(eid)
            incident.setdefault(b, []).append(eid)
        for v, es in incident.items():
            if len(es) != 2:
                raise PipelineStuck(f"boundary vertex {v} has degree {len(es)}")
        by_id = {eid: (a, b) for eid, a, b, bd in edges if bd}
        unvisited = set(by_id)
        b_count = 0
        while unvisited:
            b_count += 1
            start = next(iter(unvisited))
            eid = start
            a, b = by_id[eid]
            vertex = b
            while True:
                unvisited.discard(eid)
                options = [e for e in incident[vertex] if e != eid]
                if not options:
                    raise PipelineStuck("boundary walk stuck")
                eid = options[0]
                if eid == start:
                    break
                va, vb = by_id[eid]
                vertex = vb if vertex == va else va

        g2 = 2 - chi - b_count
        if g2 < 0 or g2 % 2:
            raise PipelineStuck(f"inconsistent surface: chi={chi}, b={b_count}")
        return SurfaceInvariants(g2 // 2, b_count, t, chi)


# ---------------------------------------------------------------------------
# Complexity bound


@lru_cache(maxsize=None)
def _class_bound(g: int, b: int, t: int) -> int:
    """Recursive bound on the number of disjoint-curve classes on a compact
    orientable surface: genus g, b boundary components, t distinguished
    boundary segments.

    At most b + 2t^2 + 1 classes are exceptional (trivial or
    boundary-parallel); a non-exceptional curve can be cut along, lowering
    (g, b) lexicographically while raising b by at most 2 and t by at most 2
    on each resulting piece.
    """
    budget = b + 2 * t * t + 1
    options = []
    if g >= 1:
        options.append(_class_bound(g - 1, b + 2, t + 2))
        options.append(_class_bound(g - 1, b + 1, t + 2))
    if b >= 2:
        options.append(_class_bound(g, b - 1, t + 2))
    for extra in (2, 1):  # separating closed curve / separating arc
        for g1 in range(g + 1):
            g2 = g - g1
            for b1 in range(1, b + extra):
                b2 = b + extra - b1
                if b2 < 1:
                    continue
                if (g1, b1) < (g, b) and (g2, b2) < (g, b):
                    options.append(_class_bound(g1, b1, t + 2) +
                                   _class_bound(g2, b2, t + 2))
    return budget + (max(options) if options else 0)


def class_count_bound(inv: SurfaceInvariants) -> int:
    return _class_bound(inv.genus, inv.boundary_components,
                        inv.distinguished_segments)


# ---------------------------------------------------------------------------
# Construction helpers


def build_band_system(spec: BandSystemSpec, ctx: GroupContext | None = None) -> ArchLineBandSystem:
    return ArchLineBandSystem(spec, ctx)


def spec_from_factors(w1: FiniteWord, conjugates, commutators,
                      ctx: GroupContext | None = None) -> BandSystemSpec:
    """Build a two-way factorization of the denominator word by running the
    concatenation normalizer and reading off the cancelled piece pairing."""
    conjugates = tuple(conjugates)
    commutators = tuple(commutators)
    factors = [lit(w1)]
    for c in conjugates:
        factors += [lit(invert_finite(c.theta)), lit(c.eta), lit(c.theta)]
    for c in commutators:
        factors += [lit(invert_finite(c.sigma)), lit(invert_finite(c.tau)),
                    lit(c.sigma), lit(c.tau)]
    dec = normalize_concatenation(factors)
    refs = [(fi, k) for fi, pieces in enumerate(dec.factors)
            for k in range(len(pieces))]
    words = {ref: as_finite(dec.factors[ref[0]][ref[1]]) for ref in refs}
    alive = set(dec.residue_refs)
    script_rank = {pair: rank for rank, pair in enumerate(dec.script)}

    t_parts: list = []
    u_parts: list = []
    current_t: list = []
    current_u: list = []

    def close_u():
        local = {ref: m for m, ref in enumerate(current_u)}
        pairs = sorted(((a, b) for a, b in dec.script
                        if a in local and b in local),
                       key=lambda pair: script_rank[pair])
        u_parts.append(CancellationPattern(
            tuple(words[ref] for ref in current_u),
            tuple((local[a], local[b]) for a, b in pairs)))
        current_u.clear()

    for ref in refs:
        if ref in alive:
            if current_u:
                close_u()
            current_t.extend(words[ref])
        else:
            if not current_u:
                t_parts.append(tuple(current_t))
                current_t = []
            current_u.append(ref)
    if current_u:
        close_u()
    t_parts.append(tuple(current_t))
    return BandSystemSpec(tuple(w1), conjugates, commutators,
                          tuple(t_parts), tuple(u_parts))


# ---------------------------------------------------------------------------
# Removal of a parallelity class


def classify_class(system: ArchLineBandSystem, class_index: int) -> str:
    """Case label of a parallelity class by where its leaves start and end:
    closed (1), t to other t (2), t to same t (2'), eta to t (3), w1 to t
    (4), eta to w1 (5), eta to eta (6), w1 to w1 (7)."""
    classes = system.parallelity_classes().classes
    if not (0 <= class_index < len(classes)):
        raise ClassNotFound(f"no parallelity class {class_index}")
    leaves = system.leaves()
    labels = {_classify_ends(system, leaves[m]) for m in classes[class_index]}
    if len(labels) != 1:
        raise PipelineStuck("leaves of one class classify differently")
    return labels.pop()


def _classify_ends(system: ArchLineBandSystem, leaf: Leaf):
    ends = leaf.end_owners(system.bands)
    if ends is None:
        return "1"
    kinds = sorted(owner[0] for owner in ends)
    if kinds == ["t", "t"]:
        return "2'" if ends[0] == ends[1] else "2"
    if kinds == ["eta", "t"]:
        return "3"
    if kinds == ["t", "w1"]:
        return "4"
    if kinds == ["eta", "w1"]:
        return "5"
    if kinds == ["eta", "eta"]:
        return "6"
    if kinds == ["w1", "w1"]:
        return "7"
    raise PipelineStuck(f"unexpected leaf ends {ends}")


def _contiguous_runs(sorted_positions):
    runs: list[list[int]] = []
    for p in sorted_positions:
        if runs and runs[-1][-1] == p - 1:
            runs[-1].append(p)
        else:
            runs.append([p])
    return runs


def remove_parallelity_class(system: ArchLineBandSystem, class_index: int) -> RemovalOutcome:
    """Delete all letters on the leaves of one parallelity class and rebuild.

    The new numerator and denominator remain letterwise equal, paired factors
    remain mutually inverse and every u piece still cancels to the empty
    word; the rebuild re-validates all of this.
    """
    classes = system.parallelity_classes().classes
    if not (0 <= class_index < len(classes)):
        raise ClassNotFound(f"no parallelity class {class_index}")
    case = classify_class(system, class_index)
    leaves = system.leaves()
    doomed: set[int] = set()
    for m in classes[class_index]:
        doomed.update(leaves[m].positions)

    spec = system.spec
    host = system.host
    deleted_records = []

    def filter_segment(owner, table):
        a, b = table[owner]
        kept = tuple(host[p] for p in range(a, b) if p not in doomed)
        gone = sorted(p for p in range(a, b) if p in doomed)
        for run in _contiguous_runs(gone):
            deleted_records.append(
                (owner, run[0] - a, tuple(host[p] for p in run)))
        return kept

    low = system.lower_segments
    up = system.upper_segments
    new_w1 = filter_segment(("w1",), low)
    new_conj = []
    for j, c in enumerate(spec.conjugates):
        th = filter_segment(("theta", j), low)
        th_inv = filter_segment(("theta_inv", j), low)
        if th_inv != invert_finite(th):
            raise PipelineStuck("conjugator halves no longer mutually inverse")
        new_conj.append(Conjugate(th, filter_segment(("eta", j), low), c.kind))
    new_comm = []
    for i, c in enumerate(spec.commutators):
        sg = filter_segment(("sigma", i), low)
        sg_inv = filter_segment(("sigma_inv", i), low)
        ta = filter_segment(("tau", i), low)
        ta_inv = filter_segment(("tau_inv", i), low)
        if sg_inv != invert_finite(sg) or ta_inv != invert_finite(ta):
            raise PipelineStuck("commutator halves no longer mutually inverse")
        new_comm.append(Commutator(sg, ta))
    new_t = tuple(filter_segment(("t", s), up) for s in range(len(spec.t_parts)))
    new_u = []
    for q, pattern in enumerate(spec.u_parts):
        pieces = tuple(filter_segment(("z", q, m), up)
                       for m in range(len(pattern.pieces)))
        new_u.append(CancellationPattern(pieces, pattern.pairs))

    new_spec = BandSystemSpec(new_w1, tuple(new_conj), tuple(new_comm),
                              new_t, tuple(new_u))
    new_system = ArchLineBandSystem(new_spec, system.ctx)
    return RemovalOutcome(case, new_spec, new_system, tuple(deleted_records))


# ---------------------------------------------------------------------------
# Certificate extraction


def extract_certificate(spec: BandSystemSpec, ctx: GroupContext) -> Certificate:
    """Replay the class-removal pipeline and read off transformation moves.

    Stage one removes every class with an end on an eta band: a common pure
    subword disappears from a t factor (source move) or from w1 (target
    move).  For the fundamental-group target both sides are then reduced.
    For the homology targets stage two removes closed classes and the classes
    with both ends on t bands or both on the w1 band (inverse-pair
    deletions), after which only strips joining the two sides remain; stage
    three sorts their blocks with consecutive swaps.  The result is verified
    before being returned.
    """
    if ctx.target == "wp":
        raise ValueError("no certificate pipeline for the plain word group")
    if ctx.target == "pi1_griffiths" and spec.commutators:
        raise ValueError("the fundamental-group pipeline admits no commutators")
    if ctx.target == "h1_hawaiian" and spec.conjugates:
        raise ValueError("the one-alphabet homology pipeline admits no conjugates")

    system = build_band_system(spec, None if ctx.target == "h1_hawaiian" else ctx)
    source_word = lit(spec.w2())
    target_word = lit(spec.w1)
    moves: list = []

    def t_positions(sys):
        out = []
        for s in range(len(sys.spec.t_parts)):
            a, b = sys.upper_segments[("t", s)]
            out.extend(range(a, b))
        return out

    def w1_positions(sys):
        a, b = sys.lower_segments[("w1",)]
        return list(range(a, b))

    def lit_locator(first, last):
        return SubwordLocator(Cut.before((("w", first),)),
                              Cut.after_pos((("w", last),)))

    def emit_deletions(sys, outcome, side, pair):
        """Convert the deleted runs hitting one side into moves, in current
        survivor coordinates of that side's word."""
        alive = t_positions(sys) if side == "source" else w1_positions(sys)
        prefix = "t" if side == "source" else "w1"
        runs = []
        table = sys.upper_segments if side == "source" else sys.lower_segments
        for owner, off, letters in outcome.deleted:
            if owner[0] != prefix:
                continue
            seg = table[owner]
            doomed = list(range(seg[0] + off, seg[0] + off + len(letters)))
            ranks = [alive.index(p) for p in doomed]
            if ranks != list(range(ranks[0], ranks[0] + len(ranks))):
                raise PipelineStuck("deleted block not contiguous in the word")
            runs.append((ranks, letters))
        runs.sort(key=lambda rl: rl[0][0])
        if pair:
            if len(runs) == 1:
                # the two mutually inverse blocks are adjacent and merged
                ranks, letters = runs[0]
                if len(letters) % 2:
                    raise PipelineStuck("odd merged block cannot split into a pair")
                m = len(letters) // 2
                runs = [(ranks[:m], letters[:m]), (ranks[m:], letters[m:])]
            if len(runs) != 2:
                raise PipelineStuck(f"expected a block pair, found {len(runs)}")
            (r1, l1), (r2, l2) = runs
            if l2 != invert_finite(l1):
                raise PipelineStuck("deleted blocks are not mutually inverse")
            moves.append(DeleteInversePair(lit_locator(r1[0], r1[-1]),
                                           lit_locator(r2[0], r2[-1]), side))
        else:
            for ranks, letters in runs:
                kinds = {ctx.family_kind(x.name.family) for x in letters}
                if len(kinds) != 1:
                    raise PipelineStuck("pure deletion block mixes family sides")
                moves.append(DeletePure(lit_locator(ranks[0], ranks[-1]),
                                        kinds.pop(), side))

    def find_class(sys, wanted):
        best = None
        classes = sys.parallelity_classes().classes
        lv = sys.leaves()
        for ci, members in enumerate(classes):
            if _classify_ends(sys, lv[members[0]]) in wanted:
                anchor = min(min(lv[m].positions) for m in members)
                if best is None or anchor < best[1]:
                    best = (ci, anchor)
        return None if best is None else best[0]

    current = system
    while True:
        ci = find_class(current, ("3", "5", "6"))
        if ci is None:
            break
        case = classify_class(current, ci)
        outcome = remove_parallelity_class(current, ci)
        if case == "3":
            emit_deletions(current, outcome, "source", pair=False)
        elif case == "5":
            emit_deletions(current, outcome, "target", pair=False)
        current = outcome.system
    for c in current.spec.conjugates:
        if c.eta:
            raise PipelineStuck("eta letters survived the first stage")

    if ctx.target == "pi1_griffiths":
        moves.append(Reduce("source"))
        moves.append(Reduce("target"))
        cert = Certificate(source_word, tuple(moves), target_word)
        ok, why = verify_certificate_detailed(cert, ctx)
        if not ok:
            raise PipelineStuck(f"extracted certificate failed verification: {why}")
        return cert

    while True:
        ci = find_class(current, ("1", "2", "2'", "7"))
        if ci is None:
            break
        case = classify_class(current, ci)
        outcome = remove_parallelity_class(current, ci)
        if case in ("2", "2'"):
            emit_deletions(current, outcome, "source", pair=True)
        elif case == "7":
            emit_deletions(current, outcome, "target", pair=True)
        current = outcome.system

    lv = current.leaves()
    for members in current.parallelity_classes().classes:
        if _classify_ends(current, lv[members[0]]) != "4":
            raise PipelineStuck("non-strip class survived stage two")

    src_positions = t_positions(current)
    tgt_positions = w1_positions(current)
    if len(src_positions) != len(tgt_positions):
        raise PipelineStuck("survivor counts differ between the two sides")
    src_set = set(src_positions)
    tgt_set = set(tgt_positions)
    partner = {}
    for leaf in lv:
        end_positions = {leaf.positions[0], leaf.positions[-1]}
        tp = [p for p in end_positions if p in src_set]
        wp = [p for p in end_positions if p in tgt_set]
        if len(tp) != 1 or len(wp) != 1:
            raise PipelineStuck("strip leaf does not join the two sides")
        partner[tp[0]] = wp[0]

    host_now = current.host
    blocks: list[list[int]] = []
    for p in src_positions:
        if blocks and partner[p] == partner[blocks[-1][-1]] + 1:
            blocks[-1].append(p)
        else:
            blocks.append([p])
    for blk in blocks:
        src_letters = tuple(host_now[p] for p in blk)
        tgt_letters = tuple(host_now[partner[p]] for p in blk)
        if src_letters != tgt_letters:
            raise PipelineStuck("strip block content differs between sides")

    order = list(range(len(blocks)))
    lengths = [len(b) for b in blocks]
    want = sorted(order, key=lambda bi: partner[blocks[bi][0]])
    for slot in range(len(want)):
        idx = order.index(want[slot])
        while idx > slot:
            off = sum(lengths[order[k]] for k in range(idx - 1))
            l1 = lengths[order[idx - 1]]
            l2 = lengths[order[idx]]
            moves.append(Swap(lit_locator(off, off + l1 - 1),
                              lit_locator(off + l1, off + l1 + l2 - 1), "source"))
            order[idx - 1], order[idx] = order[idx], order[idx - 1]
            idx -= 1

    cert = Certificate(source_word, tuple(moves), target_word)
    ok, why = verify_certificate_detailed(cert, ctx)
    if not ok:
        raise PipelineStuck(f"extracted certificate failed verification: {why}")
    return cert


# ---------------------------------------------------------------------------
# Rendering


def render_svg(system: ArchLineBandSystem) -> str:
    """Draw the system: host letters on a horizontal axis, upper bands above,
    lower bands below, leaves colored by parallelity class."""
    n = len(system.host)
    unit = 44
    margin = 40
    mid = 320
    width = margin * 2 + max(n, 1) * unit
    height = 640

    def x_of(pos):
        return margin + (pos + 0.5) * unit

    def esc(s):
        return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")

    classes = system.parallelity_classes().classes
    leaf_class = {}
    for ci, members in enumerate(classes):
        for m in members:
            leaf_class[m] = ci
    pos_leaf = {}
    for li, leaf in enumerate(system.leaves()):
        for p in leaf.positions:
            pos_leaf[p] = li

    def color(ci):
        return f"hsl({(ci * 67) % 360},70%,40%)"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{margin}" y1="{mid}" x2="{width - margin}" y2="{mid}" '
        'stroke="black" stroke-width="2"/>',
    ]
    for i, letter in enumerate(system.host):
        x = x_of(i)
        parts.append(f'<line x1="{x}" y1="{mid - 4}" x2="{x}" y2="{mid + 4}" stroke="black"/>')
        label = esc(f"{letter.name.family}{letter.name.index}" +
                    ("⁻¹" if letter.sign < 0 else ""))
        parts.append(f'<text x="{x}" y="{mid + 18}" font-size="11" '
                     f'text-anchor="middle">{label}</text>')

    for band in system.bands:
        sign = -1 if band.side == "upper" else 1
        depth = 90 + 18 * (band.index % 5)
        fill = "#dce6f4" if band.side == "upper" else "#f4e6dc"
        if band.kind == "line":
            (a, b), = band.intervals
            x1 = margin + a * unit
            x2 = margin + b * unit
            y2 = mid + sign * depth
            parts.append(f'<rect x="{x1}" y="{min(mid, y2)}" width="{x2 - x1}" '
                         f'height="{abs(y2 - mid)}" fill="{fill}" fill-opacity="0.6" '
                         'stroke="gray" stroke-width="0.5"/>')
            parts.append(f'<line x1="{x1}" y1="{y2}" x2="{x2}" y2="{y2}" '
                         'stroke="black" stroke-width="3"/>')
            for p in range(a, b):
                ci = leaf_class[pos_leaf[p]]
                parts.append(f'<line x1="{x_of(p)}" y1="{mid}" x2="{x_of(p)}" y2="{y2}" '
                             f'stroke="{color(ci)}" stroke-width="1.5"/>')
        else:
            (a1, b1), (a2, b2) = band.intervals
            length = b1 - a1
            for r in range(length):
                pa = a1 + r
                pb = a2 + (length - 1 - r)
                xa, xb = x_of(pa), x_of(pb)
                rad = (xb - xa) / 2
                ci = leaf_class[pos_leaf[pa]]
                sweep = 1 if band.side == "upper" else 0
                parts.append(f'<path d="M {xa} {mid} A {rad} {rad * 0.8} 0 0 {sweep} {xb} {mid}" '
                             f'fill="none" stroke="{color(ci)}" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts)
