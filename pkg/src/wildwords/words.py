"""Countable words over indexed alphabets.

A word is a letter sequence indexed by a countable linear order.  Finite words
are plain tuples of letters.  Infinite words are represented symbolically by
expression trees built from literals, concatenation, powers, inverses,
infinite products of affine-indexed blocks (``OmegaProd``, order type of the
naturals) and a recursive limit template (``LimitRec``).

All values are immutable; every operation is a pure function.  The symbolic
tier is deliberately restricted to affine index templates, which keeps letter
projection exactly solvable by linear Diophantine enumeration.  The
representable order types are finite orders, the order of the naturals and its
reverse, the limit-recursion tree order, and finite concatenations of these.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import NotRestricted

#: Default index bound used when a verdict can only be certified finitely far.
DEFAULT_BOUND = 32


class Name(NamedTuple):
    """A letter name: alphabet family plus positive index."""

    family: str
    index: int

    def __str__(self):
        return f"{self.family}[{self.index}]"


class Letter(NamedTuple):
    """A signed occurrence of a letter name."""

    name: Name
    sign: int

    def inverse(self):
        return Letter(self.name, -self.sign)

    def __str__(self):
        return str(self.name) + ("^-1" if self.sign < 0 else "")


def letter(family: str, index: int, sign: int = 1) -> Letter:
    if index < 1:
        raise ValueError(f"letter index must be >= 1, got {index}")
    if sign not in (1, -1):
        raise ValueError(f"letter sign must be +1 or -1, got {sign}")
    return Letter(Name(family, index), sign)


# A finite word is a tuple of letters; the empty tuple is the empty word.
FiniteWord = tuple


def word_str(w: Iterable[Letter]) -> str:
    return " ".join(str(x) for x in w)


def invert_finite(w: FiniteWord) -> FiniteWord:
    """Formal inverse of a finite word: reversed order, inverted letters."""
    return tuple(x.inverse() for x in reversed(w))


def free_reduce(w: FiniteWord) -> FiniteWord:
    """Unique free-group reduced form of a finite word.  Idempotent."""
    out: list[Letter] = []
    for x in w:
        if out and out[-1] == Letter(x.name, -x.sign):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class IndexExpr(NamedTuple):
    """Affine index template ``coeff * v + offset`` in one bound variable."""

    coeff: int
    offset: int

    def __call__(self, v: int) -> int:
        return self.coeff * v + self.offset

    @property
    def constant(self) -> bool:
        return self.coeff == 0

    def shifted(self, d: int) -> "IndexExpr":
        """The template ``v -> self(v + d)``."""
        return IndexExpr(self.coeff, self.coeff * d + self.offset)

    def solve(self, target: int, start: int) -> int | None:
        """The unique ``v >= start`` with ``self(v) == target``, if any.

        Only meaningful for ``coeff >= 1``; constant templates return None.
        """
        if self.coeff == 0:
            return None
        q, r = divmod(target - self.offset, self.coeff)
        if r == 0 and q >= start:
            return q
        return None

    def __str__(self, var: str = "i") -> str:
        if self.coeff == 0:
            return str(self.offset)
        if self.coeff == 1:
            head = var
        else:
            head = f"{self.coeff}*{var}"
        if self.offset == 0:
            return head
        if self.offset > 0:
            return f"{head}+{self.offset}"
        return f"{head}-{-self.offset}"


def const_index(k: int) -> IndexExpr:
    return IndexExpr(0, k)


def var_index(coeff: int = 1, offset: int = 0) -> IndexExpr:
    return IndexExpr(coeff, offset)


@dataclass(frozen=True)
class BlockTemplate:
    """One block of an infinite product: a finite sequence of
    (family, index template, sign) triples over a shared block variable."""

    entries: tuple[tuple[str, IndexExpr, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("block template must be nonempty")
        for fam, ix, sign in self.entries:
            if sign not in (1, -1):
                raise ValueError("entry sign must be +1 or -1")
            if ix.coeff < 0:
                raise ValueError("index coefficient must be nonnegative")

    def __len__(self):
        return len(self.entries)

    def instantiate(self, v: int) -> FiniteWord:
        return tuple(Letter(Name(fam, ix(v)), sign) for fam, ix, sign in self.entries)

    def shifted(self, d: int) -> "BlockTemplate":
        return BlockTemplate(tuple((f, ix.shifted(d), s) for f, ix, s in self.entries))

    def min_index_at(self, start: int) -> int:
        return min(ix(start) for _, ix, _ in self.entries)

    def families(self) -> set[str]:
        return {f for f, _, _ in self.entries}


def template(*entries) -> BlockTemplate:
    """Convenience constructor: entries given as (family, IndexExpr, sign)."""
    return BlockTemplate(tuple(entries))


# ---------------------------------------------------------------------------
# Word expressions


class WordExpr:
    """Base class of the symbolic word representation."""

    __slots__ = ()


@dataclass(frozen=True)
class _Empty(WordExpr):
    def __repr__(self):
        return "Empty"


EMPTY = _Empty()


@dataclass(frozen=True)
class Lit(WordExpr):
    letters: FiniteWord

    def __repr__(self):
        return f"Lit({word_str(self.letters)})"


@dataclass(frozen=True)
class Concat(WordExpr):
    parts: tuple[WordExpr, ...]

    def __repr__(self):
        return "Concat(" + ", ".join(repr(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Power(WordExpr):
    base: WordExpr
    exponent: int  # always >= 2 after normalization

    def __repr__(self):
        return f"Power({self.base!r}, {self.exponent})"


@dataclass(frozen=True)
class Inverse(WordExpr):
    child: WordExpr

    def __repr__(self):
        return f"Inverse({self.child!r})"


@dataclass(frozen=True)
class OmegaProd(WordExpr):
    """block(start) block(start+1) block(start+2) ... indexed by the naturals."""

    var: str
    start: int
    block: BlockTemplate

    def __repr__(self):
        return f"OmegaProd({self.var}>={self.start}, {len(self.block)} entries)"


@dataclass(frozen=True)
class LimitRec(WordExpr):
    """The recursive limit word D(v) = head(v) . D(v+1)^exponent(v)."""

    var: str
    start: int
    head: BlockTemplate
    exponent: IndexExpr

    def __repr__(self):
        return f"LimitRec({self.var}>={self.start})"

    def unit(self, start: int | None = None) -> "LimitRec":
        """The word D(start) of the same recursion, default one level deeper."""
        s = self.start + 1 if start is None else start
        return LimitRec(self.var, s, self.head, self.exponent)


# ---------------------------------------------------------------------------
# Smart constructors.  All code builds words through these, which keeps every
# expression in a normal form: concatenations are flat with merged adjacent
# literals, powers have exponent >= 2, and inverses sit only on OmegaProd and
# LimitRec nodes.


def lit(letters: Iterable[Letter]) -> WordExpr:
    t = tuple(letters)
    if not t:
        return EMPTY
    return Lit(t)


def concat(*parts: WordExpr) -> WordExpr:
    flat: list[WordExpr] = []
    for p in parts:
        if isinstance(p, _Empty):
            continue
        if isinstance(p, Concat):
            sub = list(p.parts)
        else:
            sub = [p]
        for q in sub:
            if isinstance(q, _Empty):
                continue
            if flat and isinstance(flat[-1], Lit) and isinstance(q, Lit):
                flat[-1] = Lit(flat[-1].letters + q.letters)
            else:
                flat.append(q)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def power(base: WordExpr, exponent: int) -> WordExpr:
    if exponent == 0 or isinstance(base, _Empty):
        return EMPTY
    if exponent < 0:
        return inverse(power(base, -exponent))
    if exponent == 1:
        return base
    if isinstance(base, Power):
        return Power(base.base, base.exponent * exponent)
    return Power(base, exponent)


def inverse(w: WordExpr) -> WordExpr:
    if isinstance(w, _Empty):
        return EMPTY
    if isinstance(w, Inverse):
        return w.child
    if isinstance(w, Lit):
        return Lit(invert_finite(w.letters))
    if isinstance(w, Concat):
        return concat(*(inverse(p) for p in reversed(w.parts)))
    if isinstance(w, Power):
        return power(inverse(w.base), w.exponent)
    return Inverse(w)


def omega_prod(var: str, start: int, block: BlockTemplate) -> WordExpr:
    if start < 1:
        raise ValueError("product start must be >= 1")
    if block.min_index_at(start) < 1:
        raise ValueError("index template not positive over the product range")
    return OmegaProd(var, start, block)


def limit_rec(var: str, start: int, head: BlockTemplate, exponent: IndexExpr) -> WordExpr:
    if start < 1:
        raise ValueError("recursion start must be >= 1")
    if head.min_index_at(start) < 1:
        raise ValueError("index template not positive over the recursion range")
    if exponent(start) < 1 or (exponent.coeff == 0 and exponent.offset < 1):
        raise ValueError("exponent rule must stay >= 1")
    if exponent == IndexExpr(0, 1):
        # a constant exponent of one degenerates to a plain infinite product
        return OmegaProd(var, start, head)
    return LimitRec(var, start, head, exponent)


def atoms(w: WordExpr) -> tuple[WordExpr, ...]:
    """The flat atom sequence of a normalized expression."""
    if isinstance(w, _Empty):
        return ()
    if isinstance(w, Concat):
        return w.parts
    return (w,)


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class TriVerdict:
    """Uniform answer type: Yes, No with a finite witness, or Unknown with the
    index bound up to which the check was certified."""

    kind: str  # "yes" | "no" | "unknown"
    witness: object = None
    bound: int | None = None

    @property
    def is_yes(self):
        return self.kind == "yes"

    @property
    def is_no(self):
        return self.kind == "no"

    @property
    def is_unknown(self):
        return self.kind == "unknown"

    def __repr__(self):
        if self.kind == "yes":
            return "Yes" if self.witness is None else f"Yes({self.witness!r})"
        if self.kind == "no":
            return f"No({self.witness!r})"
        return f"Unknown({self.bound})"


YES = TriVerdict("yes")


def yes(witness=None) -> TriVerdict:
    return TriVerdict("yes", witness)


def no(witness) -> TriVerdict:
    return TriVerdict("no", witness)


def unknown(bound: int) -> TriVerdict:
    return TriVerdict("unknown", None, bound)


# ---------------------------------------------------------------------------
# Restrictedness


def check_restricted(w: WordExpr) -> TriVerdict:
    """Decide whether every concrete letter occurs only finitely often.

    Decidable syntactically on this fragment: an infinite product or limit
    recursion repeats a concrete letter forever exactly when some template
    entry has a constant index (coefficient zero).  The No verdict names the
    offending letter.
    """
    if isinstance(w, (_Empty, Lit)):
        return YES
    if isinstance(w, Concat):
        for p in w.parts:
            v = check_restricted(p)
            if not v.is_yes:
                return v
        return YES
    if isinstance(w, (Power, Inverse)):
        return check_restricted(w.base if isinstance(w, Power) else w.child)
    if isinstance(w, OmegaProd):
        for fam, ix, _ in w.block.entries:
            if ix.coeff == 0:
                return no(Name(fam, ix.offset))
        return YES
    if isinstance(w, LimitRec):
        for fam, ix, _ in w.head.entries:
            if ix.coeff == 0:
                return no(Name(fam, ix.offset))
        return YES
    raise TypeError(f"not a word expression: {w!r}")


def require_restricted(w: WordExpr) -> None:
    v = check_restricted(w)
    if not v.is_yes:
        raise NotRestricted(v.witness)


# ---------------------------------------------------------------------------
# Truncation, projection, counting


def truncate(w: WordExpr, n: int) -> FiniteWord:
    """Finite approximation: expand product blocks with variable <= n and
    recursion depth <= n.  Monotone in n (earlier truncations embed later)."""
    if isinstance(w, _Empty):
        return ()
    if isinstance(w, Lit):
        return w.letters
    if isinstance(w, Concat):
        out: list[Letter] = []
        for p in w.parts:
            out.extend(truncate(p, n))
        return tuple(out)
    if isinstance(w, Power):
        return truncate(w.base, n) * w.exponent
    if isinstance(w, Inverse):
        return invert_finite(truncate(w.child, n))
    if isinstance(w, OmegaProd):
        out = []
        for v in range(w.start, n + 1):
            out.extend(w.block.instantiate(v))
        return tuple(out)
    if isinstance(w, LimitRec):
        def rec(v: int) -> tuple:
            if v > n:
                return ()
            return w.head.instantiate(v) + rec(v + 1) * w.exponent(v)

        return rec(w.start)
    raise TypeError(f"not a word expression: {w!r}")


def _solved_blocks(block: BlockTemplate, start: int, names) -> list[int]:
    hits = set()
    for fam, ix, _ in block.entries:
        for nm in names:
            if nm.family != fam:
                continue
            v = ix.solve(nm.index, start)
            if v is not None:
                hits.add(v)
    return sorted(hits)


def _project(w: WordExpr, names: frozenset) -> tuple:
    if isinstance(w, _Empty):
        return ()
    if isinstance(w, Lit):
        return tuple(x for x in w.letters if x.name in names)
    if isinstance(w, Concat):
        out: list[Letter] = []
        for p in w.parts:
            out.extend(_project(p, names))
        return tuple(out)
    if isinstance(w, Power):
        return _project(w.base, names) * w.exponent
    if isinstance(w, Inverse):
        return invert_finite(_project(w.child, names))
    if isinstance(w, OmegaProd):
        out = []
        for v in _solved_blocks(w.block, w.start, names):
            out.extend(x for x in w.block.instantiate(v) if x.name in names)
        return tuple(out)
    if isinstance(w, LimitRec):
        hits = _solved_blocks(w.head, w.start, names)
        if not hits:
            return ()
        top = hits[-1]

        def rec(v: int) -> tuple:
            if v > top:
                return ()
            own = tuple(x for x in w.head.instantiate(v) if x.name in names)
            return own + rec(v + 1) * w.exponent(v)

        return rec(w.start)
    raise TypeError(f"not a word expression: {w!r}")


def project(w: WordExpr, names: Iterable[Name]) -> FiniteWord:
    """The finite word obtained by deleting all letters outside ``names``.

    For symbolic nodes the finitely many contributing block instances are
    found by solving the affine index equations.
    """
    require_restricted(w)
    return _project(w, frozenset(names))


def exponent_sum(w: WordExpr, name: Name) -> int:
    """Signed occurrence count of a letter name."""
    return sum(x.sign for x in project(w, [name]))


def occurrence_count(w: WordExpr, name: Name) -> int:
    return len(project(w, [name]))


def mentioned_names(w: WordExpr, max_index: int) -> set[Name]:
    """All concrete letter names with index <= max_index that occur in ``w``."""
    out: set[Name] = set()

    def walk(e: WordExpr):
        if isinstance(e, _Empty):
            return
        if isinstance(e, Lit):
            out.update(x.name for x in e.letters if x.name.index <= max_index)
        elif isinstance(e, Concat):
            for p in e.parts:
                walk(p)
        elif isinstance(e, Power):
            walk(e.base)
        elif isinstance(e, Inverse):
            walk(e.child)
        elif isinstance(e, (OmegaProd, LimitRec)):
            block = e.block if isinstance(e, OmegaProd) else e.head
            for fam, ix, _ in block.entries:
                if ix.coeff == 0:
                    if 1 <= ix.offset <= max_index:
                        out.add(Name(fam, ix.offset))
                else:
                    v = e.start
                    while ix(v) <= max_index:
                        out.add(Name(fam, ix(v)))
                        v += 1
        else:
            raise TypeError(f"not a word expression: {e!r}")

    walk(w)
    return out


def is_finite_expr(w: WordExpr) -> bool:
    """Whether the expression denotes a finite word."""
    if isinstance(w, (_Empty, Lit)):
        return True
    if isinstance(w, Concat):
        return all(is_finite_expr(p) for p in w.parts)
    if isinstance(w, Power):
        return is_finite_expr(w.base)
    if isinstance(w, Inverse):
        return is_finite_expr(w.child)
    return False


def as_finite(w: WordExpr) -> FiniteWord:
    """The letter tuple of a finite expression."""
    if not is_finite_expr(w):
        raise ValueError("expression denotes an infinite word")
    return truncate(w, 0)


def expr_of_finite(w: FiniteWord) -> WordExpr:
    return lit(w)
