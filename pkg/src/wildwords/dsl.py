"""Text syntax for word expressions.

    word     := factor*
    factor   := letter | letter "^-1" | "(" word ")" ("^" int)?
              | "inv(" word ")" | "[" word "," word "]"
              | "prod" IDENT "=" INT ".." "{" template "}"
              | "limit" IDENT "=" INT ".." "{" template "self^(" index ")" "}"
    letter   := FAMILY "[" index "]"
    index    := INT | IDENT | INT "*" IDENT (("+"|"-") INT)?
              | IDENT ("+"|"-") INT

The commutator sugar [a, b] expands to inv(a) inv(b) a b.  Product and limit
bodies must flatten to a sequence of letters indexed by the single binder
variable.  Parsing and printing are mutually inverse on parsed trees.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .words import (EMPTY, BlockTemplate, Concat, IndexExpr, Inverse, Letter,
                    LimitRec, Lit, Name, OmegaProd, Power, WordExpr, concat,
                    inverse, letter, limit_rec, lit, omega_prod, power,
                    template)

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<dots>\.\.)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<sym>[()\[\]{}^*+\-=,])
""", re.VERBOSE)

_KEYWORDS = {"prod", "limit", "inv", "self"}


@dataclass(frozen=True)
class _Token:
    kind: str  # 'ident' | 'int' | 'sym' | 'dots' | 'end'
    text: str
    line: int
    column: int


def _tokenize(text: str):
    tokens = []
    line = 1
    col = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(line, col, "a token", text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, expected: str):
        t = self.peek()
        raise ParseError(t.line, t.column, expected, t.text or "end of input")

    def expect(self, kind: str, text: str | None = None) -> _Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            self.fail(text or kind)
        return self.next()

    def at_sym(self, s: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text == s

    def at_keyword(self, kw: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text == kw

    # -- integers ---------------------------------------------------------

    def parse_int(self) -> int:
        neg = False
        if self.at_sym("-"):
            self.next()
            neg = True
        t = self.expect("int")
        v = int(t.text)
        return -v if neg else v

    # -- index expressions -------------------------------------------------

    def parse_index(self, var: str | None) -> IndexExpr:
        t = self.peek()
        if t.kind == "int" or self.at_sym("-"):
            value = self.parse_int()
            if self.at_sym("*"):
                self.next()
                name = self.expect("ident").text
                self._check_var(name, var, t)
                offset = 0
                if self.at_sym("+") or self.at_sym("-"):
                    sign = 1 if self.next().text == "+" else -1
                    offset = sign * int(self.expect("int").text)
                return IndexExpr(value, offset)
            return IndexExpr(0, value)
        if t.kind == "ident":
            name = self.next().text
            self._check_var(name, var, t)
            offset = 0
            if self.at_sym("+") or self.at_sym("-"):
                sign = 1 if self.next().text == "+" else -1
                offset = sign * int(self.expect("int").text)
            return IndexExpr(1, offset)
        self.fail("an index expression")

    def _check_var(self, name: str, var: str | None, tok: _Token):
        if var is None:
            raise ParseError(tok.line, tok.column,
                             "a constant index outside binder scope", name)
        if name != var:
            raise ParseError(tok.line, tok.column, f"the binder variable {var!r}", name)

    # -- letters -------------------------------------------------------------

    def parse_letter_entry(self, var: str | None):
        """One letter as (family, IndexExpr, sign)."""
        fam_tok = self.expect("ident")
        fam = fam_tok.text
        if fam in _KEYWORDS:
            raise ParseError(fam_tok.line, fam_tok.column, "a family name", fam)
        self.expect("sym", "[")
        ix = self.parse_index(var)
        self.expect("sym", "]")
        sign = 1
        if self.at_sym("^"):
            save = self.i
            self.next()
            if self.at_sym("-"):
                self.next()
                one = self.expect("int")
                if one.text != "1":
                    raise ParseError(one.line, one.column, "1 after ^- on a letter", one.text)
                sign = -1
            else:
                # an exponent on a bare letter other than -1 is not in the
                # grammar; restore and let the caller handle it
                self.i = save
        return fam, ix, sign

    # -- template bodies -------------------------------------------------------

    def parse_template_entries(self, var: str, stop_idents=("self",)):
        entries: list = []
        while True:
            t = self.peek()
            if t.kind == "sym" and t.text == "}":
                break
            if t.kind == "ident" and t.text in stop_idents:
                break
            entries.extend(self.parse_template_factor(var))
        return entries

    def parse_template_factor(self, var: str):
        t = self.peek()
        if self.at_sym("["):
            self.next()
            first = self.parse_template_entries_until(var, ",")
            self.expect("sym", ",")
            second = self.parse_template_entries_until(var, "]")
            self.expect("sym", "]")
            invf = [(f, ix, -s) for (f, ix, s) in reversed(first)]
            invs = [(f, ix, -s) for (f, ix, s) in reversed(second)]
            return invf + invs + first + second
        if self.at_keyword("inv"):
            self.next()
            self.expect("sym", "(")
            inner = self.parse_template_entries_until(var, ")")
            self.expect("sym", ")")
            return [(f, ix, -s) for (f, ix, s) in reversed(inner)]
        if self.at_sym("("):
            self.next()
            inner = self.parse_template_entries_until(var, ")")
            self.expect("sym", ")")
            if self.at_sym("^"):
                self.next()
                n = self.parse_int()
                if abs(n) > 64:
                    raise ParseError(t.line, t.column,
                                     "a template exponent of magnitude <= 64", str(n))
                if n < 0:
                    inner = [(f, ix, -s) for (f, ix, s) in reversed(inner)]
                    n = -n
                return inner * n
            return inner
        if t.kind == "ident" and t.text in ("prod", "limit"):
            raise ParseError(t.line, t.column,
                             "a flat letter sequence (no nested products)", t.text)
        if t.kind == "ident":
            return [self.parse_letter_entry(var)]
        self.fail("a letter, [ , inv( or (")

    def parse_template_entries_until(self, var: str, closer: str):
        entries: list = []
        while not (self.at_sym(closer)):
            t = self.peek()
            if t.kind == "end":
                self.fail(f"{closer!r}")
            if closer != "," and self.at_sym(","):
                self.fail(f"{closer!r}")
            entries.extend(self.parse_template_factor(var))
        return entries

    # -- words ------------------------------------------------------------------

    def parse_word(self, closers=()) -> WordExpr:
        parts: list[WordExpr] = []
        while True:
            t = self.peek()
            if t.kind == "end":
                break
            if t.kind == "sym" and t.text in closers:
                break
            parts.append(self.parse_factor())
        return concat(*parts)

    def parse_factor(self) -> WordExpr:
        t = self.peek()
        if self.at_sym("["):
            self.next()
            first = self.parse_word(closers=(",",))
            self.expect("sym", ",")
            second = self.parse_word(closers=("]",))
            self.expect("sym", "]")
            return concat(inverse(first), inverse(second), first, second)
        if self.at_sym("("):
            self.next()
            inner = self.parse_word(closers=(")",))
            self.expect("sym", ")")
            if self.at_sym("^"):
                self.next()
                return power(inner, self.parse_int())
            return inner
        if self.at_keyword("inv"):
            self.next()
            self.expect("sym", "(")
            inner = self.parse_word(closers=(")",))
            self.expect("sym", ")")
            return inverse(inner)
        if self.at_keyword("prod"):
            self.next()
            var = self.expect("ident").text
            self.expect("sym", "=")
            start = self.parse_int()
            self.expect("dots")
            self.expect("sym", "{")
            entries = self.parse_template_entries(var, stop_idents=())
            self.expect("sym", "}")
            if not entries:
                raise ParseError(t.line, t.column, "a nonempty product body", "}")
            return omega_prod(var, start, BlockTemplate(tuple(entries)))
        if self.at_keyword("limit"):
            self.next()
            var = self.expect("ident").text
            self.expect("sym", "=")
            start = self.parse_int()
            self.expect("dots")
            self.expect("sym", "{")
            entries = self.parse_template_entries(var, stop_idents=("self",))
            head_tok = self.peek()
            if not entries:
                raise ParseError(head_tok.line, head_tok.column,
                                 "a nonempty limit head", head_tok.text)
            self.expect("ident", "self")
            self.expect("sym", "^")
            self.expect("sym", "(")
            exp = self.parse_index(var)
            self.expect("sym", ")")
            self.expect("sym", "}")
            return limit_rec(var, start, BlockTemplate(tuple(entries)), exp)
        if t.kind == "ident":
            fam, index, sign = self.parse_letter_entry_concrete()
            return lit((Letter(Name(fam, index), sign),))
        self.fail("a word factor")

    def parse_letter_entry_concrete(self):
        """A letter with a constant index, outside any binder."""
        fam_tok = self.peek()
        fam, ix, sign = self.parse_letter_entry(var=None)
        if ix.coeff != 0:
            raise ParseError(fam_tok.line, fam_tok.column,
                             "a constant letter index", "variable")
        if ix.offset < 1:
            raise ParseError(fam_tok.line, fam_tok.column,
                             "a positive letter index", str(ix.offset))
        return fam, ix.offset, sign


def parse_word(text: str) -> WordExpr:
    """Parse DSL text into a word expression."""
    p = _Parser(text)
    w = p.parse_word()
    t = p.peek()
    if t.kind != "end":
        raise ParseError(t.line, t.column, "end of input", t.text)
    return w


def _index_str(ix: IndexExpr, var: str) -> str:
    return ix.__str__(var)


def _entry_str(entry, var: str) -> str:
    fam, ix, sign = entry
    return f"{fam}[{_index_str(ix, var)}]" + ("^-1" if sign < 0 else "")


def print_word(w: WordExpr) -> str:
    """Canonical DSL text; parsing it back restores the expression tree."""
    if isinstance(w, type(EMPTY)):
        return ""
    if isinstance(w, Lit):
        return " ".join(f"{x.name.family}[{x.name.index}]" + ("^-1" if x.sign < 0 else "")
                        for x in w.letters)
    if isinstance(w, Concat):
        return " ".join(print_word(p) for p in w.parts)
    if isinstance(w, Power):
        return f"({print_word(w.base)})^{w.exponent}"
    if isinstance(w, Inverse):
        return f"inv({print_word(w.child)})"
    if isinstance(w, OmegaProd):
        body = " ".join(_entry_str(e, w.var) for e in w.block.entries)
        return f"prod {w.var}={w.start}..{{ {body} }}"
    if isinstance(w, LimitRec):
        body = " ".join(_entry_str(e, w.var) for e in w.head.entries)
        return (f"limit {w.var}={w.start}..{{ {body} "
                f"self^({_index_str(w.exponent, w.var)}) }}")
    raise TypeError(f"not a word expression: {w!r}")
