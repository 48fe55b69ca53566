"""Sparse linear combinations of monomials, and their text forms.

Four text styles are understood, all sharing the same term syntax
(``[+|-] [coef[*]] monomial``, coefficients integer or ``p/q``):

``tree``     ``op1(op2(a,b,c),d,e) - op1(a,b,c)``
``bracket``  ``{a,b,{c,d,e}_1}_1``, ``((a,b,c)_1,d,e)_2``, ``<a,b,c>_2``;
             an unsubscripted bracket is the bare operation ``op``
``product``  ``((ab)c)d - a(bc)``, one binary product by juxtaposition
``di``       ``^abc + cb^a`` (dialgebra monomials, caret marks the center)
``word``     ``abc + cba`` (associative words)

An ``=`` sign turns ``lhs = rhs`` into ``lhs - rhs``; chains ``x = y = z``
give one identity per link.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable

from .monomials import DiMonomial, Node, Tree, format_juxtaposed, format_tree, letter, relabel, relabel_tree, var

Coeff = int | Fraction


class MultiPoly(dict):
    """Monomial -> nonzero coefficient."""

    @classmethod
    def of(cls, items: Iterable[tuple[object, Coeff]]) -> MultiPoly:
        out = cls()
        for m, c in items:
            out.add_term(m, c)
        return out

    def add_term(self, m, c: Coeff) -> None:
        c = self.get(m, 0) + c
        if c:
            self[m] = c
        else:
            self.pop(m, None)

    def __add__(self, other: MultiPoly) -> MultiPoly:
        out = MultiPoly(self)
        for m, c in other.items():
            out.add_term(m, c)
        return out

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + other * -1

    def __mul__(self, k: Coeff) -> MultiPoly:
        if not k:
            return MultiPoly()
        return MultiPoly((m, c * k) for m, c in self.items())

    __rmul__ = __mul__

    def __neg__(self) -> MultiPoly:
        return self * -1

    def map_monomials(self, f: Callable) -> MultiPoly:
        return MultiPoly.of((f(m), c) for m, c in self.items())

    def relabel(self, s: tuple) -> MultiPoly:
        """Apply a permutation of the variables to every monomial."""
        def go(m):
            if isinstance(m, DiMonomial):
                return DiMonomial(relabel(m.word, s), m.center)
            if isinstance(m, tuple) and not isinstance(m, Node):
                return relabel(m, s)
            return relabel_tree(m, s)
        return self.map_monomials(go)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"


# --------------------------------------------------------------------------
# formatting


def format_monomial(m, style: str = "tree") -> str:
    if isinstance(m, DiMonomial):
        return "".join(("^" if i == m.center else "") + letter(x) for i, x in enumerate(m.word))
    if isinstance(m, tuple) and not isinstance(m, Node):
        return "".join(letter(x) for x in m)
    if style == "product":
        return format_juxtaposed(m)
    return format_tree(m)


def format_poly(p: MultiPoly, style: str = "tree", order: Callable | None = None) -> str:
    if not p:
        return "0"
    items = list(p.items()) if order is None else sorted(p.items(), key=lambda kv: order(kv[0]))
    out = []
    for i, (m, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = format_monomial(m, style)
        if mag != 1:
            body = f"{mag}*{body}"
        out.append((("-" if sign == "-" else "") if i == 0 else f" {sign} ") + body)
    return "".join(out)


def format_identity(p: MultiPoly, style: str = "tree") -> list[str]:
    """Signed list of monomial strings, e.g. ``["+op1(a,b,c)", "-op1(c,b,a)"]``."""
    return [("-" if c < 0 else "+") + ("" if abs(c) == 1 else f"{abs(c)}*") + format_monomial(m, style)
            for m, c in p.items()]


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(.))")


class ParseError(ValueError):
    pass


class _Parser:
    def __init__(self, text: str, style: str, op_prefix: str, product_op: str):
        self.style = style
        self.op_prefix = op_prefix
        self.product_op = product_op
        self.toks: list[tuple[str, str]] = []
        for num, ident, caret, other in _TOKEN.findall(text):
            if num:
                self.toks.append(("num", num))
            elif ident:
                if style in ("tree",):
                    self.toks.append(("ident", ident))
                else:
                    self.toks.extend(("ident", ch) for ch in ident)
            elif caret:
                self.toks.append(("sym", "^"))
            elif other.strip():
                self.toks.append(("sym", other))
        self.i = 0
        self.text = text

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None)

    def take(self, value: str | None = None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'} at token {self.i} in {self.text!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    # identities ----------------------------------------------------------
    def identities(self) -> list[MultiPoly]:
        sides = [self.expr()]
        while not self.at_end() and self.peek()[1] == "=":
            self.take("=")
            sides.append(self.expr())
        if not self.at_end():
            raise ParseError(f"trailing input at token {self.i} in {self.text!r}")
        if len(sides) == 1:
            return sides
        return [a - b for a, b in zip(sides, sides[1:])]

    def expr(self) -> MultiPoly:
        out = MultiPoly()
        sign = 1
        first = True
        while True:
            tok = self.peek()
            if tok[1] in ("+", "-"):
                self.take()
                sign = -1 if tok[1] == "-" else 1
            elif not first:
                break
            coef = self.coefficient()
            out.add_term(self.monomial(), sign * coef)
            first = False
            sign = 1
            if self.at_end() or self.peek()[1] not in ("+", "-"):
                break
        return out

    def coefficient(self) -> Coeff:
        if self.peek()[0] != "num":
            return 1
        c = Fraction(int(self.take()[1]))
        if self.peek()[1] == "/":
            self.take("/")
            c /= int(self.take()[1])
        if self.peek()[1] == "*":
            self.take("*")
        return c.numerator if c.denominator == 1 else c

    # monomials -----------------------------------------------------------
    def monomial(self):
        if self.style == "di":
            return self.di_monomial()
        if self.style == "word":
            return self.word()
        if self.style == "product":
            return self.product()
        return self.factor()

    def di_monomial(self) -> DiMonomial:
        word, center = [], None
        while self.peek()[0] is not None and self.peek()[1] not in ("+", "-", "="):
            tok = self.take()
            if tok[1] == "^":
                center = len(word)
            else:
                word.append(var(tok[1]))
        if center is None:
            raise ParseError(f"dialgebra monomial without center in {self.text!r}")
        return DiMonomial(tuple(word), center)

    def word(self) -> tuple:
        word = []
        while self.peek()[0] == "ident":
            word.append(var(self.take()[1]))
        if not word:
            raise ParseError(f"empty word in {self.text!r}")
        return tuple(word)

    def product(self) -> Tree:
        factors = []
        while True:
            kind, val = self.peek()
            if kind == "ident":
                self.take()
                factors.append(var(val))
            elif val == "(":
                self.take("(")
                factors.append(self.product())
                self.take(")")
            else:
                break
        if len(factors) == 1:
            return factors[0]
        if len(factors) == 2:
            return Node(self.product_op, tuple(factors))
        raise ParseError(f"ambiguous juxtaposition of {len(factors)} factors in {self.text!r}")

    def factor(self) -> Tree:
        kind, val = self.peek()
        if self.style == "tree":
            if kind != "ident":
                raise ParseError(f"unexpected {val!r} in {self.text!r}")
            self.take()
            if self.peek()[1] != "(":
                if len(val) != 1:
                    raise ParseError(f"variables are single letters, got {val!r}")
                return var(val)
            self.take("(")
            args = self.arglist(")")
            return Node(val, tuple(args))
        # bracket style
        if kind == "ident":
            self.take()
            return var(val)
        closing = {"{": "}", "(": ")", "<": ">"}.get(val)
        if closing is None:
            raise ParseError(f"unexpected {val!r} in {self.text!r}")
        self.take()
        args = self.arglist(closing)
        op = self.op_prefix
        if self.peek()[1] == "_":
            self.take("_")
            op = f"{self.op_prefix}{self.take()[1]}"
        return Node(op, tuple(args))

    def arglist(self, closing: str) -> list:
        args = [self.factor()]
        while self.peek()[1] == ",":
            self.take(",")
            args.append(self.factor())
        self.take(closing)
        return args


def parse_identities(text: str, style: str = "tree", op_prefix: str = "op", product_op: str = "m") -> list[MultiPoly]:
    return _Parser(text, style, op_prefix, product_op).identities()


def parse_poly(text: str, style: str = "tree", op_prefix: str = "op", product_op: str = "m") -> MultiPoly:
    polys = parse_identities(text, style, op_prefix, product_op)
    if len(polys) != 1:
        raise ParseError(f"expected a single polynomial, got a chain of {len(polys)}")
    return polys[0]


def parse_tree(text: str) -> Tree:
    p = _Parser(text, "tree", "op", "m")
    t = p.factor()
    if not p.at_end():
        raise ParseError(f"trailing input in {text!r}")
    return t


def poly_degree(p: MultiPoly) -> int:
    from .monomials import degree

    degs = set()
    for m in p:
        if isinstance(m, DiMonomial):
            degs.add(len(m.word))
        elif isinstance(m, tuple) and not isinstance(m, Node):
            degs.add(len(m))
        else:
            degs.add(degree(m))
    if len(degs) > 1:
        raise ValueError(f"inhomogeneous polynomial (degrees {sorted(degs)})")
    return degs.pop() if degs else 0


def is_multilinear(p: MultiPoly) -> bool:
    from .monomials import leaves

    vars_seen = None
    for m in p:
        if isinstance(m, DiMonomial):
            w = m.word
        elif isinstance(m, tuple) and not isinstance(m, Node):
            w = m
        else:
            w = leaves(m)
        if len(set(w)) != len(w):
            return False
        if vars_seen is None:
            vars_seen = set(w)
        elif set(w) != vars_seen:
            return False
    return True
