"""Operation templates and the expansion of tree monomials.

An operation is bound to one of three kinds of template:

* :class:`GroupAlgebraOp` -- an element of the group algebra, expanding into
  associative words;
* :class:`DiOpTemplate` -- a combination of hatted words, expanding into
  normal forms of the free associative dialgebra;
* :class:`NonassocOpTemplate` -- a combination of binary trees, expanding
  into the free nonassociative algebra with one product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .linalg import DenseMatrix, Field
from .monomials import (DiMonomial, Node, Tree, TreeBasis, all_perms, enumerate_association_types,
                        enumerate_di_monomials, fill, format_tree, leaves, letter)
from .poly import MultiPoly, format_monomial, parse_poly


class ArityError(ValueError):
    pass


class UnboundOperationError(KeyError):
    pass


def _check_arity(arity: int, args: Sequence) -> None:
    if len(args) != arity:
        raise ArityError(f"operation of arity {arity} given {len(args)} arguments")


@dataclass(frozen=True)
class GroupAlgebraOp:
    """``sum x_s a_{s(1)} ... a_{s(n)}``; ``terms`` maps permutation -> coefficient."""

    arity: int
    terms: Mapping[tuple, object]

    def __post_init__(self):
        for s in self.terms:
            if sorted(s) != list(range(self.arity)):
                raise ValueError(f"{s} is not a permutation of degree {self.arity}")

    @classmethod
    def parse(cls, text: str) -> GroupAlgebraOp:
        """From a signed word list such as ``"abc+cba"`` or ``"ab-ba"``."""
        p = parse_poly(text, style="word")
        arity = len(next(iter(p)))
        return cls(arity, dict(p.items()))

    def __str__(self) -> str:
        return _format_terms((("".join(letter(i) for i in s), c) for s, c in self.terms.items()))

    def substitute(self, args: Sequence[MultiPoly]) -> MultiPoly:
        _check_arity(self.arity, args)
        out = MultiPoly()
        for s, x in self.terms.items():
            for combo in itertools.product(*(args[i].items() for i in s)):
                word = tuple(v for w, _ in combo for v in w)
                c = x
                for _, k in combo:
                    c = c * k
                out.add_term(word, c)
        return out


@dataclass(frozen=True)
class DiOpTemplate:
    """``terms`` maps (permutation, hat slot) -> coefficient.

    The key ``(s, j)`` stands for ``a_{s(1)} ... ^a_{s(j)} ... a_{s(n)}``
    with ``j`` 0-based.
    """

    arity: int
    terms: Mapping[tuple, object]

    def __post_init__(self):
        for s, j in self.terms:
            if sorted(s) != list(range(self.arity)) or not 0 <= j < self.arity:
                raise ValueError(f"bad template term {(s, j)}")

    @classmethod
    def parse(cls, text: str) -> DiOpTemplate:
        p = parse_poly(text, style="di")
        arity = len(next(iter(p)).word)
        return cls(arity, {(m.word, m.center): c for m, c in p.items()})

    def as_poly(self) -> MultiPoly:
        return MultiPoly((DiMonomial(s, j), c) for (s, j), c in self.terms.items())

    def __str__(self) -> str:
        return _format_terms((format_monomial(DiMonomial(s, j)), c) for (s, j), c in self.terms.items())

    def substitute(self, args: Sequence[MultiPoly]) -> MultiPoly:
        """Concatenate argument words; the center comes from the hatted argument."""
        _check_arity(self.arity, args)
        out = MultiPoly()
        for (s, j), x in self.terms.items():
            for combo in itertools.product(*(args[i].items() for i in s)):
                word: list = []
                c = x
                ctr = None
                for slot, (m, k) in enumerate(combo):
                    if slot == j:
                        ctr = len(word) + m.center
                    word.extend(m.word)
                    c = c * k
                out.add_term(DiMonomial(tuple(word), ctr), c)
        return out


@dataclass(frozen=True)
class NonassocOpTemplate:
    """``terms`` maps binary trees on leaves ``0..n-1`` -> coefficient."""

    arity: int
    terms: Mapping[Tree, object]

    def __post_init__(self):
        for t in self.terms:
            if sorted(leaves(t)) != list(range(self.arity)):
                raise ValueError(f"template term {format_tree(t)} is not multilinear of degree {self.arity}")

    @classmethod
    def parse(cls, text: str, product_op: str = "m") -> NonassocOpTemplate:
        p = parse_poly(text, style="product", product_op=product_op)
        arity = len(leaves(next(iter(p))))
        return cls(arity, dict(p.items()))

    def __str__(self) -> str:
        return _format_terms((format_monomial(t, "product"), c) for t, c in self.terms.items())

    def substitute(self, args: Sequence[MultiPoly]) -> MultiPoly:
        """Graft the argument polynomials into the template leaves."""
        _check_arity(self.arity, args)
        out = MultiPoly()
        for t, x in self.terms.items():
            for combo in itertools.product(*(a.items() for a in args)):
                c = x
                for _, k in combo:
                    c = c * k
                out.add_term(_graft(t, [m for m, _ in combo]), c)
        return out


def _graft(t: Tree, parts: Sequence[Tree]) -> Tree:
    if not isinstance(t, Node):
        return parts[t]
    return Node(t.op, tuple(_graft(a, parts) for a in t.args))


def _format_terms(items) -> str:
    out = []
    for i, (body, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        out.append((("-" if sign == "-" else "") if i == 0 else f" {sign} ") + mag + body)
    return "".join(out) or "0"


Template = GroupAlgebraOp | DiOpTemplate | NonassocOpTemplate


def _leaf_poly(x: int, kind: type) -> MultiPoly:
    if kind is DiOpTemplate:
        return MultiPoly({DiMonomial((x,), 0): 1})
    if kind is GroupAlgebraOp:
        return MultiPoly({(x,): 1})
    return MultiPoly({x: 1})


def _kind(bindings: Mapping[str, Template]) -> type:
    kinds = {type(b) for b in bindings.values()}
    if len(kinds) != 1:
        raise ValueError("all bindings must expand into the same free structure")
    return kinds.pop()


def expand(t: Tree, bindings: Mapping[str, Template]) -> MultiPoly:
    """Expand a tree monomial by substituting templates bottom-up."""
    kind = _kind(bindings)

    def go(x) -> MultiPoly:
        if not isinstance(x, Node):
            return _leaf_poly(x, kind)
        try:
            tmpl = bindings[x.op]
        except KeyError:
            raise UnboundOperationError(f"operation {x.op!r} has no binding") from None
        return tmpl.substitute([go(a) for a in x.args])

    return go(t)


def expand_poly(p: MultiPoly, bindings: Mapping[str, Template]) -> MultiPoly:
    out = MultiPoly()
    for m, c in p.items():
        for m2, c2 in expand(m, bindings).items():
            out.add_term(m2, c * c2)
    return out


def substitute_di(template: DiOpTemplate, args: Sequence[MultiPoly]) -> MultiPoly:
    return template.substitute(args)


def substitute_nonassoc(template: NonassocOpTemplate, args: Sequence[MultiPoly]) -> MultiPoly:
    return template.substitute(args)


def erase_centers(p: MultiPoly) -> MultiPoly:
    """Forget the hats: dialgebra normal forms -> associative words."""
    return p.map_monomials(lambda m: m.word)


# --------------------------------------------------------------------------
# target bases


class DiBasis:
    """Normal forms of degree n, ordered by center slot then word."""

    def __init__(self, n: int):
        self.degree = n
        self.monomials = enumerate_di_monomials(n)
        self._index = {m: i for i, m in enumerate(self.monomials)}

    def __len__(self) -> int:
        return len(self.monomials)

    def index(self, m: DiMonomial) -> int:
        return self._index[m]

    def label(self, i: int) -> str:
        return format_monomial(self.monomials[i])


class WordBasis:
    """Associative multilinear words of degree n in lexicographic order."""

    def __init__(self, n: int):
        self.degree = n
        self.words = all_perms(n)
        self._index = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    def index(self, w: tuple) -> int:
        return self._index[w]

    def label(self, i: int) -> str:
        return format_monomial(self.words[i])


def binary_basis(n: int, op: str = "m") -> TreeBasis:
    """All binary association types of degree n, no symmetries."""
    return TreeBasis(enumerate_association_types({op: 2}, n))


def target_basis(bindings: Mapping[str, Template], n: int):
    kind = _kind(bindings)
    if kind is DiOpTemplate:
        return DiBasis(n)
    if kind is GroupAlgebraOp:
        return WordBasis(n)
    products = set()
    for tmpl in bindings.values():
        for t in tmpl.terms:
            stack = [t]
            while stack:
                x = stack.pop()
                if isinstance(x, Node):
                    products.add(x.op)
                    stack.extend(x.args)
    if len(products) != 1:
        raise ValueError(f"nonassociative templates must share one product, got {sorted(products)}")
    return binary_basis(n, products.pop())


# --------------------------------------------------------------------------
# expansion matrices


def poly_to_vector(p: MultiPoly, basis, field: Field) -> np.ndarray | list:
    """Coefficient vector of ``p`` in ``basis`` (residues, or Fractions over QQ)."""
    from .linalg import PrimeField

    if isinstance(field, PrimeField):
        v = np.zeros(len(basis), dtype=np.int64)
        for m, c in p.items():
            j = basis.index(m)
            v[j] = (v[j] + field.convert(c)) % field.p
        return v
    v = [Fraction(0)] * len(basis)
    for m, c in p.items():
        v[basis.index(m)] += Fraction(c)
    return v


def vector_to_poly(v, basis, field: Field) -> MultiPoly:
    """Inverse of :func:`poly_to_vector` using signed residues."""
    out = MultiPoly()
    for j, x in enumerate(v):
        if x:
            c = field.signed(x)
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            out.add_term(basis.monomial(j) if hasattr(basis, "monomial") else basis.monomials[j], c)
    return out


@dataclass(eq=False)
class ExpansionMatrix:
    """Entry (i, j) is the coefficient of target monomial i in the expansion of source j."""

    rows: list[str]
    cols: list[str]
    matrix: DenseMatrix
    source: TreeBasis = field(repr=False, default=None)
    target: object = field(repr=False, default=None)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def to_tsv(self) -> str:
        lines = ["\t" + "\t".join(self.cols)]
        for label, row in zip(self.rows, self.matrix.signed_rows()):
            lines.append(label + "\t" + "\t".join(str(x) for x in row))
        return "\n".join(lines) + "\n"


def build_expansion_matrix(source: TreeBasis, bindings: Mapping[str, Template], field: Field,
                           target=None) -> ExpansionMatrix:
    """Expand every source column; zero columns are kept."""
    missing = {t.op for t in _nodes_of_types(source.types)} - set(bindings)
    if missing:
        raise UnboundOperationError(f"no binding for operation(s) {sorted(missing)}")
    target = target or target_basis(bindings, source.degree)
    cols = [poly_to_vector(expand(source.monomial(j), bindings), target, field) for j in range(len(source))]
    data = np.array(cols, dtype=object if not hasattr(field, "p") else np.int64).T
    if data.ndim != 2:
        data = data.reshape(len(target), len(source))
    m = DenseMatrix(field, np.ascontiguousarray(data))
    return ExpansionMatrix([target.label(i) for i in range(len(target))],
                           [source.label(j) for j in range(len(source))], m, source, target)


def _nodes_of_types(types) -> list[Node]:
    out = []
    stack = list(types)
    while stack:
        x = stack.pop()
        if isinstance(x, Node):
            out.append(x)
            stack.extend(x.args)
    return out


def single_letter_args(n: int, kind: type) -> list[MultiPoly]:
    return [_leaf_poly(i, kind) for i in range(n)]


def fill_types(types, word) -> list[Tree]:
    return [fill(t, word) for t in types]
