"""Built-in identity sets and operations, and checks against them.

Identity sets are stored as text in the usual bracket notation and parsed on
demand, so what is checked is exactly what is written here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .engine import Span, lift_to_degree, module_span, to_vectors
from .expansion import (DiOpTemplate, NonassocOpTemplate, Template, binary_basis, expand_poly,
                        poly_to_vector)
from .linalg import Field, PrimeField
from .monomials import DiMonomial, Node, Tree, TreeBasis, derive_symmetries, transposition
from .poly import MultiPoly, format_identity, parse_identities, parse_tree, poly_degree


class UnknownBuiltinError(KeyError):
    pass


@dataclass
class VarietySpec:
    name: str
    signature: dict[str, int]
    text: list[str]
    style: str = "bracket"
    product_op: str = "m"
    identities: list = field(default_factory=list)

    def __post_init__(self):
        if not self.identities:
            for line in self.text:
                self.identities.extend(parse_identities(line, self.style, product_op=self.product_op))

    def by_degree(self) -> dict[int, list[MultiPoly]]:
        out: dict[int, list[MultiPoly]] = {}
        for p in self.identities:
            out.setdefault(poly_degree(p), []).append(p)
        return out

    def to_text(self) -> str:
        """Variety file: header lines, then one identity per line in tree notation."""
        sig = " ".join(f"{k}:{v}" for k, v in self.signature.items())
        lines = [f"name: {self.name}", f"ops: {sig}", "style: tree"]
        for p in self.identities:
            lines.append(" ".join(format_identity(p)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> VarietySpec:
        header: dict[str, str] = {}
        body = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, rest = line.partition(":")
            if sep and key.strip() in ("name", "ops", "style", "product") and "(" not in key:
                header[key.strip()] = rest.strip()
            else:
                body.append(line)
        sig = {}
        for item in header.get("ops", "").split():
            op, _, arity = item.partition(":")
            sig[op] = int(arity)
        return cls(header.get("name", "custom"), sig, body, header.get("style", "tree"),
                   header.get("product", "m"))


# --------------------------------------------------------------------------
# operations

DIPRODUCT_TEXT = {"op1": "^abc + cb^a", "op2": "a^bc + c^ba", "op3": "ab^c + ^cba"}
JORDAN_TRIPLE_TEXT = {"op1": "(ab)c - (ac)b + a(bc)", "op2": "(ba)c + (bc)a - b(ac)"}
DIALGEBRA_PRODUCT_TEXT = {"op1": "^ab", "op2": "a^b"}          # left and right products
SPECIAL_JORDAN_TEXT = "^ab + b^a"                              # a -| b + b |- a


def diproducts(include_third: bool = False) -> dict[str, DiOpTemplate]:
    names = ["op1", "op2", "op3"] if include_third else ["op1", "op2"]
    return {k: DiOpTemplate.parse(DIPRODUCT_TEXT[k]) for k in names}


def jordan_triple_operations() -> dict[str, NonassocOpTemplate]:
    return {k: NonassocOpTemplate.parse(v) for k, v in JORDAN_TRIPLE_TEXT.items()}


def dialgebra_products() -> dict[str, DiOpTemplate]:
    return {k: DiOpTemplate.parse(v) for k, v in DIALGEBRA_PRODUCT_TEXT.items()}


def special_jordan_product(name: str = "m") -> dict[str, DiOpTemplate]:
    return {name: DiOpTemplate.parse(SPECIAL_JORDAN_TEXT)}


# --------------------------------------------------------------------------
# bases for two trilinear operations

TRILINEAR_TYPES = [parse_tree(s) for s in (
    "op1(op1(a,b,c),d,e)",    # 1
    "op1(a,op1(b,c,d),e)",    # 2
    "op1(a,b,op1(c,d,e))",    # 3
    "op2(op2(a,b,c),d,e)",    # 4
    "op2(a,op2(b,c,d),e)",    # 5
    "op1(op2(a,b,c),d,e)",    # 6
    "op1(a,op2(b,c,d),e)",    # 7
    "op1(a,b,op2(c,d,e))",    # 8
    "op2(op1(a,b,c),d,e)",    # 9
    "op2(a,op1(b,c,d),e)",    # 10
)]

_t = lambda i, j: transposition(5, i, j)
# symmetries assumed for the diproducts in degree 5, by type number
DIPRODUCT_SYMMETRIES = {
    1: [], 2: [_t(1, 3)], 3: [_t(2, 4)], 4: [_t(0, 2)], 5: [_t(0, 4), _t(1, 3)],
    6: [_t(0, 2)], 7: [_t(1, 3)], 8: [_t(2, 4)], 9: [], 10: [_t(0, 4)],
}

# column order for the Jordan-dialgebra operations: root operation, then
# inner operation, then position of the inner bracket
JORDAN_TRIPLE_TYPE_ORDER = [1, 2, 3, 6, 7, 8, 9, 10, 4, 5]


def diproduct_basis(which: str = "both", degree: int = 5) -> TreeBasis:
    """Symmetry-reduced diproduct monomials: ``which`` is op1, op2 or both."""
    if degree == 3:
        ops = {"op1": ["op1"], "op2": ["op2"], "both": ["op1", "op2"]}[which]
        return TreeBasis([Node(op, (None, None, None)) for op in ops])
    if degree != 5:
        raise ValueError("diproduct bases are tabulated for degrees 3 and 5")
    numbers = {"op1": [1, 2, 3], "op2": [4, 5], "both": list(range(1, 11))}[which]
    types = [TRILINEAR_TYPES[k - 1] for k in numbers]
    syms = {i: DIPRODUCT_SYMMETRIES[k] for i, k in enumerate(numbers) if which != "op1"}
    return TreeBasis(types, syms)


def jordan_triple_basis(degree: int) -> TreeBasis:
    """Monomials in the two Jordan-dialgebra trilinear operations.

    Degree 3 has no symmetry (it is what is being computed); degree 5 assumes
    the first/third symmetry of op2.
    """
    if degree == 3:
        return TreeBasis([Node("op1", (None,) * 3), Node("op2", (None,) * 3)])
    if degree != 5:
        raise ValueError("tabulated for degrees 3 and 5")
    types = [TRILINEAR_TYPES[k - 1] for k in JORDAN_TRIPLE_TYPE_ORDER]
    return TreeBasis(types, {i: derive_symmetries(t, ["op2"]) for i, t in enumerate(types)})


def two_operation_basis(degree: int) -> TreeBasis:
    """All monomials in op1, op2 (both trilinear), no symmetry."""
    from .monomials import enumerate_association_types

    return TreeBasis(enumerate_association_types({"op1": 3, "op2": 3}, degree))


# --------------------------------------------------------------------------
# identity sets

_BUILTIN_SETS: dict[str, tuple[dict, list[str], str]] = {
    "associative": ({"op": 2}, ["{{a,b},c} = {a,{b,c}}"], "bracket"),
    "commutative": ({"op": 2}, ["{a,b} = {b,a}"], "bracket"),
    "dialgebra": ({"op1": 2, "op2": 2}, [
        "{{a,b}_1,c}_1 = {a,{b,c}_1}_1",
        "{{a,b}_2,c}_1 = {a,{b,c}_1}_2",
        "{{a,b}_2,c}_2 = {a,{b,c}_2}_2",
        "{a,{b,c}_1}_1 = {a,{b,c}_2}_1",
        "{{a,b}_1,c}_2 = {{a,b}_2,c}_2",
    ], "bracket"),
    "jordan-algebra-linearized": ({"op": 2}, [
        "{a,b} = {b,a}",
        "{{{a,c},b},d} + {{{a,d},b},c} + {{{c,d},b},a}"
        " = {{a,c},{b,d}} + {{a,d},{b,c}} + {{c,d},{b,a}}",
    ], "bracket"),
    "jordan-dialgebra": ({"m": 2}, [
        "a(bc) - a(cb)",
        "((ba)c)d + ((bd)c)a - (b(ac))d - (b(cd))a - (b(ad))c + b((ad)c)",
        "(b(ac))d + (b(ad))c + (b(cd))a - (bd)(ac) - (bc)(ad) - (ba)(cd)",
    ], "product"),
    "jordan-dialgebra-o2": ({"m": 2}, [
        "((ac)b)d + ((ad)b)c - (ab)(cd) - (ac)(bd) - (ad)(bc) + a((cd)b)",
    ], "product"),
    "jts": ({"op": 3}, [
        "{a,b,c} = {c,b,a}",
        "{a,b,{c,d,e}} = {{a,b,c},d,e} - {c,{b,a,d},e} + {c,d,{a,b,e}}",
    ], "bracket"),
    "jtd": ({"op1": 3, "op2": 3}, [
        "{a,b,c}_2 = {c,b,a}_2",
        "{a,{b,c,d}_1,e}_1 = {a,{b,c,d}_2,e}_1",
        "{a,b,{c,d,e}_1}_1 = {a,b,{c,d,e}_2}_1",
        "{{a,b,c}_1,d,e}_2 = {{a,b,c}_2,d,e}_2",
        "{{e,d,c}_1,b,a}_1 = {{e,b,a}_1,d,c}_1 - {e,{d,a,b}_1,c}_1 + {e,d,{c,b,a}_1}_1",
        "{{e,d,c}_2,b,a}_1 = {{e,b,a}_1,d,c}_2 - {e,{d,a,b}_1,c}_2 + {e,d,{c,b,a}_1}_2",
        "{a,b,{c,d,e}_1}_1 = {{a,b,c}_1,d,e}_1 - {c,{b,a,d}_2,e}_2 + {{a,b,e}_1,d,c}_1",
        "{a,b,{c,d,e}_1}_2 = {{a,b,c}_2,d,e}_1 - {c,{b,a,d}_1,e}_2 + {{a,b,e}_2,d,c}_1",
    ], "bracket"),
    # the full list produced by lifting the JTS axioms, chains included
    "jtd-kp": ({"op1": 3, "op2": 3}, [
        "{a,b,c}_2 = {c,b,a}_2",
        "{a,{b,c,d}_1,e}_1 = {a,{b,c,d}_2,e}_1 = {a,{d,c,b}_1,e}_1",
        "{a,b,{c,d,e}_1}_1 = {a,b,{c,d,e}_2}_1 = {a,b,{e,d,c}_1}_1",
        "{{a,b,c}_1,d,e}_2 = {{a,b,c}_2,d,e}_2 = {{c,b,a}_1,d,e}_2",
        "{{e,d,c}_1,b,a}_1 = {{e,b,a}_1,d,c}_1 - {e,{d,a,b}_1,c}_1 + {e,d,{c,b,a}_1}_1",
        "{{e,d,c}_2,b,a}_1 = {{e,b,a}_1,d,c}_2 - {e,{d,a,b}_1,c}_2 + {e,d,{c,b,a}_1}_2",
        "{a,b,{c,d,e}_1}_1 = {{a,b,c}_1,d,e}_1 - {c,{b,a,d}_2,e}_2 + {{a,b,e}_1,d,c}_1",
        "{a,b,{c,d,e}_1}_2 = {{a,b,c}_2,d,e}_1 - {c,{b,a,d}_1,e}_2 + {{a,b,e}_2,d,c}_1",
    ], "bracket"),
    # the eight identities found for the diproducts
    "jtd-bso": ({"op1": 3, "op2": 3}, [
        "(a,b,c)_2 = (c,b,a)_2",
        "(a,(b,c,d)_1,e)_1 = (a,(b,c,d)_2,e)_1",
        "(a,b,(c,d,e)_1)_1 = (a,b,(c,d,e)_2)_1",
        "((a,b,c)_1,d,e)_2 = ((a,b,c)_2,d,e)_2",
        "((e,d,c)_1,b,a)_1 = ((e,b,a)_1,d,c)_1 - (e,(d,a,b)_1,c)_1 + (e,d,(c,b,a)_1)_1",
        "((e,d,c)_2,b,a)_1 = ((e,b,a)_1,d,c)_2 - (e,(d,a,b)_1,c)_2 + (e,d,(c,b,a)_1)_2",
        "((e,d,c)_1,b,a)_2 = ((e,b,a)_2,d,c)_1 - (e,(b,a,d)_1,c)_2 + ((c,b,a)_2,d,e)_1",
        "(a,(b,c,d)_2,e)_2 = ((c,b,a)_1,d,e)_1 + ((c,d,a)_1,b,e)_1 - (c,(b,a,d)_1,e)_1",
    ], "bracket"),
    "diproduct1-deg5": ({"op1": 3}, [
        "(a,(b,c,d)_1,e)_1 = (a,(d,c,b)_1,e)_1",
        "(a,b,(c,d,e)_1)_1 = (a,b,(e,d,c)_1)_1",
        "((e,d,c)_1,b,a)_1 = ((e,b,a)_1,d,c)_1 - (e,(d,a,b)_1,c)_1 + (e,d,(c,b,a)_1)_1",
    ], "bracket"),
    "diproducts-seed": ({"op1": 3}, [
        "((a,b,c)_1,d,e)_1 - ((a,d,e)_1,b,c)_1 + (a,(b,e,d)_1,c)_1 - (a,b,(c,d,e)_1)_1",
    ], "bracket"),
    "diproducts-deg5-generators": ({"op1": 3, "op2": 3}, [
        "((c,b,a)_2,d,e)_2 - ((a,b,c)_1,d,e)_2",
        "(a,(b,c,d)_1,e)_1 - (a,(b,c,d)_2,e)_1",
        "((e,d,c)_2,b,a)_2 - ((a,b,e)_2,d,c)_1 - ((a,b,c)_2,d,e)_1 + (e,(b,a,d)_1,c)_2",
        "((e,b,a)_2,d,c)_2 + ((c,b,a)_2,d,e)_2 - ((e,d,c)_2,b,a)_1 - (e,(d,a,b)_1,c)_2",
        "((e,b,a)_1,d,c)_1 - ((e,d,c)_1,b,a)_1 - (e,(b,a,d)_1,c)_1 + (e,d,(a,b,c)_2)_1",
        "((a,b,c)_1,d,e)_1 + ((a,d,c)_1,b,e)_1 - (a,(b,c,d)_1,e)_1 - (c,(b,a,d)_2,e)_2",
    ], "bracket"),
    "jordan-di-triple-deg3": ({"op1": 3, "op2": 3}, ["<a,b,c>_2 = <c,b,a>_2"], "bracket"),
    "jordan-di-triple-deg5": ({"op1": 3, "op2": 3}, [
        "<a,<b,c,d>_1,e>_1 - <a,<d,c,b>_2,e>_1",
        "<a,b,<c,d,e>_1>_1 - <a,b,<e,d,c>_2>_1",
        "<<a,b,c>_1,d,e>_2 - <<c,b,a>_2,d,e>_2",
        "<<a,b,c>_2,d,e>_1 - <<e,d,a>_2,b,c>_2 + <a,<b,e,d>_1,c>_2 - <<e,d,c>_2,b,a>_2",
        "<<a,b,c>_2,d,e>_1 - <a,<b,c,d>_1,e>_2 - <e,<b,a,d>_1,c>_2 + <<a,d,c>_2,b,e>_2",
        "<<a,b,c>_1,d,e>_1 + <<a,b,e>_1,d,c>_1 - <a,b,<c,d,e>_2>_1 - <c,<d,a,b>_2,e>_2",
        "<<a,b,c>_1,d,e>_1 + <<a,d,c>_1,b,e>_1 - <a,<b,c,d>_2,e>_1 - <e,<b,a,d>_2,c>_2",
    ], "bracket"),
}

_BUILTIN_TEMPLATES: dict[str, Callable[[], dict]] = {
    "diproducts": lambda: diproducts(include_third=True),
    "jordan-di-triple": jordan_triple_operations,
    "dialgebra-products": dialgebra_products,
    "special-jordan-product": special_jordan_product,
}


def builtin_names() -> list[str]:
    return sorted(_BUILTIN_SETS) + sorted(_BUILTIN_TEMPLATES)


def builtin(name: str):
    """An identity set (:class:`VarietySpec`) or a dict of operation templates."""
    if name in _BUILTIN_SETS:
        sig, text, style = _BUILTIN_SETS[name]
        return VarietySpec(name, dict(sig), list(text), style)
    if name in _BUILTIN_TEMPLATES:
        return _BUILTIN_TEMPLATES[name]()
    raise UnknownBuiltinError(f"unknown builtin {name!r}; known: {', '.join(builtin_names())}")


# --------------------------------------------------------------------------
# checks over free structures


def verify_on_free(identities: Sequence[MultiPoly], bindings: Mapping[str, Template]) -> list[bool]:
    """True for each identity whose expansion vanishes identically."""
    return [not expand_poly(p, bindings) for p in identities]


class ConsequenceSpaces:
    """Module spans of a variety's consequences, per degree, over the binary basis."""

    def __init__(self, variety: VarietySpec, field: Field):
        if list(variety.signature.values()) != [2]:
            raise ValueError("consequence spaces need a single binary product")
        self.variety = variety
        self.op = next(iter(variety.signature))
        self.field = field
        self._cache: dict[int, tuple[TreeBasis, Span]] = {}

    def get(self, degree: int) -> tuple[TreeBasis, Span]:
        if degree not in self._cache:
            basis = binary_basis(degree, self.op)
            lifted = lift_to_degree([p for p in self.variety.identities if poly_degree(p) <= degree],
                                    degree, {self.op: 2})
            span = module_span(to_vectors(lifted, basis, self.field), basis, self.field)
            self._cache[degree] = (basis, span)
        return self._cache[degree]

    def contains(self, p: MultiPoly) -> bool:
        """Membership of an (expanded) polynomial in the binary product."""
        if not p:
            return True
        basis, span = self.get(poly_degree(p))
        v = poly_to_vector(p, basis, self.field)
        probe = span.copy()
        return probe.add(np.asarray(v)[None, :]) == 0


def verify_modulo(identities: Sequence[MultiPoly], variety: VarietySpec, bindings: Mapping[str, Template],
                  field: Field, spaces: ConsequenceSpaces | None = None) -> list[bool]:
    """True for each identity whose expansion lies in the variety's consequence space."""
    spaces = spaces or ConsequenceSpaces(variety, field)
    return [spaces.contains(expand_poly(p, bindings)) for p in identities]


def corrupt_sign(p: MultiPoly, which: int = -1) -> MultiPoly:
    """Flip the sign of one term (by position in insertion order)."""
    items = list(p.items())
    m, c = items[which]
    out = MultiPoly(p)
    out[m] = -c
    return out


# --------------------------------------------------------------------------
# concrete finite-dimensional instances


def bilinear(table: np.ndarray, x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Product from structure constants: ``table[i, j]`` is ``e_i * e_j``."""
    return np.einsum("i,j,ijk->k", x, y, table) % p


def _basis_vectors(dim: int) -> list[np.ndarray]:
    return list(np.eye(dim, dtype=np.int64))


def _tsv(tables: Mapping[str, np.ndarray], p: int) -> str:
    lines = [f"# modulus\t{p}", "product\ti\tj\tk\tvalue"]
    for name, t in tables.items():
        for i, j, k in zip(*np.nonzero(t)):
            lines.append(f"{name}\t{i}\t{j}\t{k}\t{int(t[i, j, k])}")
    return "\n".join(lines) + "\n"


def _from_tsv(text: str, dim: int | None = None) -> tuple[int, dict[str, list]]:
    p = None
    rows: dict[str, list] = {}
    for line in text.splitlines():
        if line.startswith("# modulus"):
            p = int(line.split("\t")[1])
            continue
        if not line or line.startswith("#") or line.startswith("product"):
            continue
        name, i, j, k, v = line.split("\t")
        rows.setdefault(name, []).append((int(i), int(j), int(k), int(v)))
    if p is None:
        raise ValueError("structure-constant table lacks a modulus line")
    return p, rows


def _tables_from_rows(rows, dim: int) -> np.ndarray:
    t = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, j, k, v in rows:
        t[i, j, k] = v
    return t


@dataclass
class ConcreteDialgebra:
    """Structure constants for the left (-|) and right (|-) products over GF(p)."""

    dim: int
    p: int
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        PrimeField(self.p)
        if self.p in (2, 3, 5):
            raise ValueError("characteristic must avoid 2, 3 and 5")
        for t in (self.left, self.right):
            if t.shape != (self.dim,) * 3:
                raise ValueError("structure constants have the wrong shape")

    def dashv(self, x, y):
        return bilinear(self.left, x, y, self.p)

    def vdash(self, x, y):
        return bilinear(self.right, x, y, self.p)

    def axiom_failures(self) -> list[tuple]:
        """Basis triples violating any of the five dialgebra axioms."""
        L, R = self.dashv, self.vdash
        axioms = [
            ("left bar", lambda a, b, c: (L(L(a, b), c), L(a, L(b, c)))),
            ("left bar identity", lambda a, b, c: (L(a, L(b, c)), L(a, R(b, c)))),
            ("inner associativity", lambda a, b, c: (L(R(a, b), c), R(a, L(b, c)))),
            ("right bar identity", lambda a, b, c: (R(L(a, b), c), R(R(a, b), c))),
            ("right associativity", lambda a, b, c: (R(R(a, b), c), R(a, R(b, c)))),
        ]
        es = _basis_vectors(self.dim)
        bad = []
        for name, f in axioms:
            for i, a in enumerate(es):
                for j, b in enumerate(es):
                    for k, c in enumerate(es):
                        lhs, rhs = f(a, b, c)
                        if np.any((lhs - rhs) % self.p):
                            bad.append((name, i, j, k))
        return bad

    def monomial(self, m: DiMonomial, args: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate ``w_1 |- ... |- ^w_j -| ... -| w_n`` on the given elements."""
        w = [args[x] for x in m.word]
        x = w[m.center]
        for y in w[m.center + 1:]:
            x = self.dashv(x, y)
        for y in reversed(w[:m.center]):
            x = self.vdash(y, x)
        return x

    def operation(self, template: DiOpTemplate) -> Callable:
        def op(*args):
            out = np.zeros(self.dim, dtype=np.int64)
            for (s, j), c in template.terms.items():
                out = out + PrimeField(self.p).convert(c) * self.monomial(DiMonomial(s, j), args)
            return out % self.p
        return op

    def to_tsv(self) -> str:
        return _tsv({"left": self.left, "right": self.right}, self.p)

    @classmethod
    def from_tsv(cls, text: str, dim: int) -> ConcreteDialgebra:
        p, rows = _from_tsv(text)
        return cls(dim, p, _tables_from_rows(rows.get("left", []), dim), _tables_from_rows(rows.get("right", []), dim))


class DifferentialError(ValueError):
    pass


def make_differential_dialgebra(mult: np.ndarray, d: np.ndarray, p: int, leibniz: str = "image") -> ConcreteDialgebra:
    """Dialgebra with ``a -| b = a d(b)`` and ``a |- b = d(a) b``.

    ``mult[i, j]`` is ``e_i e_j``; ``d`` is a matrix acting on column vectors.
    ``d`` must square to zero. ``leibniz="full"`` demands the Leibniz rule on
    all basis pairs; the default ``"image"`` demands it only on products
    with a factor in the image of d, which is all the construction uses
    (d(a d(b)) = d(a) d(b) and d(d(a) b) = d(a) d(b)). The five axioms are
    then checked on all basis triples.
    """
    dim = mult.shape[0]
    d = np.asarray(d, dtype=np.int64) % p
    if np.any((d @ d) % p):
        raise DifferentialError("d does not square to zero")
    D = lambda x: (d @ x) % p
    M = lambda x, y: bilinear(mult, x, y, p)
    es = _basis_vectors(dim)
    for a in es:
        for b in es:
            if leibniz == "full":
                pairs = [(a, b)]
            elif leibniz == "image":
                pairs = [(a, D(b)), (D(a), b)]
            else:
                raise ValueError(f"unknown Leibniz mode {leibniz!r}")
            for x, y in pairs:
                if np.any((D(M(x, y)) - M(D(x), y) - M(x, D(y))) % p):
                    raise DifferentialError("d fails the Leibniz rule")
    left = np.zeros((dim, dim, dim), dtype=np.int64)
    right = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, a in enumerate(es):
        for j, b in enumerate(es):
            left[i, j] = M(a, D(b))
            right[i, j] = M(D(a), b)
    out = ConcreteDialgebra(dim, p, left, right)
    bad = out.axiom_failures()
    if bad:
        raise DifferentialError(f"dialgebra axioms fail, first at {bad[0]}")
    return out


def matrix_algebra(n: int, p: int) -> np.ndarray:
    """Structure constants of n x n matrices in the basis E_11, E_12, ..."""
    dim = n * n
    t = np.zeros((dim, dim, dim), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                t[i * n + j, j * n + k, i * n + k] = 1
    return t


def dual_number_extension(base: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """``A[t]/(t^2)`` with basis (x, x t) and ``d`` the t-derivative."""
    m = base.shape[0]
    dim = 2 * m
    t = np.zeros((dim, dim, dim), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            v = base[i, j]
            t[i, j, :m] = v                 # x y
            t[i, m + j, m:] = v             # x (y t)
            t[m + i, j, m:] = v             # (x t) y
    d = np.zeros((dim, dim), dtype=np.int64)
    for i in range(m):
        d[i, m + i] = 1                     # d(x t) = x
    return t % p, d


def scalars(p: int) -> np.ndarray:
    return np.ones((1, 1, 1), dtype=np.int64)


@dataclass
class ConcreteJordanDialgebra:
    dim: int
    p: int
    product: np.ndarray

    @classmethod
    def from_dialgebra(cls, D: ConcreteDialgebra) -> ConcreteJordanDialgebra:
        """``a b = a -| b + b |- a``."""
        return cls(D.dim, D.p, (D.left + np.transpose(D.right, (1, 0, 2))) % D.p)

    def mul(self, x, y):
        return bilinear(self.product, x, y, self.p)

    def axiom_failures(self) -> list[tuple]:
        """Basis tuples violating right commutativity, O1 or RJ."""
        spec = builtin("jordan-dialgebra")
        ops = {"m": self.mul}
        es = _basis_vectors(self.dim)
        bad = []
        for k, p in enumerate(spec.identities):
            n = poly_degree(p)
            for idx in np.ndindex(*(self.dim,) * n):
                if np.any(evaluate(p, ops, [es[i] for i in idx], self.p)):
                    bad.append((k, idx))
        return bad

    def operation(self, template: NonassocOpTemplate) -> Callable:
        def op(*args):
            return evaluate(MultiPoly(template.terms), {"m": self.mul}, args, self.p)
        return op

    def to_tsv(self) -> str:
        return _tsv({"m": self.product}, self.p)

    @classmethod
    def from_tsv(cls, text: str, dim: int) -> ConcreteJordanDialgebra:
        p, rows = _from_tsv(text)
        return cls(dim, p, _tables_from_rows(rows.get("m", []), dim))


def evaluate(p: MultiPoly, ops: Mapping[str, Callable], values: Sequence[np.ndarray], modulus: int) -> np.ndarray:
    """Value of a tree polynomial with variable i set to ``values[i]``."""
    field = PrimeField(modulus)

    def go(t: Tree):
        if not isinstance(t, Node):
            return values[t]
        return ops[t.op](*(go(a) for a in t.args))

    dim = len(values[0])
    out = np.zeros(dim, dtype=np.int64)
    for m, c in p.items():
        out = (out + field.convert(c) * go(m)) % modulus
    return out


@dataclass
class InstanceReport:
    trials: int
    seed: int
    modulus: int
    violations: list          # per identity: number of trials with a nonzero value
    max_weight: list          # per identity: largest number of nonzero coordinates seen

    @property
    def ok(self) -> bool:
        return not any(self.violations)

    def as_dict(self) -> dict:
        return {"trials": self.trials, "seed": self.seed, "modulus": self.modulus,
                "violations": self.violations, "max_weight": self.max_weight, "ok": self.ok}


def verify_on_instance(identities: Sequence[MultiPoly], ops: Mapping[str, Callable], dim: int, modulus: int,
                       trials: int = 200, seed: int = 0) -> InstanceReport:
    """Evaluate every identity on ``trials`` seeded random tuples of elements."""
    if trials < 1:
        raise ValueError("at least one trial is needed")
    rng = np.random.default_rng(seed)
    nvars = max((poly_degree(p) for p in identities), default=0)
    violations = [0] * len(identities)
    weight = [0] * len(identities)
    for _ in range(trials):
        vals = list(rng.integers(0, modulus, size=(nvars, dim)))
        for k, p in enumerate(identities):
            v = evaluate(p, ops, vals, modulus)
            nz = int(np.count_nonzero(v))
            if nz:
                violations[k] += 1
                weight[k] = max(weight[k], nz)
    return InstanceReport(trials, seed, modulus, violations, weight)


def differential_triple_operations(mult: np.ndarray, d: np.ndarray, p: int) -> dict[str, Callable]:
    """``{a,b,c}_1 = a d(b) d(c) + d(c) d(b) a`` and ``{a,b,c}_2 = d(a) b d(c) + d(c) b d(a)``."""
    D = lambda x: (d @ x) % p
    M = lambda x, y: bilinear(mult, x, y, p)
    return {
        "op1": lambda a, b, c: (M(M(a, D(b)), D(c)) + M(M(D(c), D(b)), a)) % p,
        "op2": lambda a, b, c: (M(M(D(a), b), D(c)) + M(M(D(c), b), D(a))) % p,
    }


def associative_triple_operations(mult: np.ndarray, p: int) -> dict[str, Callable]:
    """``{a,b,c}_1 = {a,b,c}_2 = abc + cba``."""
    M = lambda x, y: bilinear(mult, x, y, p)
    f = lambda a, b, c: (M(M(a, b), c) + M(M(c, b), a)) % p
    return {"op1": f, "op2": f}


# --------------------------------------------------------------------------
# operation files


def parse_template(text: str) -> Template:
    """A hatted word list is a dialgebra template, a bracketed one a nonassociative template."""
    from .expansion import GroupAlgebraOp

    if "^" in text:
        return DiOpTemplate.parse(text)
    if "(" in text:
        return NonassocOpTemplate.parse(text)
    return GroupAlgebraOp.parse(text)


def parse_ops_text(text: str) -> dict[str, Template]:
    """One ``name = template`` per line; ``#`` starts a comment."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition("=")
        if not sep or not name.strip().isidentifier():
            raise ValueError(f"expected 'name = template', got {raw!r}")
        out[name.strip()] = parse_template(body.strip())
    return out


def format_ops_text(ops: Mapping[str, Template]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in ops.items())
