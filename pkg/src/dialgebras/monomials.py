"""Multilinear monomials: dialgebra normal forms and labelled planar trees.

Variables are the integers ``0, 1, 2, ...`` (printed ``a, b, c, ...``); a
word is a tuple of distinct variables. Permutations are tuples of images,
0-based, and act on words by relabelling letters.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

LETTERS = "abcdefghijklmnopqrstuvwxyz"

DASHV = "-|"  # left product, a -| b, center on the left
VDASH = "|-"  # right product, a |- b, center on the right


def letter(i: int) -> str:
    return LETTERS[i]


def var(ch: str) -> int:
    return LETTERS.index(ch)


# --------------------------------------------------------------------------
# permutations

Perm = tuple


def all_perms(n: int) -> list[Perm]:
    """All permutations of ``range(n)`` in lexicographic order."""
    return list(itertools.permutations(range(n)))


def compose(s: Perm, t: Perm) -> Perm:
    """``(s t)(i) = s(t(i))``."""
    return tuple(s[i] for i in t)


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, j in enumerate(s):
        out[j] = i
    return tuple(out)


def relabel(word: Sequence[int], s: Perm) -> tuple[int, ...]:
    return tuple(s[x] for x in word)


def check_perm(s: Sequence[int]) -> Perm:
    if sorted(s) != list(range(len(s))):
        raise ValueError(f"{tuple(s)} is not a permutation")
    return tuple(s)


# --------------------------------------------------------------------------
# trees


class Node(NamedTuple):
    op: str
    args: tuple

    def __repr__(self) -> str:
        return format_tree(self)


Tree = Union[int, Node, None]


def node(op: str, *args) -> Node:
    return Node(op, tuple(args))


def leaves(t: Tree) -> tuple:
    if not isinstance(t, Node):
        return (t,)
    return tuple(x for a in t.args for x in leaves(a))


def degree(t: Tree) -> int:
    return len(leaves(t))


def shape(t: Tree) -> Tree:
    """The association type of ``t``: same tree with anonymous leaves."""
    if not isinstance(t, Node):
        return None
    return Node(t.op, tuple(shape(a) for a in t.args))


def fill(s: Tree, word: Sequence[int]) -> Tree:
    it = iter(word)

    def go(x):
        if not isinstance(x, Node):
            return next(it)
        return Node(x.op, tuple(go(a) for a in x.args))

    return go(s)


def relabel_tree(t: Tree, s: Perm) -> Tree:
    if not isinstance(t, Node):
        return s[t]
    return Node(t.op, tuple(relabel_tree(a, s) for a in t.args))


def ops_used(t: Tree) -> set[str]:
    if not isinstance(t, Node):
        return set()
    return {t.op}.union(*(ops_used(a) for a in t.args))


def format_tree(t: Tree) -> str:
    if t is None:
        return "_"
    if not isinstance(t, Node):
        return letter(t)
    return f"{t.op}({','.join(format_tree(a) for a in t.args)})"


def format_juxtaposed(t: Tree) -> str:
    """Binary trees as juxtaposition, e.g. ``(ab)c``."""
    if not isinstance(t, Node):
        return "_" if t is None else letter(t)
    parts = []
    for a in t.args:
        s = format_juxtaposed(a)
        parts.append(f"({s})" if isinstance(a, Node) else s)
    return "".join(parts)


# --------------------------------------------------------------------------
# dialgebra monomials


class DiMonomial(NamedTuple):
    """Normal form ``a_1 ... ^a_i ... a_n``; ``center`` is a 0-based slot."""

    word: tuple
    center: int

    def __str__(self) -> str:
        return " ".join(("^" if i == self.center else "") + letter(x) for i, x in enumerate(self.word))

    @classmethod
    def parse(cls, text: str) -> DiMonomial:
        word, center = [], None
        for tok in text.replace(" ", ""):
            if tok == "^":
                center = len(word)
            else:
                word.append(var(tok))
        if center is None or center >= len(word):
            raise ValueError(f"no center in {text!r}")
        return cls(tuple(word), center)


def center(t: Tree) -> int:
    """Variable at the center: go left at ``-|`` and right at ``|-``."""
    while isinstance(t, Node):
        if t.op == DASHV:
            t = t.args[0]
        elif t.op == VDASH:
            t = t.args[1]
        else:
            raise ValueError(f"not a dialgebra product: {t.op!r}")
    return t


def normal_form(t: Tree) -> DiMonomial:
    word = leaves(t)
    return DiMonomial(word, word.index(center(t)))


def enumerate_ditrees(word: Sequence[int]) -> list[Tree]:
    """All parenthesizations and product choices on a fixed word."""
    word = tuple(word)
    if len(word) == 1:
        return [word[0]]
    out = []
    for k in range(1, len(word)):
        for left in enumerate_ditrees(word[:k]):
            for right in enumerate_ditrees(word[k:]):
                out.extend(Node(op, (left, right)) for op in (DASHV, VDASH))
    return out


def enumerate_di_monomials(n: int) -> list[DiMonomial]:
    """All ``n * n!`` basis monomials, ordered by center slot then word."""
    if n < 1:
        raise ValueError("degree must be positive")
    return [DiMonomial(w, c) for c in range(n) for w in all_perms(n)]


# --------------------------------------------------------------------------
# association types


def _compositions(total: int, arity: int, sizes: set[int]) -> list[tuple]:
    """Compositions of ``total`` into ``arity`` parts from ``sizes``, left-heavy first."""
    if arity == 0:
        return [()] if total == 0 else []
    out = []
    for first in sorted((s for s in sizes if s <= total), reverse=True):
        out.extend((first,) + rest for rest in _compositions(total - first, arity - 1, sizes))
    return out


def reversal_canonical(t: Tree, symmetric_ops: Iterable[str]) -> Tree:
    """Canonical representative of a type under reversing arguments of symmetric ops.

    Children are compared by a key that prefers subtrees to leaves in the
    first slot, so ``op2(op(...),d,e)`` is kept and ``op2(a,b,op(...))`` folded.
    """
    symmetric_ops = frozenset(symmetric_ops)
    if not isinstance(t, Node):
        return t
    args = tuple(reversal_canonical(a, symmetric_ops) for a in t.args)
    if t.op in symmetric_ops:
        rev = args[::-1]
        if _type_key(rev) < _type_key(args):
            args = rev
    return Node(t.op, args)


def _type_key(t) -> tuple:
    if isinstance(t, tuple) and not isinstance(t, Node):
        return tuple(_type_key(a) for a in t)
    if not isinstance(t, Node):
        return (1,)
    return (0, t.op, tuple(_type_key(a) for a in t.args))


def enumerate_association_types(signature: dict[str, int] | Sequence[tuple[str, int]], degree: int,
                                symmetric_ops: Iterable[str] = ()) -> list[Tree]:
    """All planar trees with ``degree`` leaves whose nodes carry operations of ``signature``.

    Order: outer operation in signature order, then argument sizes left-heavy
    first, recursively; for one binary operation this is the familiar list
    ``(((ab)c)d)e, ((a(bc))d)e, ...``. Operations in ``symmetric_ops`` are
    reversal-symmetric and types equivalent under that symmetry are folded.
    """
    sig = list(signature.items()) if isinstance(signature, dict) else list(signature)
    if not sig or degree < 1:
        raise ValueError("need at least one operation and a positive degree")
    reach = _reachable_degrees(sig, degree)
    if degree not in reach:
        raise ValueError(f"degree {degree} not reachable with arities {[a for _, a in sig]}")

    @lru_cache(maxsize=None)
    def trees(d: int) -> tuple:
        if d == 1:
            return (None,)
        out = []
        for op, arity in sig:
            for comp in _compositions(d, arity, {s for s in reach if s < d}):
                for kids in itertools.product(*(trees(s) for s in comp)):
                    out.append(Node(op, kids))
        return tuple(out)

    types = list(trees(degree))
    sym = list(symmetric_ops)
    if sym:
        seen, kept = set(), []
        for t in types:
            c = reversal_canonical(t, sym)
            if c not in seen:
                seen.add(c)
                kept.append(c)
        types = kept
    return types


def _reachable_degrees(sig, limit: int) -> set[int]:
    reach = {1}
    changed = True
    while changed:
        changed = False
        for _, arity in sig:
            for comp in itertools.combinations_with_replacement(sorted(reach), arity):
                d = sum(comp)
                if d <= limit and d not in reach:
                    reach.add(d)
                    changed = True
    return reach


# --------------------------------------------------------------------------
# symmetry tables and symmetry-reduced bases


def _closure(gens: Sequence[Perm], n: int) -> list[Perm]:
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                h = compose(s, g)
                if h not in group:
                    group.add(h)
                    new.append(h)
        frontier = new
    return sorted(group)


def transposition(n: int, i: int, j: int) -> Perm:
    p = list(range(n))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def derive_symmetries(t: Tree, symmetric_ops: Iterable[str]) -> list[Perm]:
    """Leaf-position symmetries of a type from reversal-symmetric operations.

    A node of a symmetric operation contributes the swap of its first and
    last argument blocks when those blocks have the same shape.
    """
    symmetric_ops = set(symmetric_ops)
    n = degree(t)
    gens: list[Perm] = []

    def go(x, offset: int) -> int:
        if not isinstance(x, Node):
            return 1
        spans = []
        pos = offset
        for a in x.args:
            size = go(a, pos)
            spans.append((pos, size))
            pos += size
        if x.op in symmetric_ops and shape(x.args[0]) == shape(x.args[-1]):
            (s0, k), (s1, _) = spans[0], spans[-1]
            p = list(range(n))
            for i in range(k):
                p[s0 + i], p[s1 + i] = s1 + i, s0 + i
            gens.append(tuple(p))
        return pos - offset

    go(t, 0)
    return gens


class TreeBasis:
    """Ordered basis of multilinear tree monomials, one column per symmetry orbit.

    ``symmetries[k]`` lists leaf-position permutations generating the group
    that identifies words within type ``k``; each orbit is represented by its
    lexicographically least word and columns are ordered by (type, word).
    """

    def __init__(self, types: Sequence[Tree], symmetries: dict[int, Sequence[Perm]] | None = None):
        self.types = [shape(t) for t in types]
        if len({degree(t) for t in self.types}) != 1:
            raise ValueError("all types must share one degree")
        self.degree = degree(self.types[0])
        self.symmetries = {k: list(v) for k, v in (symmetries or {}).items() if v}
        self._type_index = {t: k for k, t in enumerate(self.types)}
        if len(self._type_index) != len(self.types):
            raise ValueError("duplicate association type")
        self.columns: list[tuple[int, tuple]] = []
        self._index: dict[tuple[int, tuple], int] = {}
        words = all_perms(self.degree)
        for k, t in enumerate(self.types):
            group = _closure(self.symmetries.get(k, []), self.degree)
            reps = {}
            for w in words:
                orbit = [tuple(w[g[i]] for i in range(self.degree)) for g in group]
                reps.setdefault(min(orbit), orbit)
            for rep in sorted(reps):
                col = len(self.columns)
                self.columns.append((k, rep))
                for w in reps[rep]:
                    self._index[(k, w)] = col

    def __len__(self) -> int:
        return len(self.columns)

    def type_sizes(self) -> list[int]:
        sizes = [0] * len(self.types)
        for k, _ in self.columns:
            sizes[k] += 1
        return sizes

    def type_of(self, t: Tree) -> int:
        try:
            return self._type_index[shape(t)]
        except KeyError:
            raise KeyError(f"association type of {format_tree(t)} is not in this basis") from None

    def index(self, t: Tree) -> int:
        return self._index[(self.type_of(t), leaves(t))]

    def monomial(self, col: int) -> Tree:
        k, w = self.columns[col]
        return fill(self.types[k], w)

    def label(self, col: int) -> str:
        return format_tree(self.monomial(col))

    def representative(self, t: Tree) -> Tree:
        return self.monomial(self.index(t))

    def permutation_map(self, s: Perm) -> np.ndarray:
        """Column ``j`` goes to column ``out[j]`` under relabelling by ``s``."""
        return np.array([self._index[(k, relabel(w, s))] for k, w in self.columns], dtype=np.int64)


def act(s: Perm, m, basis: TreeBasis | None = None):
    """Relabel the arguments of a monomial by ``s``.

    Dialgebra monomials keep their center slot. Tree monomials are mapped to
    their orbit representative when a basis is given.
    """
    if isinstance(m, DiMonomial):
        if len(s) != len(m.word):
            raise ValueError("degree mismatch")
        return DiMonomial(relabel(m.word, s), m.center)
    if len(s) != degree(m):
        raise ValueError("degree mismatch")
    out = relabel_tree(m, s)
    return basis.representative(out) if basis is not None else out


class PermutationAction:
    """All ``n!`` column permutations of a basis, for module-span computations."""

    def __init__(self, basis: TreeBasis):
        self.basis = basis
        self.perms = all_perms(basis.degree)
        self.maps = np.stack([basis.permutation_map(s) for s in self.perms])

    def orbit_rows(self, v: np.ndarray) -> np.ndarray:
        """Row ``k`` is ``perms[k]`` applied to the coefficient vector ``v``."""
        out = np.zeros((len(self.perms), len(v)), dtype=v.dtype)
        np.put_along_axis(out, self.maps, np.broadcast_to(v, out.shape), axis=1)
        return out
