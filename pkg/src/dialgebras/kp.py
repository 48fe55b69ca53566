"""Lifting identities of one n-ary operation to n new operations.

Part 1 rewrites each monomial once per choice of central argument: an
operation node whose j-th argument contains the central argument becomes
operation j; a node lying entirely to the right of the central argument
becomes operation 1, and one lying entirely to its left becomes operation n.
Part 2 adds the interchange identities saying that the new operations agree
inside argument i of operation j whenever i != j.
"""

from __future__ import annotations

from typing import Sequence

from .monomials import Node, Tree, all_perms, leaves, node
from .poly import MultiPoly, is_multilinear, poly_degree


class KPError(ValueError):
    pass


def _op_name(prefix: str, k: int) -> str:
    return f"{prefix}{k}"


def _rewrite(t: Tree, central: int, n: int, prefix: str) -> Tree:
    def go(x, offset: int) -> tuple[Tree, int]:
        """Returns the rewritten subtree and the position just past it."""
        if not isinstance(x, Node):
            return x, offset + 1
        start = offset
        args = []
        owner = None
        for j, a in enumerate(x.args):
            if owner is None and central in leaves(a):
                owner = j + 1
            a2, offset = go(a, offset)
            args.append(a2)
        if owner is None:
            owner = 1 if central_pos < start else n
        return Node(_op_name(prefix, owner), tuple(args)), offset

    central_pos = leaves(t).index(central)
    return go(t, 0)[0]


def _check_single_op(p: MultiPoly, n: int) -> None:
    if not p:
        return
    if not is_multilinear(p):
        raise KPError("KP needs a multilinear identity")
    for m in p:
        stack = [m]
        while stack:
            x = stack.pop()
            if isinstance(x, Node):
                if len(x.args) != n:
                    raise KPError(f"operation {x.op!r} has arity {len(x.args)}, expected {n}")
                stack.extend(x.args)


def kp_part1(identity: MultiPoly, n: int, prefix: str = "op") -> list[MultiPoly]:
    """One identity per central argument a, b, c, ... in that order."""
    _check_single_op(identity, n)
    if not identity:
        return []
    d = poly_degree(identity)
    out = []
    for i in range(d):
        p = MultiPoly()
        for m, c in identity.items():
            p.add_term(_rewrite(m, i, n, prefix), c)
        out.append(p)
    return out


def erase_subscripts(p: MultiPoly, op: str = "op") -> MultiPoly:
    """Relabel every operation node with the single name ``op``."""
    def go(x):
        if not isinstance(x, Node):
            return x
        return Node(op, tuple(go(a) for a in x.args))
    return p.map_monomials(go)


def interchange_monomial(n: int, i: int, j: int, k: int, prefix: str = "op") -> Tree:
    """``{a_1, .., {b_1..b_n}_k, .., a_n}_j`` with the inner bracket in slot i (1-based)."""
    inner = node(_op_name(prefix, k), *range(i - 1, i - 1 + n))
    args = list(range(i - 1)) + [inner] + list(range(i - 1 + n, 2 * n - 1))
    return node(_op_name(prefix, j), *args)


def kp_part2(n: int, prefix: str = "op", all_pairs: bool = False) -> list[MultiPoly]:
    """Interchange identities of degree 2n-1, ordered by outer operation j then slot i.

    By default each family ``k = 1..n`` is emitted as the chain of adjacent
    links (k, k+1), giving n-1 identities per (i, j); ``all_pairs`` emits every
    k < l instead. Both span the same space.
    """
    out = []
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i == j:
                continue
            pairs = ([(k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)] if all_pairs
                     else [(k, k + 1) for k in range(1, n)])
            for k, l in pairs:
                out.append(MultiPoly({interchange_monomial(n, i, j, k, prefix): 1,
                                      interchange_monomial(n, i, j, l, prefix): -1}))
    return out


def _substitute_op(t: Tree, k_name: str, base_name: str, sigma: Sequence[int]) -> Tree:
    if not isinstance(t, Node):
        return t
    args = tuple(_substitute_op(a, k_name, base_name, sigma) for a in t.args)
    if t.op == k_name:
        return Node(base_name, tuple(args[s] for s in sigma))
    return Node(t.op, args)


def defines_opposite(p: MultiPoly, k_name: str, base_name: str, sigma: Sequence[int]) -> bool:
    """True if ``p`` is a nonzero multiple of op_k(x) - op_base(sigma x)."""
    if len(p) != 2:
        return False
    n = len(sigma)
    for w in all_perms(n):
        a = Node(k_name, tuple(w))
        b = Node(base_name, tuple(w[s] for s in sigma))
        if a in p and b in p and p[a] == -p[b]:
            return True
    return False


def kp_reduce_opposite(ids: Sequence[MultiPoly], k: int, sigma: Sequence[int] | None = None,
                       base: int = 1, prefix: str = "op") -> list[MultiPoly]:
    """Eliminate operation k using op_k(x_1..x_n) = op_base(x_sigma(1)..x_sigma(n)).

    ``sigma`` defaults to argument reversal. Identities that become zero are
    dropped. A set not mentioning operation k is returned unchanged; otherwise
    one of the identities must be the defining relation.
    """
    k_name, base_name = _op_name(prefix, k), _op_name(prefix, base)
    mentions = any(_mentions(m, k_name) for p in ids for m in p)
    if not mentions:
        return [MultiPoly(p) for p in ids]
    arities = {len(x.args) for p in ids for m in p for x in _nodes(m) if x.op == k_name}
    n = arities.pop()
    sigma = tuple(range(n - 1, -1, -1)) if sigma is None else tuple(sigma)
    if not any(defines_opposite(p, k_name, base_name, sigma) for p in ids):
        raise KPError(f"no identity defines {k_name} in terms of {base_name}")
    out = []
    for p in ids:
        q = p.map_monomials(lambda m: _substitute_op(m, k_name, base_name, sigma))
        if q:
            out.append(q)
    return out


def _nodes(t: Tree):
    if isinstance(t, Node):
        yield t
        for a in t.args:
            yield from _nodes(a)


def _mentions(t: Tree, op: str) -> bool:
    return any(x.op == op for x in _nodes(t))


def kp(identities: Sequence[MultiPoly], n: int, prefix: str = "op") -> list[MultiPoly]:
    """Part 1 for every identity, followed by Part 2 in degree 2n-1."""
    out = []
    for p in identities:
        out.extend(kp_part1(p, n, prefix))
    out.extend(kp_part2(n, prefix))
    return out
