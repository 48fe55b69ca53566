"""Identity computations: nullspaces, module generators, consequences.

Identities live as coefficient vectors over a :class:`TreeBasis`. The symmetric
group acts on them through :class:`PermutationAction`; "module span" below
always means the span of all permuted copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .expansion import ExpansionMatrix, Template, build_expansion_matrix, poly_to_vector, vector_to_poly
from .linalg import DenseMatrix, Echelon, Field, PrimeField, Subspace, _rref_fractions, nullspace_from_rcf, rcf
from .monomials import Node, Tree, TreeBasis, PermutationAction, enumerate_association_types
from .poly import MultiPoly, poly_degree


class InconsistencyError(ValueError):
    """A vector claimed to be an identity does not vanish under expansion."""


# --------------------------------------------------------------------------
# vectors and spans


def to_vectors(polys: Sequence[MultiPoly], basis: TreeBasis, field: Field) -> np.ndarray:
    """Stack coefficient vectors; residues for prime fields, Fractions otherwise."""
    vs = [poly_to_vector(p, basis, field) for p in polys]
    if isinstance(field, PrimeField):
        return np.array(vs, dtype=np.int64).reshape(len(vs), len(basis))
    out = np.empty((len(vs), len(basis)), dtype=object)
    for i, v in enumerate(vs):
        out[i] = v
    return out


def to_polys(rows, basis: TreeBasis, field: Field) -> list[MultiPoly]:
    return [vector_to_poly(r, basis, field) for r in rows]


def support(v) -> int:
    return int(sum(1 for x in v if x))


def _zero_like(field: Field):
    return 0 if isinstance(field, PrimeField) else Fraction(0)


class Span:
    """A growing row space over either kind of field."""

    def __init__(self, ncols: int, field: Field):
        self.field = field
        self.ncols = ncols
        if isinstance(field, PrimeField):
            self._ech = Echelon(ncols, field.p)
        else:
            self._rows: list = []
            self._piv: list[int] = []

    @property
    def dim(self) -> int:
        return self._ech.rank if isinstance(self.field, PrimeField) else len(self._piv)

    def add(self, rows) -> int:
        rows = np.asarray(rows)
        if rows.ndim == 1:
            rows = rows[None, :]
        if isinstance(self.field, PrimeField):
            return self._ech.add(rows)
        before = len(self._piv)
        self._rows, self._piv = _rref_fractions(self._rows + [[Fraction(x) for x in r] for r in rows])
        return len(self._piv) - before

    def copy(self) -> Span:
        s = Span(self.ncols, self.field)
        if isinstance(self.field, PrimeField):
            s._ech = self._ech.copy()
        else:
            s._rows, s._piv = [list(r) for r in self._rows], list(self._piv)
        return s

    def subspace(self) -> Subspace:
        sp = Subspace(self.field, self.ncols)
        if self.dim:
            sp.add(self.rcf_rows())
        return sp

    def rcf_rows(self) -> np.ndarray:
        if isinstance(self.field, PrimeField):
            return self._ech.basis.copy()
        out = np.empty((len(self._rows), self.ncols), dtype=object)
        for i, r in enumerate(self._rows):
            out[i] = r
        return out


def module_rows(v, action: PermutationAction, field: Field) -> np.ndarray:
    """All permuted copies of one coefficient vector, in lexicographic permutation order."""
    v = np.asarray(v, dtype=np.int64 if isinstance(field, PrimeField) else object)
    if v.dtype == object:
        out = np.empty((len(action.perms), len(v)), dtype=object)
        out[...] = Fraction(0)
        for k, m in enumerate(action.maps):
            out[k, m] = v
        return out
    return action.orbit_rows(v)


def module_span(vectors, basis: TreeBasis, field: Field, action: PermutationAction | None = None) -> Span:
    action = action or PermutationAction(basis)
    span = Span(len(basis), field)
    for v in vectors:
        span.add(module_rows(v, action, field))
    return span


# --------------------------------------------------------------------------
# identity spaces


@dataclass(eq=False)
class IdentitySpace:
    """Degreewise space of identities, stored as an RCF over a tree basis."""

    basis: TreeBasis
    space: Subspace

    @property
    def degree(self) -> int:
        return self.basis.degree

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def field(self) -> Field:
        return self.space.field

    def contains(self, p: MultiPoly) -> bool:
        return self.space.contains(poly_to_vector(p, self.basis, self.field))

    def identities(self) -> list[MultiPoly]:
        return to_polys(self.space.matrix().data, self.basis, self.field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdentitySpace):
            return NotImplemented
        return self.basis.columns == other.basis.columns and self.space == other.space

    __hash__ = None

    @classmethod
    def from_vectors(cls, vectors, basis: TreeBasis, field: Field, module: bool = True) -> IdentitySpace:
        if module:
            span = module_span(vectors, basis, field)
        else:
            span = Span(len(basis), field)
            if len(vectors):
                span.add(vectors)
        return cls(basis, span.subspace())

    @classmethod
    def from_polys(cls, polys, basis: TreeBasis, field: Field, module: bool = True) -> IdentitySpace:
        return cls.from_vectors(to_vectors(polys, basis, field), basis, field, module)


# --------------------------------------------------------------------------
# nullspace identities


def sort_candidates(vectors: Sequence, field: Field, tie_break: str = "lex") -> list[int]:
    """Indices ordered by support size.

    ``tie_break="lex"`` orders equal supports lexicographically by signed
    coefficient vector; ``"stable"`` keeps the incoming order.
    """
    if tie_break not in ("lex", "stable"):
        raise ValueError(f"unknown tie-break {tie_break!r}")
    signed = [[field.signed(x) for x in v] for v in vectors]
    if tie_break == "lex":
        key = lambda i: (support(signed[i]), signed[i])
    else:
        key = lambda i: support(signed[i])
    return sorted(range(len(vectors)), key=key)


@dataclass(eq=False)
class IdentityResult:
    expansion: ExpansionMatrix
    rank: int
    identities: list          # coefficient vectors, sorted

    @property
    def nullity(self) -> int:
        return len(self.identities)

    @property
    def basis(self) -> TreeBasis:
        return self.expansion.source

    def polys(self) -> list[MultiPoly]:
        return to_polys(self.identities, self.basis, self.expansion.matrix.field)


def find_identities(bindings: Mapping[str, Template], basis: TreeBasis, field: Field,
                    tie_break: str = "lex", sort: bool = True) -> IdentityResult:
    """Rank of the expansion matrix and its canonical nullspace, sorted by support."""
    em = build_expansion_matrix(basis, bindings, field)
    res = rcf(em.matrix)
    ns = nullspace_from_rcf(res, em.matrix.ncols)
    if sort:
        ns = [ns[i] for i in sort_candidates(ns, field, tie_break)]
    return IdentityResult(em, res.rank, ns)


def check_vanishing(em: ExpansionMatrix, vectors) -> None:
    if not len(vectors):
        return
    m = DenseMatrix.from_rows([list(v) for v in vectors], em.matrix.field, em.matrix.ncols)
    prod = em.matrix @ m.transpose()
    if any(x for row in prod.tolist() for x in row):
        raise InconsistencyError("vector does not lie in the nullspace of the expansion matrix")


# --------------------------------------------------------------------------
# fill-and-reduce generator extraction


@dataclass(eq=False)
class GeneratorReport:
    basis: TreeBasis
    field: Field
    seeds: list
    seed_dim: int
    accepted: list                    # 1-based candidate indices
    generators: list                  # the accepted vectors
    trajectory: list                  # rank after each accepted candidate
    final_dim: int
    target_dim: int | None = None
    processed: int = 0

    def generator_polys(self) -> list[MultiPoly]:
        return to_polys(self.generators, self.basis, self.field)


def extract_generators(candidates: Sequence, basis: TreeBasis, field: Field, seeds: Sequence = (),
                       target_dim: int | None = None, expansion: ExpansionMatrix | None = None,
                       action: PermutationAction | None = None) -> GeneratorReport:
    """Accept a candidate iff its permuted copies raise the rank of the module span.

    Seeds are folded in first (with all their permutations). Processing stops
    once ``target_dim`` is reached.
    """
    if expansion is not None:
        check_vanishing(expansion, list(seeds) + list(candidates))
    action = action or PermutationAction(basis)
    span = Span(len(basis), field)
    for s in seeds:
        span.add(module_rows(s, action, field))
    seed_dim = span.dim
    accepted, gens, traj = [], [], []
    processed = 0
    for idx, v in enumerate(candidates, start=1):
        if target_dim is not None and span.dim >= target_dim:
            break
        processed = idx
        if span.add(module_rows(v, action, field)):
            accepted.append(idx)
            gens.append(v)
            traj.append(span.dim)
    return GeneratorReport(basis, field, list(seeds), seed_dim, accepted, gens, traj, span.dim,
                           target_dim, processed)


@dataclass(eq=False)
class PruneResult:
    removable: list        # accepted indices whose removal keeps the full span
    kept: list             # accepted indices of a greedily pruned generating set
    kept_dim: int
    minimal: bool          # no single generator of the kept set is removable

    @property
    def independent(self) -> bool:
        return not self.removable


def _span_dim(vectors, report: GeneratorReport, action) -> int:
    span = Span(len(report.basis), report.field)
    for v in list(report.seeds) + list(vectors):
        span.add(module_rows(v, action, report.field))
    return span.dim


def superfluity_prune(report: GeneratorReport) -> PruneResult:
    """Find generators whose removal leaves the span unchanged, then prune greedily."""
    action = PermutationAction(report.basis)
    full = report.final_dim
    gens = list(zip(report.accepted, report.generators))
    removable = [idx for idx, _ in gens
                 if _span_dim([v for j, v in gens if j != idx], report, action) == full]
    kept = list(gens)
    for idx, _ in gens:
        trial = [(j, v) for j, v in kept if j != idx]
        if _span_dim([v for _, v in trial], report, action) == full:
            kept = trial
    kept_dim = _span_dim([v for _, v in kept], report, action)
    minimal = all(_span_dim([v for j, v in kept if j != idx], report, action) < full for idx, _ in kept)
    return PruneResult(removable, [j for j, _ in kept], kept_dim, minimal)


# --------------------------------------------------------------------------
# consequences


def _relabel_leaves(t: Tree, f) -> Tree:
    if not isinstance(t, Node):
        return f(t)
    return Node(t.op, tuple(_relabel_leaves(a, f) for a in t.args))


def consequences(identity: MultiPoly, ops: Mapping[str, int] | None = None,
                 degree: int | None = None) -> list[MultiPoly]:
    """Lift an identity of degree m to degree m + arity - 1.

    For each operation (sorted by name): the substitutions ``a_i -> op(a_i,
    new...)`` for i = 1..m; then, for each operation, the embeddings of the
    whole identity into each argument slot of ``op`` with new variables
    elsewhere. With one binary product this is the familiar list of m
    substitutions followed by ``I*x`` and ``x*I``. The zero identity needs
    an explicit ``degree``.
    """
    ops = dict(ops or {"m": 2})
    if identity:
        m = poly_degree(identity)
        if degree is not None and degree != m:
            raise ValueError(f"identity has degree {m}, not {degree}")
    elif degree is None:
        raise ValueError("the degree of the zero identity must be given")
    else:
        m = degree
    out = []
    names = sorted(ops)
    for op in names:
        n = ops[op]
        new = list(range(m, m + n - 1))
        for i in range(m):
            sub = Node(op, (i, *new))
            out.append(identity.map_monomials(lambda t, i=i, sub=sub: _relabel_leaves(t, lambda x: sub if x == i else x)))
    for op in names:
        n = ops[op]
        new = list(range(m, m + n - 1))
        for slot in range(n):
            def embed(t, slot=slot, op=op, new=new, n=n):
                args = list(new)
                args.insert(slot, t)
                return Node(op, tuple(args))
            out.append(identity.map_monomials(embed))
    return out


def lift_to_degree(identities: Sequence[MultiPoly], target: int, ops: Mapping[str, int] | None = None) -> list[MultiPoly]:
    """Iterate :func:`consequences` until every identity reaches degree ``target``."""
    ops = dict(ops or {"m": 2})
    out = []
    frontier = [p for p in identities if p]
    while frontier:
        nxt = []
        for p in frontier:
            d = poly_degree(p)
            if d == target:
                out.append(p)
            elif d < target:
                nxt.extend(q for q in consequences(p, ops) if q)
            else:
                raise ValueError(f"identity of degree {d} exceeds target {target}")
        frontier = nxt
    return out


def identity_space(identities: Sequence[MultiPoly], basis: TreeBasis, field: Field,
                   ops: Mapping[str, int] | None = None) -> IdentitySpace:
    """Module span, in ``basis``, of the identities of degree at most the basis degree, lifted to it."""
    if ops is None:
        ops = _signature(basis)
    lifted = lift_to_degree([p for p in identities if p and poly_degree(p) <= basis.degree], basis.degree, ops)
    return IdentitySpace.from_polys(lifted, basis, field)


def _signature(basis: TreeBasis) -> dict[str, int]:
    sig = {}
    stack = list(basis.types)
    while stack:
        x = stack.pop()
        if isinstance(x, Node):
            sig[x.op] = len(x.args)
            stack.extend(x.args)
    return sig


# --------------------------------------------------------------------------
# identities modulo a variety


@dataclass(eq=False)
class ModuloResult:
    left_basis: TreeBasis
    right_basis: TreeBasis
    field: Field
    consequence_rows: int
    total_rank: int
    left_rank: int
    right_rows: np.ndarray          # RCF rows of the quotient identities, right part only
    stacked: DenseMatrix | None = None
    full_rcf: DenseMatrix | None = None

    @property
    def right_rank(self) -> int:
        return len(self.right_rows)

    def polys(self) -> list[MultiPoly]:
        return to_polys(self.right_rows, self.right_basis, self.field)


def consequence_matrix(identities: Sequence[MultiPoly], left_basis: TreeBasis, field: Field) -> np.ndarray:
    """All permuted copies of each identity, identity by identity."""
    action = PermutationAction(left_basis)
    vecs = to_vectors(identities, left_basis, field)
    blocks = [module_rows(v, action, field) for v in vecs]
    if not blocks:
        dtype = np.int64 if isinstance(field, PrimeField) else object
        return np.zeros((0, len(left_basis)), dtype=dtype)
    return np.vstack(blocks)


def identities_modulo(consequence_rows, bindings: Mapping[str, Template], right_basis: TreeBasis,
                      left_basis: TreeBasis, field: Field, keep_matrices: bool = False) -> ModuloResult:
    """Reduce ``[C | 0; X | I]`` and keep the rows whose leading entry is on the right.

    ``C`` holds the variety's consequences over ``left_basis``; row i of ``X``
    is the expansion of the i-th monomial of ``right_basis``.
    """
    em = build_expansion_matrix(right_basis, bindings, field, target=left_basis)
    L, R = len(left_basis), len(right_basis)
    prime = isinstance(field, PrimeField)
    dtype = np.int64 if prime else object
    C = np.asarray(consequence_rows, dtype=dtype).reshape(-1, L)
    upper = np.zeros((C.shape[0], L + R), dtype=dtype)
    lower = np.zeros((R, L + R), dtype=dtype)
    if not prime:
        upper[...] = Fraction(0)
        lower[...] = Fraction(0)
    upper[:, :L] = C
    lower[:, :L] = em.matrix.data.T
    for i in range(R):
        lower[i, L + i] = 1 if prime else Fraction(1)
    stacked = np.vstack([upper, lower])
    res = rcf(DenseMatrix(field, stacked))
    piv = np.asarray(res.pivot_columns, dtype=np.int64)
    left_rank = int((piv < L).sum())
    right = res.rcf.data[left_rank:, L:]
    return ModuloResult(left_basis, right_basis, field, C.shape[0], res.rank, left_rank, right,
                        DenseMatrix(field, stacked) if keep_matrices else None,
                        res.rcf if keep_matrices else None)


# --------------------------------------------------------------------------
# comparing lifted identities with lifted operations


@dataclass(eq=False)
class DegreeComparison:
    degree: int
    omega_identities: int            # dim I_e
    kp_native: int                   # dim of the KP span built from degree e alone
    kp_embedded: int                 # ... plus lifts of all lower-degree KP identities
    lifted_operations: int           # dim J_e
    native_equal: bool
    embedded_equal: bool


@dataclass(eq=False)
class ConjectureReport:
    omega: str
    arity: int
    degree: int
    field: Field
    rows: list = dc_field(default_factory=list)

    @property
    def equal(self) -> bool:
        return all(r.embedded_equal for r in self.rows)

    def as_dict(self) -> dict:
        return {
            "omega": self.omega,
            "arity": self.arity,
            "degree": self.degree,
            "field": str(self.field),
            "degrees": [
                {"degree": r.degree, "I": r.omega_identities, "KP_native": r.kp_native,
                 "KP_embedded": r.kp_embedded, "J": r.lifted_operations,
                 "native_equal": r.native_equal, "embedded_equal": r.embedded_equal}
                for r in self.rows],
            "equal": self.equal,
        }


def comparison_degrees(n: int, d: int) -> list[int]:
    if n < 2:
        raise ValueError("operations of arity at least 2 are needed")
    if (d - 1) % (n - 1) or d < n:
        raise ValueError(f"degree {d} is not of the form 1 + k({n}-1) with k >= 1")
    return list(range(n, d + 1, n - 1))


def module_generators(span: Span, basis: TreeBasis) -> list:
    """A small S_n-generating set for a module given by its RCF rows."""
    rows = span.rcf_rows()
    rep = extract_generators(list(rows), basis, span.field, target_dim=span.dim)
    return rep.generators


def check_conjecture(omega, d: int, field: Field, prefix: str = "op") -> ConjectureReport:
    """Compare KP-lifted identities of ``omega`` with identities of its BSO lifts.

    Per degree e: the native KP space is spanned by Part 1 applied to a basis
    of the identities of ``omega`` (already closed under permutations) plus,
    in degree 2n-1, the permuted Part 2 identities. The embedded space adds
    the permuted lifts of the previous embedded space. Each is compared with
    the nullspace J_e of the lifted operations: equal iff contained in J_e and
    of the same dimension.
    """
    from .bso import bso
    from .kp import kp_part1, kp_part2

    n = omega.arity
    degrees = comparison_degrees(n, d)
    ops = {f"{prefix}{k}": n for k in range(1, n + 1)}
    lifted = {f"{prefix}{k + 1}": t for k, t in enumerate(bso(omega))}
    report = ConjectureReport(str(omega), n, d, field)
    prev_gens: list[MultiPoly] = []
    for e in degrees:
        single = TreeBasis(enumerate_association_types({"op": n}, e))
        iden = find_identities({"op": omega}, single, field, sort=False)
        basis = TreeBasis(enumerate_association_types(ops, e))
        action = PermutationAction(basis)
        native = Span(len(basis), field)
        part1 = [q for p in iden.polys() for q in kp_part1(p, n, prefix)]
        if part1:
            native.add(to_vectors(part1, basis, field))
        if e == 2 * n - 1:
            for v in to_vectors(kp_part2(n, prefix), basis, field):
                native.add(module_rows(v, action, field))
        embedded = native.copy()
        lifts = [q for p in prev_gens for q in consequences(p, ops) if q]
        for v in to_vectors(lifts, basis, field):
            embedded.add(module_rows(v, action, field))
        em = build_expansion_matrix(basis, lifted, field)
        J_rank = rcf(em.matrix).rank
        J_dim = len(basis) - J_rank

        def same(span: Span) -> bool:
            if span.dim != J_dim:
                return False
            rows = span.rcf_rows()
            if not len(rows):
                return True
            prod = em.matrix @ DenseMatrix(field, rows).transpose()
            return not any(x for row in prod.tolist() for x in row)

        report.rows.append(DegreeComparison(e, iden.nullity, native.dim, embedded.dim, J_dim,
                                            same(native), same(embedded)))
        if e != degrees[-1]:
            prev_gens = to_polys(module_generators(embedded, basis), basis, field)
    return report
