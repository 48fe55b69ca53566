"""Named computations with their expected results built in.

Every experiment returns a :class:`Report` holding the computed numbers and a
list of checks against the expected values; the report is ``ok`` iff every
check passes.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from .engine import (IdentitySpace, check_conjecture, consequence_matrix, extract_generators,
                     find_identities, identities_modulo, identity_space, lift_to_degree, module_span,
                     sort_candidates, superfluity_prune, to_vectors)
from .expansion import GroupAlgebraOp, binary_basis, expand_poly
from .linalg import GF, Field, PrimeField, RationalField
from .poly import MultiPoly, format_poly
from .varieties import (ConsequenceSpaces, builtin, corrupt_sign, differential_triple_operations, diproduct_basis,
                        diproducts, dual_number_extension, jordan_triple_basis, jordan_triple_operations,
                        make_differential_dialgebra, matrix_algebra, scalars, special_jordan_product,
                        two_operation_basis, verify_modulo, verify_on_free, verify_on_instance)

SCHEMA = "dialgebras.report/1"


class FieldTooSmallError(ValueError):
    pass


def validate_field(field: Field, degree: int) -> None:
    if isinstance(field, PrimeField) and field.p <= degree:
        raise FieldTooSmallError(f"modulus {field.p} must exceed the degree {degree}")


def field_name(field: Field) -> str:
    return "rational" if isinstance(field, RationalField) else "prime"


def plain(field: Field, x):
    """Field element as a JSON-friendly signed value."""
    v = field.signed(x)
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return int(v)


@dataclass
class Check:
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class Report:
    experiment: str
    degree: int
    field: Field
    data: dict = dc_field(default_factory=dict)
    checks: list = dc_field(default_factory=list)
    tables: dict = dc_field(default_factory=dict)     # name -> rows of strings, for TSV output

    def check(self, name: str, expected, actual) -> None:
        self.checks.append(Check(name, expected, actual))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "experiment": self.experiment,
            "degree": self.degree,
            "field": field_name(self.field),
            "modulus": self.field.p if isinstance(self.field, PrimeField) else None,
        }
        out.update(self.data)
        out["checks"] = [{"name": c.name, "expected": c.expected, "actual": c.actual, "ok": c.ok}
                         for c in self.checks]
        out["ok"] = self.ok
        return out

    def to_tsv(self) -> str:
        d = self.as_dict()
        lines = []
        for k, v in d.items():
            if k == "checks":
                continue
            lines.append(f"{k}\t{_tsv_value(v)}")
        for c in d["checks"]:
            lines.append(f"check\t{c['name']}\t{_tsv_value(c['expected'])}\t{_tsv_value(c['actual'])}\t"
                         f"{'pass' if c['ok'] else 'FAIL'}")
        for name, rows in self.tables.items():
            lines.append(f"# {name}")
            lines.extend("\t".join(str(x) for x in row) for row in rows)
        return "\n".join(lines) + "\n"


def _tsv_value(v) -> str:
    if isinstance(v, (list, tuple)) and v and isinstance(v[0], (list, tuple)):
        return f"matrix {len(v)}x{len(v[0])}"
    if isinstance(v, (list, tuple)):
        return ",".join(_tsv_value(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, default=str)
    if v is None:
        return ""
    return str(v).lower() if isinstance(v, bool) else str(v)


def _signed_vectors(field: Field, vectors) -> list[list]:
    return [[plain(field, x) for x in v] for v in vectors]


def _rows_of(field: Field, matrix) -> list[list]:
    return [[plain(field, x) for x in row] for row in matrix.tolist()]


# --------------------------------------------------------------------------
# diproducts


def diproduct1_deg3(field: Field) -> Report:
    rep = Report("diproduct1-deg3", 3, field)
    validate_field(field, 3)
    res = find_identities(diproducts(), diproduct_basis("op1", 3), field)
    em = res.expansion
    rep.data.update(matrix_shape=list(em.shape), rank=res.rank, nullity=res.nullity,
                    generators=[], rank_trajectory=[])
    rep.tables["expansion"] = [[""] + em.cols] + [[r] + row for r, row in zip(em.rows, _rows_of(field, em.matrix))]
    rep.check("matrix_shape", [18, 6], list(em.shape))
    rep.check("rank", 6, res.rank)
    rep.check("nullity", 0, res.nullity)
    return rep


DIPRODUCT2_DEG3_NULLSPACE = [[0, -1, 0, 1, 0, 0], [0, 0, -1, 0, 1, 0], [-1, 0, 0, 0, 0, 1]]


def diproduct2_deg3(field: Field) -> Report:
    rep = Report("diproduct2-deg3", 3, field)
    validate_field(field, 3)
    res = find_identities(diproducts(), diproduct_basis("op2", 3), field, sort=False)
    ns = _signed_vectors(field, res.identities)
    rep.data.update(matrix_shape=list(res.expansion.shape), rank=res.rank, nullity=res.nullity,
                    nullspace=ns, generators=[format_poly(p) for p in res.polys()], rank_trajectory=[])
    rep.check("matrix_shape", [18, 6], list(res.expansion.shape))
    rep.check("rank", 3, res.rank)
    rep.check("nullspace", DIPRODUCT2_DEG3_NULLSPACE, ns)
    return rep


def _same_module(vectors_a, vectors_b, basis, field) -> tuple[int, int, int]:
    """Dimensions of the module spans of a, b and a + b."""
    a = module_span(vectors_a, basis, field)
    b = module_span(vectors_b, basis, field)
    both = a.copy()
    if b.dim:
        both.add(b.rcf_rows())
    return a.dim, b.dim, both.dim


def diproduct1_deg5(field: Field) -> Report:
    rep = Report("diproduct1-deg5", 5, field)
    validate_field(field, 5)
    basis = diproduct_basis("op1", 5)
    res = find_identities(diproducts(), basis, field)
    signed = _signed_vectors(field, res.identities)
    values = sorted({x for v in signed for x in v if x})
    census = Counter(sum(1 for x in v if x) for v in signed)
    gen = extract_generators(res.identities, basis, field, target_dim=res.nullity)
    printed = builtin("diproduct1-deg5").identities
    dims = _same_module(gen.generators, to_vectors(printed, basis, field), basis, field)
    rep.data.update(matrix_shape=list(res.expansion.shape), rank=res.rank, nullity=res.nullity,
                    support_census={str(k): census[k] for k in sorted(census)},
                    generators=[format_poly(p) for p in gen.generator_polys()],
                    accepted=gen.accepted, rank_trajectory=gen.trajectory,
                    printed_generator_span=dims[1])
    rep.check("matrix_shape", [600, 360], list(res.expansion.shape))
    rep.check("rank", 150, res.rank)
    rep.check("nullity", 210, res.nullity)
    rep.check("nonzero_coefficients", [-1, 1], values)
    rep.check("support_census", {2: 30, 4: 120, 6: 60}, dict(sorted(census.items())))
    rep.check("generators", 3, len(gen.generators))
    rep.check("generator_span", 210, gen.final_dim)
    rep.check("same_span_as_printed_generators", [210, 210, 210], list(dims))
    return rep


def diproduct2_deg5(field: Field) -> Report:
    rep = Report("diproduct2-deg5", 5, field)
    validate_field(field, 5)
    res = find_identities(diproducts(), diproduct_basis("op2", 5), field)
    rep.data.update(matrix_shape=list(res.expansion.shape), rank=res.rank, nullity=res.nullity,
                    generators=[], rank_trajectory=[])
    rep.check("matrix_shape", [600, 90], list(res.expansion.shape))
    rep.check("rank", 90, res.rank)
    rep.check("nullity", 0, res.nullity)
    return rep


def diproducts_deg5_both(field: Field) -> Report:
    rep = Report("diproducts-deg5-both", 5, field)
    validate_field(field, 5)
    basis = diproduct_basis("both", 5)
    res = find_identities(diproducts(), basis, field)
    seed = to_vectors(builtin("diproducts-seed").identities, basis, field)
    gen = extract_generators(res.identities, basis, field, seeds=seed, target_dim=res.nullity,
                             expansion=res.expansion)
    prune = superfluity_prune(gen)
    printed = to_vectors(builtin("diproducts-seed").identities + builtin("diproducts-deg5-generators").identities,
                         basis, field)
    printed_dim = module_span(printed, basis, field).dim
    rep.data.update(matrix_shape=list(res.expansion.shape), rank=res.rank, nullity=res.nullity,
                    seed_span=gen.seed_dim, generators=[format_poly(p) for p in gen.generator_polys()],
                    accepted=gen.accepted, rank_trajectory=gen.trajectory, removable=prune.removable,
                    printed_generator_span=printed_dim)
    rep.check("matrix_shape", [600, 690], list(res.expansion.shape))
    rep.check("rank", 250, res.rank)
    rep.check("nullity", 440, res.nullity)
    rep.check("seed_span", 90, gen.seed_dim)
    rep.check("generators", 6, len(gen.generators))
    rep.check("removable_generators", [], prune.removable)
    rep.check("final_span", 440, gen.final_dim)
    rep.check("printed_generator_span", 440, printed_dim)
    return rep


# --------------------------------------------------------------------------
# the two axiom sets for two trilinear operations


def theorem_equivalence(field: Field) -> Report:
    rep = Report("theorem-equivalence", 5, field)
    validate_field(field, 5)
    ops = {"op1": 3, "op2": 3}
    dims = {}
    for d in (3, 5):
        basis = two_operation_basis(d)
        spaces = {name: identity_space(builtin(name).identities, basis, field, ops)
                  for name in ("jtd-kp", "jtd-bso", "jtd")}
        res = find_identities(diproducts(), basis, field, sort=False)
        null = IdentitySpace.from_vectors(res.identities, basis, field, module=False)
        dims[d] = {k: v.dim for k, v in spaces.items()} | {"diproduct_nullspace": null.dim}
        rep.check(f"degree {d}: kp set equals bso set", True, spaces["jtd-kp"] == spaces["jtd-bso"])
        rep.check(f"degree {d}: kp set equals J1-J8", True, spaces["jtd-kp"] == spaces["jtd"])
        rep.check(f"degree {d}: kp set equals diproduct identities", True, spaces["jtd-kp"] == null)
    rep.data.update(columns={str(d): len(two_operation_basis(d)) for d in (3, 5)},
                    dimensions={str(d): dims[d] for d in (3, 5)})
    return rep


def _fig_rows(field: Field, rows: list[str]) -> list[list]:
    sym = {".": 0, "+": 1, "-": -1, "*": Fraction(1, 2)}
    return [[plain(field, field.convert(sym[c])) for c in r] for r in rows]


FIGURE_STACKED = [
    "......+-................", "......-+................", "........+-..............",
    "........-+..............", "..........+-............", "..........-+............",
    "+-....+.....+...........", "-+.....+.....+..........", "..+-....+.....+.........",
    "..-+.....+.....+........", "....+-....+.....+.......", "....-+.....+.....+......",
    "..++....-.........+.....", "....++....-........+....", "++....-.............+...",
    "....++.....-.........+..", "++.....-..............+.", "..++.....-.............+",
]
FIGURE_RCF = [
    "+...........*.........*.", ".+...........*........*.", "..+...........*........*",
    "...+...........*.......*", "....+...........*....*..", ".....+...........*...*..",
    "......+.....**..........", ".......+....**..........", "........+.....**........",
    ".........+....**........", "..........+.....**......", "...........+....**......",
    "..................+....-", "...................+.-..", "....................+.-.",
]


def jordan_dialgebra_deg3(field: Field) -> Report:
    rep = Report("jordan-dialgebra-deg3", 3, field)
    validate_field(field, 3)
    jd = builtin("jordan-dialgebra")
    left = binary_basis(3)
    right = jordan_triple_basis(3)
    rows = consequence_matrix([p for p in jd.identities if _deg(p) == 3], left, field)
    res = identities_modulo(rows, jordan_triple_operations(), right, left, field, keep_matrices=True)
    stacked = _rows_of(field, res.stacked)
    reduced = _rows_of(field, res.full_rcf)
    expected_right = builtin("jordan-di-triple-deg3").identities
    a, b, both = _same_module(res.right_rows, to_vectors(expected_right, right, field), right, field)
    rep.data.update(matrix_shape=list(res.stacked.shape), rank=res.total_rank, left_rank=res.left_rank,
                    right_rank=res.right_rank, generators=[format_poly(p) for p in res.polys()],
                    rank_trajectory=[])
    header = [left.label(i) for i in range(len(left))] + [right.label(i) for i in range(len(right))]
    rep.tables["stacked"] = [header] + stacked
    rep.tables["rcf"] = [header] + reduced
    rep.check("stacked_matrix", _fig_rows(field, FIGURE_STACKED), stacked)
    rep.check("rank", 15, res.total_rank)
    rep.check("rcf", _fig_rows(field, FIGURE_RCF), reduced)
    rep.check("right_rows", 3, res.right_rank)
    rep.check("right_rows_span_permutations_of_symmetry", [3, 3, 3], [a, b, both])
    return rep


def _deg(p: MultiPoly) -> int:
    from .poly import poly_degree
    return poly_degree(p)


def jordan_dialgebra_deg5(field: Field) -> Report:
    rep = Report("jordan-dialgebra-deg5", 5, field)
    validate_field(field, 5)
    jd = builtin("jordan-dialgebra")
    left = binary_basis(5)
    right = jordan_triple_basis(5)
    lifted = lift_to_degree(jd.identities, 5)
    rows = consequence_matrix(lifted, left, field)
    res = identities_modulo(rows, jordan_triple_operations(), right, left, field)
    order = sort_candidates(list(res.right_rows), field)
    cands = [res.right_rows[i] for i in order]
    gen = extract_generators(cands, right, field, target_dim=res.right_rank)
    prune = superfluity_prune(gen)
    printed = to_vectors(builtin("jordan-di-triple-deg5").identities, right, field)
    dims = _same_module(gen.generators, printed, right, field)
    rep.data.update(consequences=len(lifted), matrix_shape=[int(rows.shape[0]) + len(right), len(left) + len(right)],
                    consequence_rows=int(rows.shape[0]), left_columns=len(left), right_columns=len(right),
                    rank=res.total_rank, left_rank=res.left_rank, right_rank=res.right_rank,
                    generators=[format_poly(p) for p in gen.generator_polys()], accepted=gen.accepted,
                    rank_trajectory=gen.trajectory, removable=prune.removable, kept=prune.kept,
                    printed_generator_span=dims[1])
    rep.check("consequences", 42, len(lifted))
    rep.check("consequence_rows", 5040, int(rows.shape[0]))
    rep.check("left_columns", 1680, len(left))
    rep.check("right_columns", 810, len(right))
    rep.check("rank", 2215, res.total_rank)
    rep.check("left_rank", 1655, res.left_rank)
    rep.check("right_rank", 560, res.right_rank)
    rep.check("rank_trajectory", [120, 240, 360, 390, 450, 470, 530, 560], gen.trajectory)
    rep.check("kept_after_prune", 7, len(prune.kept))
    rep.check("kept_span", 560, prune.kept_dim)
    rep.check("same_span_as_printed_generators", [560, 560, 560], list(dims))
    return rep


# --------------------------------------------------------------------------
# varieties and instances


def variety_verification(field: Field) -> Report:
    rep = Report("variety-verification", 5, field)
    validate_field(field, 5)
    jtd = builtin("jtd").identities
    bad = corrupt_sign(jtd[4])
    free = verify_on_free(jtd, diproducts())
    spaces = ConsequenceSpaces(builtin("jordan-dialgebra"), field)
    modulo = verify_modulo(jtd, spaces.variety, jordan_triple_operations(), field, spaces)
    bad_free = verify_on_free([bad], diproducts())[0]
    bad_modulo = verify_modulo([bad], spaces.variety, jordan_triple_operations(), field, spaces)[0]
    rep.data.update(free_dialgebra=free, modulo_jordan_dialgebra=modulo, corrupted=format_poly(bad),
                    generators=[], rank_trajectory=[])
    rep.check("J1-J8 under diproducts", [True] * 8, free)
    rep.check("J1-J8 modulo Jordan dialgebras", [True] * 8, modulo)
    rep.check("corrupted J5 under diproducts", False, bad_free)
    rep.check("corrupted J5 modulo Jordan dialgebras", False, bad_modulo)
    return rep


def special_reduction(field: Field) -> Report:
    rep = Report("special-reduction", 3, field)
    validate_field(field, 3)
    jordan = special_jordan_product()
    out = {}
    for name, tmpl in jordan_triple_operations().items():
        reduced = expand_poly(MultiPoly(tmpl.terms), jordan)
        twice = diproducts()[name].as_poly() * 2
        out[name] = format_poly(reduced)
        rep.check(f"{name} equals twice the diproduct", True, reduced == twice)
    rep.data.update(reduced=out, generators=[], rank_trajectory=[])
    return rep


def differential_instance(field: Field, trials: int = 200, seed: int = 0) -> Report:
    if not isinstance(field, PrimeField):
        field = GF(101)
    p = field.p
    rep = Report("differential-instance", 5, field)
    validate_field(field, 5)
    mult, d = dual_number_extension(matrix_algebra(2, p), p)
    D = make_differential_dialgebra(mult, d, p)
    ops = differential_triple_operations(mult, d, p)
    jtd = builtin("jtd").identities
    good = verify_on_instance(jtd, ops, D.dim, p, trials, seed)
    bad = verify_on_instance([corrupt_sign(jtd[4])], ops, D.dim, p, trials, seed)
    m2, d2 = dual_number_extension(scalars(p), p)
    small = make_differential_dialgebra(m2, d2, p)
    zero = make_differential_dialgebra(matrix_algebra(2, p), np.zeros((4, 4), dtype=np.int64), p)
    rep.data.update(dimension=D.dim, trials=trials, seed=seed, violations=good.violations,
                    max_weight=good.max_weight, corrupted_violations=bad.violations[0],
                    generators=[], rank_trajectory=[])
    rep.check("dimension", 8, D.dim)
    rep.check("violations", [0] * 8, good.violations)
    rep.check("corrupted J5 detected", True, bad.violations[0] > 0)
    rep.check("dual numbers dimension", 2, small.dim)
    rep.check("zero differential gives zero products", True, not zero.left.any() and not zero.right.any())
    return rep


def conjecture_jts(field: Field) -> Report:
    rep = Report("conjecture", 5, field)
    validate_field(field, 5)
    res = check_conjecture(GroupAlgebraOp.parse("abc+cba"), 5, field)
    rep.data.update({k: v for k, v in res.as_dict().items() if k != "field"})
    rep.data.update(generators=[], rank_trajectory=[])
    rep.check("equal", True, res.equal)
    return rep


# --------------------------------------------------------------------------
# the same ranks in every field


def _ranks(field: Field, max_degree: int) -> dict:
    out = {}
    for name, fn in EXPERIMENTS.items():
        if name in ("field-agnosticism", "variety-verification", "special-reduction", "differential-instance",
                    "conjecture"):
            continue
        if EXPERIMENT_DEGREE[name] > max_degree:
            continue
        r = fn(field).as_dict()
        out[name] = {k: r[k] for k in ("rank", "nullity", "left_rank", "right_rank", "rank_trajectory",
                                       "dimensions", "seed_span") if k in r}
    return out


def field_agnosticism(field: Field) -> Report:
    rep = Report("field-agnosticism", 5, field)
    ref = _ranks(GF(101), 5)
    other = _ranks(GF(103), 5)
    rational = _ranks(RationalField(), 3)
    rep.data.update(F101=ref, F103=other, rational=rational, generators=[], rank_trajectory=[])
    for name in ref:
        rep.check(f"{name}: F101 vs F103", ref[name], other[name])
    for name in rational:
        rep.check(f"{name}: F101 vs rational", ref[name], rational[name])
    return rep


EXPERIMENTS: dict[str, Callable[[Field], Report]] = {
    "diproduct1-deg3": diproduct1_deg3,
    "diproduct2-deg3": diproduct2_deg3,
    "diproduct1-deg5": diproduct1_deg5,
    "diproduct2-deg5": diproduct2_deg5,
    "diproducts-deg5-both": diproducts_deg5_both,
    "theorem-equivalence": theorem_equivalence,
    "jordan-dialgebra-deg3": jordan_dialgebra_deg3,
    "jordan-dialgebra-deg5": jordan_dialgebra_deg5,
    "variety-verification": variety_verification,
    "special-reduction": special_reduction,
    "differential-instance": differential_instance,
    "conjecture": conjecture_jts,
    "field-agnosticism": field_agnosticism,
}

EXPERIMENT_DEGREE = {
    "diproduct1-deg3": 3, "diproduct2-deg3": 3, "diproduct1-deg5": 5, "diproduct2-deg5": 5,
    "diproducts-deg5-both": 5, "theorem-equivalence": 5, "jordan-dialgebra-deg3": 3,
    "jordan-dialgebra-deg5": 5, "variety-verification": 5, "special-reduction": 3,
    "differential-instance": 5, "conjecture": 5, "field-agnosticism": 5,
}


def run(name: str, field: Field) -> Report:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; known: {', '.join(EXPERIMENTS)}")
    return EXPERIMENTS[name](field)
