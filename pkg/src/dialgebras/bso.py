"""Lifting an associative n-ary operation to n dialgebra operations.

For ``omega = sum x_s a_{s(1)}...a_{s(n)}`` the i-th lifted operation keeps
every term and puts the hat on the slot holding ``a_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expansion import DiOpTemplate, GroupAlgebraOp, single_letter_args
from .monomials import all_perms, inverse


def bso(omega: GroupAlgebraOp) -> list[DiOpTemplate]:
    out = []
    for i in range(omega.arity):
        terms = {(s, s.index(i)): c for s, c in omega.terms.items()}
        out.append(DiOpTemplate(omega.arity, terms))
    return out


@dataclass(frozen=True)
class TemplateRelation:
    """``lifted[i](a_1..a_n) == lifted[j](a_{perm(1)}..a_{perm(n)})`` (indices 0-based)."""

    i: int
    j: int
    perm: tuple

    def describe(self, prefix: str = "op") -> str:
        from .monomials import letter

        lhs = ",".join(letter(x) for x in range(len(self.perm)))
        rhs = ",".join(letter(x) for x in self.perm)
        return f"{prefix}{self.i + 1}({lhs}) = {prefix}{self.j + 1}({rhs})"


@dataclass(frozen=True)
class BsoResult:
    omega: GroupAlgebraOp
    templates: list
    duplicates: list      # relations between different lifted operations
    symmetries: list      # nontrivial argument symmetries of a single lifted operation

    def redundant(self) -> list[int]:
        """Operations expressible through an earlier one (0-based)."""
        return sorted({r.i for r in self.duplicates if r.j < r.i})


def _apply(template: DiOpTemplate, perm: tuple):
    args = single_letter_args(template.arity, DiOpTemplate)
    return template.substitute([args[x] for x in perm])


def bso_report(omega: GroupAlgebraOp) -> BsoResult:
    """Lift ``omega`` and list the relations among the lifted templates."""
    templates = bso(omega)
    n = omega.arity
    ident = tuple(range(n))
    polys = [t.as_poly() for t in templates]
    dups, syms = [], []
    for i in range(n):
        for j in range(n):
            for perm in all_perms(n):
                if i == j and perm == ident:
                    continue
                if _apply(templates[j], perm) == polys[i]:
                    rel = TemplateRelation(i, j, perm)
                    (syms if i == j else dups).append(rel)
    # keep one orientation of each symmetric pair of relations
    dups = [r for r in dups if r.j < r.i or not any(
        s.i == r.j and s.j == r.i and s.perm == inverse(r.perm) for s in dups if s.j < s.i)]
    return BsoResult(omega, templates, dups, syms)
