"""Seeds (cluster + exchange matrix) and their mutation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .laurent import LaurentPoly, div_exact, mul
from .quiver import BMatrix, mutate_matrix

__all__ = [
    "Seed",
    "DivisionNotExact",
    "initial_seed",
    "exchange_binomial",
    "mutate_seed",
    "canonical_key",
    "canonical_form",
]


class DivisionNotExact(ArithmeticError):
    """An exchange relation produced a non-Laurent element."""


@dataclass(frozen=True)
class Seed:
    vars: tuple
    matrix: BMatrix

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        n = self.matrix.n
        if len(self.vars) != n:
            raise ValueError(f"{len(self.vars)} variables for a rank-{n} matrix")
        for v in self.vars:
            if v.rank != self.vars[0].rank:
                raise ValueError("variables of mixed rank")

    @property
    def n(self) -> int:
        return self.matrix.n

    def to_json(self) -> dict:
        return {"matrix": self.matrix.to_json(), "vars": [v.to_json() for v in self.vars]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Seed":
        return cls(
            tuple(LaurentPoly.from_json(v) for v in data["vars"]),
            BMatrix(tuple(tuple(r) for r in data["matrix"])),
        )


def initial_seed(B: BMatrix) -> Seed:
    n = B.n
    return Seed(tuple(LaurentPoly.var(n, i) for i in range(n)), B)


def _power(p: LaurentPoly, e: int) -> LaurentPoly:
    return p if e == 1 else p ** e


def exchange_binomial(vars: Sequence[LaurentPoly], B: BMatrix, k: int) -> LaurentPoly:
    """Product over arrows into ``k`` plus product over arrows out of ``k``."""
    rank = vars[0].rank
    incoming = LaurentPoly.one(rank)
    outgoing = LaurentPoly.one(rank)
    for i in range(B.n):
        b = B.rows[i][k]
        if b > 0:
            incoming = mul(incoming, _power(vars[i], b))
        elif b < 0:
            outgoing = mul(outgoing, _power(vars[i], -b))
    return incoming + outgoing


def mutate_seed(S: Seed, k: int) -> Seed:
    if not 0 <= k < S.n:
        raise IndexError(f"mutation index {k} out of range for rank {S.n}")
    new = div_exact(exchange_binomial(S.vars, S.matrix, k), S.vars[k])
    if new is None:
        raise DivisionNotExact(f"exchange at position {k + 1} is not a Laurent polynomial")
    vars = list(S.vars)
    vars[k] = new
    return Seed(tuple(vars), mutate_matrix(S.matrix, k))


def canonical_form(S: Seed) -> tuple[Seed, tuple]:
    """Return the seed with variables sorted, and the sorting permutation.

    ``perm[a]`` is the old position of the variable now at position ``a``.
    """
    perm = tuple(sorted(range(S.n), key=lambda i: S.vars[i].sort_key()))
    for a, b in zip(perm, perm[1:]):
        if S.vars[a] == S.vars[b]:
            raise ValueError("seed contains a repeated variable")
    if perm == tuple(range(S.n)):
        return S, perm
    return Seed(tuple(S.vars[i] for i in perm), S.matrix.permuted(perm)), perm


def canonical_key(S: Seed) -> tuple:
    """Hashable identity of a seed up to simultaneous permutation."""
    C, _ = canonical_form(S)
    return (C.vars, C.matrix.rows)
