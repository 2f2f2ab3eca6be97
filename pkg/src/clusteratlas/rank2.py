"""Rank-2 cluster algebras through the recurrence x[m+1] * x[m-1] = x[m]^r + 1.

In rank 2 every seed is a pair of consecutive chain terms, so the exchange
graph is a line (r >= 2) or a cycle (r <= 1) and no seed search is needed.
The chain is indexed as in ``x_1, x_2``: a window of depth ``d`` holds
``x_m`` for ``2 - d <= m <= d + 1``, i.e. ``2d`` terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .laurent import LaurentPoly, den_vector, div_exact
from .seed import DivisionNotExact

__all__ = ["Rank2Chain", "enumerate_chain", "special_variables", "clusters_containing_x1"]


@dataclass
class Rank2Chain:
    r: int
    depth: int
    start: int  # chain index of terms[0]
    terms: list = field(repr=False)
    period: int | None = None

    def __getitem__(self, m: int) -> LaurentPoly:
        return self.terms[m - self.start]

    @property
    def indices(self) -> range:
        return range(self.start, self.start + len(self.terms))

    def distinct(self) -> list[LaurentPoly]:
        """Distinct variables in the window, in order of first appearance."""
        seen: dict[LaurentPoly, None] = {}
        for t in self.terms:
            seen.setdefault(t, None)
        return list(seen)

    @property
    def periodic(self) -> bool:
        return self.period is not None

    def clusters(self) -> list[frozenset]:
        return [frozenset((a, b)) for a, b in zip(self.terms, self.terms[1:])]

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "depth": self.depth,
            "periodic": self.periodic,
            "period": self.period,
            "distinct_variables": len(self.distinct()),
            "chain": [
                {
                    "m": m,
                    "variable": self[m].to_json(),
                    "text": self[m].to_fraction_string(),
                    "den": list(den_vector(self[m])),
                }
                for m in self.indices
            ],
        }


def _step(r: int, cur: LaurentPoly, prev: LaurentPoly) -> LaurentPoly:
    q = div_exact(cur ** r + 1, prev)
    if q is None:
        raise DivisionNotExact("rank-2 recurrence step is not a Laurent polynomial")
    return q


def enumerate_chain(r: int, depth: int) -> Rank2Chain:
    """Terms ``x_m`` for ``2 - depth <= m <= depth + 1``.

    The recurrence runs forward from ``(x_1, x_2)``.  Running it backward is
    running it forward from ``(x_2, x_1)``, so the backward half is the
    forward half with the two variables swapped.
    """
    if r < 0 or depth < 1:
        raise ValueError("need r >= 0 and depth >= 1")
    x1, x2 = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
    forward = [x1, x2]
    while len(forward) < depth + 1:
        forward.append(_step(r, forward[-1], forward[-2]))
    backward = [_swap(t) for t in forward]
    # backward[j] is x_{2-j}
    terms = backward[:1:-1] + forward
    chain = Rank2Chain(r, depth, 2 - depth, terms)
    chain.period = _period(r)
    return chain


def _swap(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(2, {(b, a): c for (a, b), c in p.items()})


def _period(r: int) -> int | None:
    """Period of the chain, found by running it until (x_1, x_2) recurs."""
    if r >= 2:
        return None
    x1, x2 = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
    prev, cur = x1, x2
    for steps in range(1, 16):
        prev, cur = cur, _step(r, cur, prev)
        if (prev, cur) == (x1, x2):
            return steps
    return None


def special_variables(chain: Rank2Chain) -> list[LaurentPoly]:
    """Variables of the window whose denominator misses ``x_1`` or ``x_2``."""
    return [v for v in chain.distinct() if min(den_vector(v)) <= 0]


def clusters_containing_x1(chain: Rank2Chain) -> int:
    if chain.depth < 2:
        raise ValueError("need depth >= 2")
    x1 = LaurentPoly.var(2, 0)
    return len({c for c in chain.clusters() if x1 in c})
