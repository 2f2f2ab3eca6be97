"""Skew-symmetric exchange matrices: mutation, acyclicity, diagram type.

Vertices are 0-based in the Python API.  ``b[i][j] > 0`` means ``b[i][j]``
arrows ``i -> j``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

__all__ = [
    "BMatrix",
    "TypeLabel",
    "QuiverError",
    "mutate_matrix",
    "is_acyclic",
    "classify",
    "enumerate_matrices",
    "from_arrows",
    "load_quiver",
    "PRESETS",
    "preset",
]


class QuiverError(ValueError):
    """Malformed quiver or exchange matrix."""


@dataclass(frozen=True)
class BMatrix:
    """An n x n skew-symmetric integer matrix stored as a tuple of row tuples."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n < 1:
            raise QuiverError("empty matrix")
        for r in rows:
            if len(r) != n:
                raise QuiverError("matrix is not square")
        for i in range(n):
            for j in range(i, n):
                if rows[i][j] != -rows[j][i]:
                    raise QuiverError(f"not skew-symmetric at ({i + 1}, {j + 1})")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def max_abs(self) -> int:
        return max((abs(v) for r in self.rows for v in r), default=0)

    def permuted(self, perm: Sequence[int]) -> "BMatrix":
        """Conjugate by ``perm``: new vertex ``a`` is old vertex ``perm[a]``."""
        return BMatrix(tuple(tuple(self.rows[p][q] for q in perm) for p in perm))

    def transpose(self) -> "BMatrix":
        return BMatrix(tuple(zip(*self.rows)))

    def arrows(self) -> list[tuple[int, int, int]]:
        n = self.n
        return [(i, j, self.rows[i][j]) for i in range(n) for j in range(n) if self.rows[i][j] > 0]

    def to_json(self) -> list:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.rows) + "]"


def mutate_matrix(B: BMatrix, k: int) -> BMatrix:
    n = B.n
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range for rank {n}")
    b = B.rows
    out = []
    for i in range(n):
        row = []
        bik = b[i][k]
        for j in range(n):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                bkj = b[k][j]
                prod = bik * bkj
                if prod > 0:
                    row.append(b[i][j] + (prod if bik > 0 else -prod))
                else:
                    row.append(b[i][j])
        out.append(tuple(row))
    return BMatrix(tuple(out))


def is_acyclic(B: BMatrix) -> bool:
    n = B.n
    indeg = [0] * n
    for i, j, _ in B.arrows():
        indeg[j] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for j in range(n):
            if B.rows[v][j] > 0:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
    return seen == n


@dataclass(frozen=True)
class TypeLabel:
    """Result of :func:`classify`.

    ``family`` is one of ``"dynkin"``, ``"euclidean"``, ``"rank2"`` or
    ``"unknown"``; ``name`` is a display name such as ``"A3"``, ``"D~5"``,
    ``"A~(2,1)"`` or ``"rank2(r=3)"``.  For rank 2, ``equivalent`` names the
    Dynkin/Euclidean type the quiver also belongs to, if any.
    """

    family: str
    name: str
    params: tuple = ()
    equivalent: str | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.name


UNKNOWN = TypeLabel("unknown", "unknown")


def _components(n: int, adj: list[set]) -> list[list[int]]:
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _arm_lengths(adj: list[set], center: int) -> list[int]:
    arms = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if len(nxt) != 1:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def _classify_tree(n: int, adj: list[set]) -> TypeLabel:
    deg = [len(a) for a in adj]
    branch = [v for v in range(n) if deg[v] >= 3]
    if not branch:
        return TypeLabel("dynkin", f"A{n}", ("A", n))
    if len(branch) == 1:
        c = branch[0]
        if deg[c] == 4:
            if n == 5:
                return TypeLabel("euclidean", "D~4", ("D~", 4))
            return UNKNOWN
        if deg[c] != 3:
            return UNKNOWN
        arms = _arm_lengths(adj, c)
        if arms[0] == 1 and arms[1] == 1:
            return TypeLabel("dynkin", f"D{n}", ("D", n))
        if arms == [1, 2, 2]:
            return TypeLabel("dynkin", "E6", ("E", 6))
        if arms == [1, 2, 3]:
            return TypeLabel("dynkin", "E7", ("E", 7))
        if arms == [1, 2, 4]:
            return TypeLabel("dynkin", "E8", ("E", 8))
        if arms == [2, 2, 2]:
            return TypeLabel("euclidean", "E~6", ("E~", 6))
        if arms == [1, 3, 3]:
            return TypeLabel("euclidean", "E~7", ("E~", 7))
        if arms == [1, 2, 5]:
            return TypeLabel("euclidean", "E~8", ("E~", 8))
        return UNKNOWN
    if len(branch) == 2 and all(deg[c] == 3 for c in branch):
        # D~_{n-1}: two degree-3 vertices, each carrying two leaves
        for c in branch:
            leaves = [w for w in adj[c] if deg[w] == 1]
            if len(leaves) != 2:
                return UNKNOWN
        return TypeLabel("euclidean", f"D~{n - 1}", ("D~", n - 1))
    return UNKNOWN


def classify(B: BMatrix) -> TypeLabel:
    """Match the matrix's own diagram against ADE / extended ADE.

    Only the given matrix is inspected, not its mutation class.
    """
    n = B.n
    if n == 1:
        return TypeLabel("dynkin", "A1", ("A", 1))
    if n == 2:
        r = abs(B.rows[0][1])
        equivalent = {0: "A1xA1", 1: "A2", 2: "A~(1,1)"}.get(r)
        return TypeLabel("rank2", f"rank2(r={r})", (r,), equivalent)
    if not is_acyclic(B) or B.max_abs() > 1:
        return UNKNOWN
    adj = [set() for _ in range(n)]
    for i, j, _ in B.arrows():
        adj[i].add(j)
        adj[j].add(i)
    if len(_components(n, adj)) != 1:
        return UNKNOWN
    edges = sum(len(a) for a in adj) // 2
    if edges == n - 1:
        return _classify_tree(n, adj)
    if edges == n and all(len(a) == 2 for a in adj):
        # acyclic orientation of an n-cycle: count arrows each way round
        order, prev, cur = [0], None, 0
        for _ in range(n - 1):
            prev, cur = cur, next(w for w in adj[cur] if w != prev)
            order.append(cur)
        fwd = sum(1 for a, b in zip(order, order[1:] + order[:1]) if B.rows[a][b] > 0)
        p, q = max(fwd, n - fwd), min(fwd, n - fwd)
        return TypeLabel("euclidean", f"A~({p},{q})", ("A~", p, q))
    return UNKNOWN


def enumerate_matrices(n: int, bound: int) -> Iterator[BMatrix]:
    """Every skew-symmetric n x n matrix with entries in [-bound, bound]."""
    if n < 1 or bound < 0:
        raise ValueError("need n >= 1 and bound >= 0")
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    values = range(-bound, bound + 1)
    for choice in itertools.product(values, repeat=len(slots)):
        m = [[0] * n for _ in range(n)]
        for (i, j), v in zip(slots, choice):
            m[i][j] = v
            m[j][i] = -v
        yield BMatrix(tuple(tuple(r) for r in m))


def from_arrows(n: int, arrows: Sequence[Sequence[int]]) -> BMatrix:
    """Build a matrix from 1-based ``(source, target, multiplicity)`` triples."""
    m = [[0] * n for _ in range(n)]
    for arrow in arrows:
        if len(arrow) != 3:
            raise QuiverError(f"arrow {arrow!r} is not [from, to, multiplicity]")
        s, t, mult = (int(v) for v in arrow)
        if not (1 <= s <= n and 1 <= t <= n):
            raise QuiverError(f"arrow {arrow!r} has a vertex outside 1..{n}")
        if s == t:
            raise QuiverError(f"loop at vertex {s}")
        if mult <= 0:
            raise QuiverError(f"non-positive multiplicity in {arrow!r}")
        if m[t - 1][s - 1] > 0:
            raise QuiverError(f"2-cycle between {s} and {t}")
        m[s - 1][t - 1] += mult
        m[t - 1][s - 1] -= mult
    return BMatrix(tuple(tuple(r) for r in m))


def load_quiver(source) -> BMatrix:
    """Load ``{"rank", "arrows"}`` or ``{"matrix"}`` JSON from a path or dict.

    Disconnected quivers are accepted.
    """
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text())
    else:
        data = source
    if not isinstance(data, dict):
        raise QuiverError("quiver JSON must be an object")
    if "matrix" in data:
        return BMatrix(tuple(tuple(r) for r in data["matrix"]))
    if "rank" in data and "arrows" in data:
        return from_arrows(int(data["rank"]), data["arrows"])
    raise QuiverError('quiver JSON needs "matrix" or "rank" + "arrows"')


def _linear(n: int, edges) -> BMatrix:
    return from_arrows(n, [(s, t, 1) for s, t in edges])


def _path(n: int) -> BMatrix:
    return _linear(n, [(i, i + 1) for i in range(1, n)])


def _type_d(n: int) -> BMatrix:
    edges = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    return _linear(n, edges)


def _type_e(n: int) -> BMatrix:
    # path 1 - 2 - ... - (n-1) with vertex n hanging off vertex 3
    edges = [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]
    return _linear(n, edges)


PRESETS = {
    "a1": lambda: BMatrix(((0,),)),
    "a2": lambda: _path(2),
    "a3": lambda: _path(3),
    "a4": lambda: _path(4),
    "a5": lambda: _path(5),
    "d4": lambda: _type_d(4),
    "d5": lambda: _type_d(5),
    "d6": lambda: _type_d(6),
    "e6": lambda: _type_e(6),
    "e7": lambda: _type_e(7),
    "e8": lambda: _type_e(8),
    "kronecker": lambda: from_arrows(2, [(1, 2, 2)]),
    "atilde12": lambda: from_arrows(3, [(2, 1, 1), (1, 3, 2), (3, 2, 1)]),
}


def preset(name: str) -> BMatrix:
    try:
        return PRESETS[name.lower()]()
    except KeyError:
        raise QuiverError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
