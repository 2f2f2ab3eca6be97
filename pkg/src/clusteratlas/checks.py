"""Brute-force checks of compatibility, denominator and structure claims.

All checks read a finished :class:`~clusteratlas.atlas.ExchangeAtlas`.  The
denominator-based checks work from one table: for every stored seed ``s`` and
variable ``w``, the denominator vector of ``w`` expanded in the cluster of
``s`` (see :func:`~clusteratlas.atlas.rebase`).
"""

from __future__ import annotations

import itertools
import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .atlas import ExchangeAtlas, rebase
from .laurent import (
    LaurentFraction,
    LaurentPoly,
    den_vector,
    fraction_equal,
    substitute,
)
from .quiver import BMatrix, classify, enumerate_matrices, mutate_matrix
from .seed import exchange_binomial

__all__ = [
    "TruncatedAtlas",
    "CheckReport",
    "PairReport",
    "StructureCandidate",
    "AutomorphismCandidate",
    "VariableIndex",
    "compatible",
    "compatible_bounded",
    "compatibility_witness",
    "denominator_clean",
    "DenominatorTable",
    "verify_conjecture3",
    "verify_conjecture4",
    "verify_lemma21",
    "unistructural_search",
    "verify_theorem1",
]

_PRIME = (1 << 61) - 1


class TruncatedAtlas(ValueError):
    """A check that needs the full exchange graph was given a truncated one."""


def _require_complete(atlas: ExchangeAtlas, what: str) -> None:
    if not atlas.complete:
        raise TruncatedAtlas(f"{what} needs a complete atlas (status is {atlas.status})")


@dataclass
class CheckReport:
    check: str
    type: str
    parameters: dict
    checked: int
    violations: list
    elapsed: float = 0.0
    unit: str = "pairs"
    summary: dict = field(default_factory=dict)
    details: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        counter = "pairs_checked" if self.unit == "pairs" else "candidates_checked"
        return {
            "check": self.check,
            "type": self.type,
            "parameters": self.parameters,
            counter: self.checked,
            "violations": self.violations,
            "summary": self.summary,
            "elapsed": round(self.elapsed, 6),
        }

    def line(self) -> str:
        unit = "ordered pairs" if self.unit == "pairs" else self.unit
        return f"{len(self.violations)} violations / {self.checked} {unit}"


# -- compatibility ---------------------------------------------------------


def compatibility_witness(atlas: ExchangeAtlas, v, w) -> int | None:
    """Id of the first cluster containing both variables, or ``None``."""
    i, j = atlas.var_id(v), atlas.var_id(w)
    for c, members in enumerate(atlas.clusters):
        if i in members and j in members:
            return c
    return None


def compatible(atlas: ExchangeAtlas, v, w) -> bool:
    _require_complete(atlas, "compatible")
    return compatibility_witness(atlas, v, w) is not None


def compatible_bounded(atlas: ExchangeAtlas, v, w) -> bool | None:
    """``True`` if an enumerated cluster holds both, else ``None`` (unknown)."""
    return True if compatibility_witness(atlas, v, w) is not None else None


class DenominatorTable:
    """``den[s][w]``: denominator vector of variable ``w`` in seed ``s``."""

    def __init__(self, atlas: ExchangeAtlas):
        self.atlas = atlas
        self.den = []
        for s in range(len(atlas.seeds)):
            self.den.append([den_vector(p) for p in rebase(atlas, s)])
        self.positions = [atlas.seed_vars(s) for s in range(len(atlas.seeds))]
        self._seeds_of: dict[int, list[tuple[int, int]]] = {}
        for s, ids in enumerate(self.positions):
            for pos, v in enumerate(ids):
                self._seeds_of.setdefault(v, []).append((s, pos))

    def seeds_of(self, v: int) -> list[tuple[int, int]]:
        """``(seed, position)`` for every stored seed containing ``v``."""
        return self._seeds_of.get(v, [])

    def clean(self, v: int, w: int) -> bool:
        return all(self.den[s][w][pos] <= 0 for s, pos in self.seeds_of(v))

    def dirty_seed(self, v: int, w: int) -> int | None:
        for s, pos in self.seeds_of(v):
            if self.den[s][w][pos] > 0:
                return s
        return None


def _table(atlas: ExchangeAtlas) -> DenominatorTable:
    cached = getattr(atlas, "_den_table", None)
    if cached is None:
        cached = DenominatorTable(atlas)
        atlas._den_table = cached
    return cached


def denominator_clean(atlas: ExchangeAtlas, v, w) -> bool:
    """No seed containing ``v`` has ``v`` in the denominator of ``w``.

    On a truncated atlas only enumerated seeds are consulted.
    """
    return _table(atlas).clean(atlas.var_id(v), atlas.var_id(w))


@dataclass(frozen=True)
class PairReport:
    pair: tuple
    compatible: bool | None
    denominator_clean: bool
    witness: int | None = None

    def to_json(self, atlas: ExchangeAtlas) -> dict:
        return {
            "pair": list(self.pair),
            "variables": [atlas.variables[i].to_fraction_string() for i in self.pair],
            "compatible": self.compatible,
            "denominator_clean": self.denominator_clean,
            "witness_cluster": self.witness,
        }


def _type_name(atlas: ExchangeAtlas) -> str:
    return classify(atlas.base.matrix).name


def _pairs(atlas: ExchangeAtlas):
    m = len(atlas.variables)
    return itertools.product(range(m), repeat=2)


def verify_conjecture3(atlas: ExchangeAtlas) -> CheckReport:
    """compatible(v, w) <=> denominator_clean(v, w) for every ordered pair."""
    _require_complete(atlas, "conjecture3")
    start = time.perf_counter()
    table = _table(atlas)
    reports, violations = [], []
    for v, w in _pairs(atlas):
        witness = compatibility_witness(atlas, v, w)
        rep = PairReport((v, w), witness is not None, table.clean(v, w), witness)
        reports.append(rep)
        if rep.compatible != rep.denominator_clean:
            violations.append(rep.to_json(atlas))
    return CheckReport(
        "conjecture3",
        _type_name(atlas),
        {"variables": len(atlas.variables), "seeds": len(atlas.seeds)},
        len(reports),
        violations,
        time.perf_counter() - start,
        summary={
            "compatible_pairs": sum(r.compatible for r in reports),
            "clean_pairs": sum(r.denominator_clean for r in reports),
        },
        details=reports,
    )


def verify_lemma21(atlas: ExchangeAtlas) -> CheckReport:
    """Witnessed-compatible pairs must be denominator clean.

    Valid on truncated atlases: compatibility is only ever witnessed, never
    refuted, and cleanliness is checked over the enumerated seeds.
    """
    start = time.perf_counter()
    table = _table(atlas)
    checked, violations = 0, []
    for v, w in _pairs(atlas):
        witness = compatibility_witness(atlas, v, w)
        if witness is None:
            continue
        checked += 1
        if not table.clean(v, w):
            violations.append(
                PairReport((v, w), True, False, witness).to_json(atlas)
                | {"seed": table.dirty_seed(v, w)}
            )
    return CheckReport(
        "lemma21",
        _type_name(atlas),
        {
            "status": atlas.status,
            "variables": len(atlas.variables),
            "seeds": len(atlas.seeds),
            "max_depth": atlas.limits.max_depth,
        },
        checked,
        violations,
        time.perf_counter() - start,
        summary={"witnessed_pairs": checked, "total_pairs": len(atlas.variables) ** 2},
    )


def verify_conjecture4(atlas: ExchangeAtlas) -> CheckReport:
    """denominator_clean(v, w) implies denominator_clean(w, v)."""
    _require_complete(atlas, "conjecture4")
    start = time.perf_counter()
    table = _table(atlas)
    checked, clean, violations = 0, 0, []
    for v, w in _pairs(atlas):
        checked += 1
        if table.clean(v, w):
            clean += 1
            if not table.clean(w, v):
                violations.append(
                    {
                        "pair": [v, w],
                        "variables": [
                            atlas.variables[v].to_fraction_string(),
                            atlas.variables[w].to_fraction_string(),
                        ],
                        "reverse_dirty_seed": table.dirty_seed(w, v),
                    }
                )
    return CheckReport(
        "conjecture4",
        _type_name(atlas),
        {"variables": len(atlas.variables), "seeds": len(atlas.seeds)},
        checked,
        violations,
        time.perf_counter() - start,
        summary={"clean_pairs": clean},
    )


# -- membership of field elements in X --------------------------------------


class VariableIndex:
    """Decide whether a :class:`LaurentFraction` equals a member of X.

    Candidates are found by evaluating at a fixed random point modulo a large
    prime; every hit is then confirmed exactly with
    :func:`~clusteratlas.laurent.fraction_equal`.  Equal elements always
    evaluate equally, so no member is missed.
    """

    def __init__(self, variables: Sequence[LaurentPoly], seed: int = 0):
        self.variables = list(variables)
        rank = self.variables[0].rank
        rng = random.Random(seed)
        self.point = [rng.randrange(2, _PRIME - 1) for _ in range(rank)]
        self.inverse = [pow(v, -1, _PRIME) for v in self.point]
        self.as_fraction = [LaurentFraction.of(v) for v in self.variables]
        self._by_value: dict[int, list[int]] = {}
        for i, v in enumerate(self.variables):
            self._by_value.setdefault(self._eval(v), []).append(i)

    def _eval(self, p: LaurentPoly) -> int:
        total = 0
        for exp, c in p.items():
            t = c % _PRIME
            for e, x, xinv in zip(exp, self.point, self.inverse):
                if e > 0:
                    t = t * pow(x, e, _PRIME) % _PRIME
                elif e < 0:
                    t = t * pow(xinv, -e, _PRIME) % _PRIME
            total += t
        return total % _PRIME

    def lookup(self, frac: LaurentFraction) -> int | None:
        d = self._eval(frac.den)
        if d == 0:
            candidates = range(len(self.variables))
        else:
            value = self._eval(frac.num) * pow(d, -1, _PRIME) % _PRIME
            candidates = self._by_value.get(value, ())
        for i in candidates:
            if fraction_equal(frac, self.as_fraction[i]):
                return i
        return None


# -- unistructurality -------------------------------------------------------


@dataclass
class StructureCandidate:
    subset: tuple
    matrix: BMatrix
    outcome: str  # "accepted" or "rejected"
    reason: str = ""
    clusters: frozenset | None = None
    exchange_pairs: frozenset | None = None
    seeds: int = 0

    @property
    def accepted(self) -> bool:
        return self.outcome == "accepted"

    def to_json(self) -> dict:
        out = {
            "subset": list(self.subset),
            "matrix": self.matrix.to_json(),
            "outcome": self.outcome,
            "seeds": self.seeds,
        }
        if self.reason:
            out["reason"] = self.reason
        if self.clusters is not None:
            out["clusters"] = sorted(sorted(c) for c in self.clusters)
        return out


class _Closure:
    """Mutation closure of candidate seeds over a fixed variable set X."""

    def __init__(self, variables: Sequence[LaurentPoly], seed: int = 0):
        self.X = list(variables)
        self.index = VariableIndex(self.X, seed)
        self.memo: dict = {}

    def exchange(self, ids: tuple, B: BMatrix, k: int) -> int | None:
        column = tuple((ids[i], B.rows[i][k]) for i in range(B.n) if B.rows[i][k])
        key = (ids[k], tuple(sorted(column)))
        if key not in self.memo:
            binomial = exchange_binomial([self.X[i] for i in ids], B, k)
            self.memo[key] = self.index.lookup(LaurentFraction(binomial, self.X[ids[k]]))
        return self.memo[key]

    def run(self, subset: tuple, B: BMatrix, budget: int) -> StructureCandidate:
        start = _canonical(subset, B)
        if start is None:
            return StructureCandidate(subset, B, "rejected", "repeated variable")
        seen = {start}
        pairs = set()
        queue = deque([start])
        while queue:
            ids, rows = queue.popleft()
            M = BMatrix(rows)
            for k in range(M.n):
                new = self.exchange(ids, M, k)
                if new is None:
                    return StructureCandidate(subset, B, "rejected", "escapes X", seeds=len(seen))
                nxt_ids = ids[:k] + (new,) + ids[k + 1:]
                nxt = _canonical(nxt_ids, mutate_matrix(M, k))
                if nxt is None:
                    return StructureCandidate(
                        subset, B, "rejected", "repeated variable", seeds=len(seen)
                    )
                pairs.add(frozenset((frozenset(ids), frozenset(nxt[0]))))
                if nxt not in seen:
                    if len(seen) >= budget:
                        return StructureCandidate(subset, B, "rejected", "budget", seeds=len(seen))
                    seen.add(nxt)
                    queue.append(nxt)
        clusters = frozenset(frozenset(ids) for ids, _ in seen)
        covered = set().union(*clusters)
        if len(covered) != len(self.X):
            return StructureCandidate(
                subset, B, "rejected", "misses X", clusters=clusters, seeds=len(seen)
            )
        return StructureCandidate(
            subset, B, "accepted", clusters=clusters, exchange_pairs=frozenset(pairs),
            seeds=len(seen),
        )


def _canonical(ids: tuple, B: BMatrix):
    perm = sorted(range(len(ids)), key=ids.__getitem__)
    sorted_ids = tuple(ids[i] for i in perm)
    if len(set(sorted_ids)) != len(sorted_ids):
        return None
    return sorted_ids, B.permuted(perm).rows


def unistructural_search(
    atlas: ExchangeAtlas, bound: int | None = None, budget: int | None = None, seed: int = 0
) -> CheckReport:
    """Try every n-subset of X with every matrix of entries in [-bound, bound].

    A candidate is accepted when its mutation closure stays inside X and
    covers it.  A violation is an accepted candidate whose clusters, or whose
    exchange graph on clusters, differ from the atlas's.
    """
    _require_complete(atlas, "unistructural search")
    start = time.perf_counter()
    if bound is None:
        bound = max(s.matrix.max_abs() for s in atlas.seeds) + 1
    if budget is None:
        budget = 4 * len(atlas.seeds) + 8
    closure = _Closure(atlas.variables, seed)
    target_clusters = frozenset(atlas.clusters)
    target_pairs = frozenset(
        frozenset(atlas.clusters[c] for c in pair) for pair in atlas.exchange_pairs()
    )
    n = atlas.n
    matrices = list(enumerate_matrices(n, bound))
    candidates, violations = [], []
    reasons: dict[str, int] = {}
    for subset in itertools.combinations(range(len(atlas.variables)), n):
        for B in matrices:
            cand = closure.run(subset, B, budget)
            candidates.append(cand)
            key = cand.outcome if cand.accepted else cand.reason
            reasons[key] = reasons.get(key, 0) + 1
            if not cand.accepted:
                continue
            if cand.clusters != target_clusters:
                violations.append(cand.to_json() | {"problem": "different cluster set"})
            elif cand.exchange_pairs != target_pairs:
                violations.append(cand.to_json() | {"problem": "different exchange graph"})
    accepted = [c for c in candidates if c.accepted]
    return CheckReport(
        "unistructural",
        _type_name(atlas),
        {"bound": bound, "budget": budget, "subsets": len(candidates) // len(matrices)},
        len(candidates),
        violations,
        time.perf_counter() - start,
        unit="candidates",
        summary={
            "outcomes": dict(sorted(reasons.items())),
            "accepted": len(accepted),
            "accepted_clusters": sorted({tuple(c.subset) for c in accepted}),
            "budget_exhausted": reasons.get("budget", 0),
        },
        details=candidates,
    )


# -- automorphisms ----------------------------------------------------------


@dataclass
class AutomorphismCandidate:
    assignment: tuple
    permutes_X: bool
    maps_clusters_to_clusters: bool
    permutation: tuple | None = None

    def to_json(self) -> dict:
        return {
            "assignment": list(self.assignment),
            "permutes_X": self.permutes_X,
            "maps_clusters_to_clusters": self.maps_clusters_to_clusters,
        }


def verify_theorem1(
    atlas: ExchangeAtlas, budget: int | None = None, seed: int = 0
) -> CheckReport:
    """Every field map sending the base cluster into X and permuting X must
    send clusters to clusters.

    Candidates are the injective assignments of the base variables to X; a
    field automorphism permuting X is determined by, and arises from, one.
    ``budget`` caps the number of assignments examined.
    """
    _require_complete(atlas, "theorem1")
    start = time.perf_counter()
    X = atlas.variables
    m, n = len(X), atlas.n
    index = VariableIndex(X, seed)
    clusters = set(atlas.clusters)
    candidates, violations = [], []
    exhausted = False
    for count, assignment in enumerate(itertools.permutations(range(m), n)):
        if budget is not None and count >= budget:
            exhausted = True
            break
        # assignment[i] is the image of x_{i+1}
        images = [LaurentFraction.of(X[j]) for j in assignment]
        perm = []
        for v in X:
            j = index.lookup(substitute(v, images))
            if j is None:
                break
            perm.append(j)
        permutes = len(perm) == m and len(set(perm)) == m
        maps = permutes and all(frozenset(perm[i] for i in c) in clusters for c in atlas.clusters)
        cand = AutomorphismCandidate(tuple(assignment), permutes, maps, tuple(perm) if permutes else None)
        candidates.append(cand)
        if permutes and not maps:
            violations.append(cand.to_json() | {"problem": "permutes X but not clusters"})
    accepted = {c.permutation: c.assignment for c in candidates if c.permutes_X}
    closed = True
    if not exhausted:
        for p in accepted:
            inverse = [0] * m
            for i, j in enumerate(p):
                inverse[j] = i
            if tuple(inverse) not in accepted:
                closed = False
                violations.append({"problem": "not closed under inverse", "assignment": list(accepted[p])})
            for q in accepted:
                if tuple(p[q[i]] for i in range(m)) not in accepted:
                    closed = False
                    violations.append(
                        {
                            "problem": "not closed under composition",
                            "assignments": [list(accepted[p]), list(accepted[q])],
                        }
                    )
    return CheckReport(
        "theorem1",
        _type_name(atlas),
        {"assignments": len(candidates), "budget": budget},
        len(candidates),
        violations,
        time.perf_counter() - start,
        unit="candidates",
        summary={
            "automorphisms": len(accepted),
            "group_closed": closed,
            "budget_exhausted": exhausted,
        },
        details=candidates,
    )

