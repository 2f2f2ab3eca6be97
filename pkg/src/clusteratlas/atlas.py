"""Exchange-graph enumeration.

An :class:`ExchangeAtlas` is the breadth-first closure of an initial seed under
mutation, with seeds deduplicated up to simultaneous permutation.  Stored
seeds are in canonical form (variables sorted by :func:`laurent.compare`), so
an edge ``(a, k, b)`` means: mutating stored seed ``a`` at position ``k``
gives stored seed ``b`` up to reordering.
"""

from __future__ import annotations

import contextlib
import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .laurent import LaurentPoly
from .quiver import BMatrix
from .seed import Seed, canonical_form, initial_seed, mutate_seed

__all__ = [
    "EnumerationLimits",
    "ExchangeAtlas",
    "enumerate_atlas",
    "clusters_containing",
    "expand_in_base",
    "rebase",
    "export",
    "load_atlas",
    "stable_hash",
]

log = logging.getLogger(__name__)

COMPLETE = "complete"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class EnumerationLimits:
    max_seeds: int = 100_000
    max_depth: int = 64

    def __post_init__(self):
        if self.max_seeds < 1 or self.max_depth < 1:
            raise ValueError("enumeration limits must be positive")


@dataclass(eq=False)
class ExchangeAtlas:
    base: Seed
    seeds: list
    depths: list
    neighbors: list  # neighbors[a][k] -> seed id or None (outside the atlas)
    variables: list
    clusters: list
    seed_cluster: list  # seed id -> cluster id
    status: str
    limits: EnumerationLimits = field(default_factory=EnumerationLimits)
    _var_index: dict = field(default_factory=dict, repr=False)
    _key_index: dict = field(default_factory=dict, repr=False)
    _rebase_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._var_index:
            self._var_index = {v: i for i, v in enumerate(self.variables)}
        if not self._key_index:
            self._key_index = {_key(s): i for i, s in enumerate(self.seeds)}

    # -- basic queries -----------------------------------------------------

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [
            (a, k, b)
            for a, row in enumerate(self.neighbors)
            for k, b in enumerate(row)
            if b is not None
        ]

    def var_id(self, v) -> int:
        if isinstance(v, int):
            if not 0 <= v < len(self.variables):
                raise KeyError(f"no variable with index {v}")
            return v
        try:
            return self._var_index[v]
        except KeyError:
            raise KeyError(f"{v} is not a variable of this atlas") from None

    def seed_id(self, s) -> int:
        if isinstance(s, int):
            if not 0 <= s < len(self.seeds):
                raise KeyError(f"no seed with index {s}")
            return s
        if isinstance(s, Seed):
            s = _key(canonical_form(s)[0])
        try:
            return self._key_index[s]
        except KeyError:
            raise KeyError("seed is not part of this atlas") from None

    def key(self, s: int) -> tuple:
        return _key(self.seeds[s])

    def seed_vars(self, s: int) -> tuple[int, ...]:
        """Variable ids of stored seed ``s``, in position order."""
        return tuple(self._var_index[v] for v in self.seeds[s].vars)

    def position(self, s: int, v: int) -> int | None:
        target = self.variables[v]
        for pos, w in enumerate(self.seeds[s].vars):
            if w == target:
                return pos
        return None

    def seeds_containing(self, v) -> list[int]:
        target = self.variables[self.var_id(v)]
        return [i for i, s in enumerate(self.seeds) if target in s.vars]

    def cluster_sets(self) -> set[frozenset]:
        return set(self.clusters)

    def exchange_pairs(self) -> set[frozenset]:
        """Unordered pairs of clusters joined by a mutation."""
        return {
            frozenset((self.seed_cluster[a], self.seed_cluster[b]))
            for a, _, b in self.edges
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExchangeAtlas):
            return NotImplemented
        return (
            self.base == other.base
            and self.seeds == other.seeds
            and self.depths == other.depths
            and self.neighbors == other.neighbors
            and self.variables == other.variables
            and self.clusters == other.clusters
            and self.seed_cluster == other.seed_cluster
            and self.status == other.status
        )

    def summary(self) -> dict:
        return {
            "rank": self.n,
            "status": self.status,
            "seeds": len(self.seeds),
            "variables": len(self.variables),
            "clusters": len(self.clusters),
            "edges": len(self.edges) // 2 if self.complete else len(_undirected(self)),
            "max_depth_reached": max(self.depths),
        }


def _key(s: Seed) -> tuple:
    return (s.vars, s.matrix.rows)


def _expand(seed: Seed) -> list[Seed]:
    return [canonical_form(mutate_seed(seed, k))[0] for k in range(seed.n)]


def _expand_all(frontier: list[Seed], pool) -> Iterable[list[Seed]]:
    if pool is None or len(frontier) < 8:
        return map(_expand, frontier)
    chunk = max(1, len(frontier) // (4 * pool._max_workers))
    return pool.map(_expand, frontier, chunksize=chunk)


def enumerate_atlas(
    B: BMatrix, limits: EnumerationLimits | None = None, workers: int = 1
) -> ExchangeAtlas:
    """Breadth-first closure of ``initial_seed(B)`` under all mutations.

    The result does not depend on ``workers``: expansions of a BFS level may
    run in parallel, but they are merged in seed-id order.
    """
    limits = limits or EnumerationLimits()
    base = initial_seed(B)
    start, _ = canonical_form(base)
    seeds = [start]
    depths = [0]
    index = {_key(start): 0}
    neighbors: list[list] = [[None] * B.n]
    refused = False
    frontier = [0]
    with contextlib.ExitStack() as stack:
        pool = None
        if workers > 1:
            pool = stack.enter_context(ProcessPoolExecutor(max_workers=workers))
        while frontier:
            results = _expand_all([seeds[a] for a in frontier], pool)
            next_frontier = []
            for a, images in zip(frontier, results):
                for k, img in enumerate(images):
                    key = _key(img)
                    b = index.get(key)
                    if b is None:
                        if depths[a] + 1 > limits.max_depth or len(seeds) >= limits.max_seeds:
                            refused = True
                            continue
                        b = len(seeds)
                        index[key] = b
                        seeds.append(img)
                        depths.append(depths[a] + 1)
                        neighbors.append([None] * B.n)
                        next_frontier.append(b)
                    neighbors[a][k] = b
            frontier = next_frontier
            log.debug("BFS level merged: %d seeds", len(seeds))
    status = TRUNCATED if refused else COMPLETE
    return _assemble(base, seeds, depths, neighbors, status, limits, index)


def _assemble(base, seeds, depths, neighbors, status, limits, index=None) -> ExchangeAtlas:
    found = {v for s in seeds for v in s.vars}
    variables = sorted(found, key=LaurentPoly.sort_key)
    var_index = {v: i for i, v in enumerate(variables)}
    per_seed = [frozenset(var_index[v] for v in s.vars) for s in seeds]
    clusters = sorted(set(per_seed), key=sorted)
    cluster_index = {c: i for i, c in enumerate(clusters)}
    return ExchangeAtlas(
        base=base,
        seeds=seeds,
        depths=depths,
        neighbors=neighbors,
        variables=variables,
        clusters=clusters,
        seed_cluster=[cluster_index[c] for c in per_seed],
        status=status,
        limits=limits,
        _var_index=var_index,
        _key_index=index or {},
    )


def clusters_containing(atlas: ExchangeAtlas, v) -> list[frozenset]:
    i = atlas.var_id(v)
    return [c for c in atlas.clusters if i in c]


def rebase(atlas: ExchangeAtlas, s) -> list[LaurentPoly | None]:
    """Expansion of every atlas variable in the cluster of seed ``s``.

    Walks the atlas's own exchange graph from ``s`` carrying each seed twice:
    as stored (base coordinates) and in fresh coordinates where ``s`` is the
    initial seed.  Entry ``i`` of the result is the fresh-coordinate form of
    ``atlas.variables[i]``; it is ``None`` only for variables the walk never
    meets, which cannot happen since the atlas graph is connected.
    """
    s = atlas.seed_id(s)
    cached = atlas._rebase_cache.get(s)
    if cached is not None:
        return cached
    n = atlas.n
    out: list[LaurentPoly | None] = [None] * len(atlas.variables)
    fresh: dict[int, tuple] = {s: initial_seed(atlas.seeds[s].matrix).vars}
    queue = [s]
    for a in queue:
        seed_a = atlas.seeds[a]
        for pos, v in enumerate(seed_a.vars):
            out[atlas._var_index[v]] = fresh[a][pos]
        for k, b in enumerate(atlas.neighbors[a]):
            if b is None or b in fresh:
                continue
            mutated = mutate_seed(Seed(fresh[a], seed_a.matrix), k).vars
            seed_b = atlas.seeds[b]
            where = {v: p for p, v in enumerate(seed_b.vars)}
            aligned: list = [None] * n
            for i in range(n):
                if i != k:
                    aligned[where[seed_a.vars[i]]] = mutated[i]
            new_pos = next(p for p in range(n) if aligned[p] is None)
            aligned[new_pos] = mutated[k]
            fresh[b] = tuple(aligned)
            queue.append(b)
    atlas._rebase_cache[s] = out
    return out


def expand_in_base(atlas: ExchangeAtlas, v, s) -> LaurentPoly:
    """Laurent expansion of variable ``v`` in the cluster of seed ``s``.

    The result is in variables ``y_1..y_n`` = the seed's variables in stored
    (canonical) order.
    """
    i = atlas.var_id(v)
    result = rebase(atlas, s)[i]
    if result is None:
        raise KeyError(f"variable {i} is not reachable from seed {s}")
    return result


def stable_hash(seed: Seed) -> str:
    payload = json.dumps(seed.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.blake2b(payload.encode(), digest_size=8).hexdigest()


def _undirected(atlas: ExchangeAtlas) -> list[tuple[int, int]]:
    pairs = set()
    for a, k, b in atlas.edges:
        pairs.add((min(a, b), max(a, b)))
    return sorted(pairs)


def export(atlas: ExchangeAtlas, fmt: str = "json") -> bytes:
    if fmt == "dot":
        lines = ["graph exchange {"]
        for i, s in enumerate(atlas.seeds):
            lines.append(f'  s{i} [label="{stable_hash(s)}"];')
        for a, b in _undirected(atlas):
            lines.append(f"  s{a} -- s{b};")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        doc = {
            "format": "clusteratlas/atlas",
            "version": 1,
            "status": atlas.status,
            "limits": {"max_seeds": atlas.limits.max_seeds, "max_depth": atlas.limits.max_depth},
            "base": atlas.base.to_json(),
            "variables": [v.to_json() for v in atlas.variables],
            "clusters": [sorted(c) for c in atlas.clusters],
            "seeds": [
                {
                    "id": i,
                    "depth": atlas.depths[i],
                    "vars": list(atlas.seed_vars(i)),
                    "matrix": s.matrix.to_json(),
                    "neighbors": atlas.neighbors[i],
                }
                for i, s in enumerate(atlas.seeds)
            ],
        }
        return (json.dumps(doc, indent=1) + "\n").encode()
    raise ValueError(f"unknown export format {fmt!r}")


def load_atlas(data) -> ExchangeAtlas:
    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    variables = [LaurentPoly.from_json(v) for v in data["variables"]]
    seeds, depths, neighbors = [], [], []
    for entry in data["seeds"]:
        seeds.append(
            Seed(
                tuple(variables[i] for i in entry["vars"]),
                BMatrix(tuple(tuple(r) for r in entry["matrix"])),
            )
        )
        depths.append(entry["depth"])
        neighbors.append(list(entry["neighbors"]))
    atlas = _assemble(
        Seed.from_json(data["base"]),
        seeds,
        depths,
        neighbors,
        data["status"],
        EnumerationLimits(**data["limits"]),
    )
    if atlas.variables != variables:
        raise ValueError("atlas JSON variables are inconsistent with its seeds")
    _validate_edges(atlas)
    return atlas


def _validate_edges(atlas: ExchangeAtlas) -> None:
    """Every stored edge must be the mutation it claims to be."""
    if len(atlas._key_index) != len(atlas.seeds):
        raise ValueError("atlas JSON has repeated seeds")
    for a, k, b in atlas.edges:
        try:
            target = _key(canonical_form(mutate_seed(atlas.seeds[a], k))[0])
        except (ArithmeticError, ValueError) as exc:
            raise ValueError(f"seed {a} cannot be mutated at {k}: {exc}") from None
        if atlas._key_index.get(target) != b:
            raise ValueError(f"edge {a} -[{k}]- {b} is not a mutation")
