"""Partitions, interior/boundary roles and the arc strata built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InvalidPartition, PartitionSizeMismatch, RoleMismatch
from .graph import Graph

DIRECTED_STRATA = ("I->I", "I->B", "B->I", "B->B")
UNDIRECTED_STRATA = ("II", "IB", "BB")

II, IB, BI, BB = 0, 1, 2, 3


def strata_names(directed: bool) -> tuple[str, ...]:
    return DIRECTED_STRATA if directed else UNDIRECTED_STRATA


def intra_group_strata(directed: bool) -> tuple[str, ...]:
    return DIRECTED_STRATA[:3] if directed else UNDIRECTED_STRATA[:2]


@dataclass(frozen=True, eq=False)
class Partition:
    """Hard partition given by a block index per node (blocks ``0..K-1``, all nonempty)."""

    block_of: np.ndarray
    K: int

    def __post_init__(self):
        b = np.asarray(self.block_of, dtype=np.int64)
        if b.ndim != 1:
            raise InvalidPartition("block_of must be one-dimensional")
        if len(b) and (b.min() < 0 or b.max() >= self.K):
            raise InvalidPartition("block index outside 0..K-1")
        if len(np.unique(b)) != self.K:
            raise InvalidPartition("every block must be nonempty")
        b.setflags(write=False)
        object.__setattr__(self, "block_of", b)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Blocks from arbitrary labels, numbered in order of first appearance."""
        ids: dict = {}
        block_of = [ids.setdefault(lab, len(ids)) for lab in labels]
        return cls(np.array(block_of, dtype=np.int64), len(ids))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "Partition":
        n = sum(len(b) for b in blocks)
        block_of = np.full(n, -1, dtype=np.int64)
        for k, members in enumerate(blocks):
            for v in members:
                if not 0 <= v < n or block_of[v] != -1:
                    raise InvalidPartition(f"node {v} missing, repeated or out of range")
                block_of[v] = k
        return cls(block_of, len(blocks))

    @property
    def n(self) -> int:
        return len(self.block_of)

    def blocks(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.block_of == k) for k in range(self.K)]

    def relabeled(self, perm: Sequence[int]) -> "Partition":
        """Same partition with block ``k`` renamed ``perm[k]``."""
        perm = np.asarray(perm, dtype=np.int64)
        return Partition(perm[self.block_of], self.K)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.K == other.K and np.array_equal(self.block_of, other.block_of)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class NodeRoles:
    boundary: np.ndarray
    partition: Partition

    @property
    def interior(self) -> np.ndarray:
        return ~self.boundary

    def interior_of(self, k: int) -> np.ndarray:
        return np.flatnonzero((self.partition.block_of == k) & ~self.boundary)

    def boundary_of(self, k: int) -> np.ndarray:
        return np.flatnonzero((self.partition.block_of == k) & self.boundary)

    def labels(self) -> list[str]:
        return ["boundary" if b else "interior" for b in self.boundary]


def _check_sizes(G: Graph, P: Partition) -> None:
    if P.n != G.n:
        raise PartitionSizeMismatch(f"partition covers {P.n} nodes, graph has {G.n}")


def classify_roles(G: Graph, P: Partition) -> NodeRoles:
    """A node is boundary iff some in- or out-neighbour (other than itself) lies in another block."""
    _check_sizes(G, P)
    b = P.block_of
    cross = b[G.tails] != b[G.heads]
    boundary = np.zeros(G.n, dtype=bool)
    boundary[G.tails[cross]] = True
    boundary[G.heads[cross]] = True
    boundary.setflags(write=False)
    return NodeRoles(boundary, P)


@dataclass(frozen=True, eq=False)
class Stratification:
    """Every arc labelled by the roles of its endpoints.

    ``counts``/``masses`` are per stored arc (an undirected edge counts once);
    ``arc_masses`` and the type strengths are sums over entries of the
    type-restricted matrices, so for undirected graphs each non-loop edge
    contributes in both orientations.
    """

    graph: Graph
    roles: NodeRoles
    names: tuple[str, ...]
    stratum_of: np.ndarray
    counts: np.ndarray
    masses: np.ndarray
    arc_masses: np.ndarray
    type_out_strength: np.ndarray
    type_in_strength: np.ndarray

    @property
    def directed(self) -> bool:
        return self.graph.directed

    @property
    def partition(self) -> Partition:
        return self.roles.partition

    def index(self, name: str) -> int:
        return self.names.index(name)

    @cached_property
    def oriented(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """``(tails, heads, weights, stratum)`` over ordered pairs; see :attr:`Graph.oriented`."""
        t, h, w, src = self.graph.oriented
        return t, h, w, self.stratum_of[src]

    def sample(self, stratum: str, unit_weights: bool = False):
        """Endpoint arrays and weights of the paired sample for one stratum."""
        t, h, w, s = self.oriented
        sel = s == self.index(stratum)
        weights = np.ones(int(sel.sum())) if unit_weights else w[sel]
        return t[sel], h[sel], weights

    def label_names(self) -> list[str]:
        return [self.names[c] for c in self.stratum_of]


def _stratum_codes(tail_b: np.ndarray, head_b: np.ndarray, directed: bool) -> np.ndarray:
    if directed:
        codes = np.where(tail_b, np.where(head_b, BB, BI), np.where(head_b, IB, II))
    else:
        nb = tail_b.astype(int) + head_b.astype(int)
        codes = nb  # 0 -> II, 1 -> IB, 2 -> BB
    return codes.astype(np.int64)


def stratify_arcs(G: Graph, P: Partition, roles: NodeRoles | None = None) -> Stratification:
    _check_sizes(G, P)
    if roles is None:
        roles = classify_roles(G, P)
    elif roles.partition != P or not np.array_equal(roles.boundary, classify_roles(G, P).boundary):
        raise RoleMismatch("roles were not derived from this graph and partition")
    names = strata_names(G.directed)
    S = len(names)
    codes = _stratum_codes(roles.boundary[G.tails], roles.boundary[G.heads], G.directed)
    codes.setflags(write=False)
    counts = np.bincount(codes, minlength=S)
    masses = np.bincount(codes, weights=G.weights, minlength=S).astype(float)
    t, h, w, src = G.oriented
    oc = codes[src]
    arc_masses = np.bincount(oc, weights=w, minlength=S).astype(float)
    kout = np.zeros((G.n, S))
    kin = np.zeros((G.n, S))
    np.add.at(kout, (t, oc), w)
    np.add.at(kin, (h, oc), w)
    return Stratification(G, roles, names, codes, counts, masses, arc_masses, kout, kin)


def refinement_masses(G: Graph, P: Partition, Q: Partition) -> np.ndarray:
    """Table ``m[T, r, s]`` of arc weight in stratum ``T`` from label ``r`` to label ``s``.

    ``P`` stratifies the arcs; ``Q`` supplies the labels.  Sums run over
    entries of the (symmetric, for undirected graphs) adjacency matrix.
    """
    _check_sizes(G, P)
    _check_sizes(G, Q)
    strat = stratify_arcs(G, P)
    t, h, w, s = strat.oriented
    table = np.zeros((len(strat.names), Q.K, Q.K))
    np.add.at(table, (s, Q.block_of[t], Q.block_of[h]), w)
    return table


def participation(G: Graph, P: Partition, v: int, direction: str = "out") -> float | None:
    """Participation coefficient of ``v``; ``None`` when its strength is zero."""
    _check_sizes(G, P)
    A = G.adjacency
    if direction == "out":
        row = A[v]
    elif direction == "in":
        row = A[:, v]
    else:
        raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")
    total = row.sum()
    if total <= 0:
        return None
    per_block = np.bincount(P.block_of, weights=row, minlength=P.K)
    return float(1.0 - np.sum((per_block / total) ** 2))


def participation_table(G: Graph, P: Partition) -> dict[str, list[float | None]]:
    return {d: [participation(G, P, v, d) for v in range(G.n)] for d in ("out", "in")}
