"""Vertex-subset analysis: inner distribution, width and dual width.

The transform eQ is computed from e and the second eigenmatrix alone, never
from materialized idempotents, so everything here works on the parameter tier
as long as a pairwise distance histogram is available.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import FundamentalInequalityViolated, ParameterError
from .graphs import DistanceCensus, Graph, _tuplify
from .scheme import SchemeEigensystem


class VertexSubset:
    """Nonempty duplicate-free sorted index set into a graph's vertex list."""

    __slots__ = ("graph", "indices")

    def __init__(self, graph: Graph, indices: Sequence[int]):
        idx = tuple(sorted(indices))
        if not idx:
            raise ParameterError("empty vertex subset")
        if len(set(idx)) != len(idx):
            raise ParameterError("duplicate vertex indices")
        if idx[0] < 0 or idx[-1] >= graph.n:
            raise ParameterError("vertex index out of range")
        self.graph = graph
        self.indices = idx

    @classmethod
    def from_labels(cls, graph: Graph, labels) -> "VertexSubset":
        return cls(graph, [graph.index_of(_tuplify(lab)) for lab in labels])

    @property
    def size(self) -> int:
        return len(self.indices)

    def labels(self) -> list:
        return [self.graph.vertices[i] for i in self.indices]


@dataclass(frozen=True)
class InnerDistribution:
    e: tuple[Fraction, ...]
    eq: tuple[Fraction, ...]

    def __post_init__(self):
        if self.e[0] != 1:
            raise ParameterError(f"e_0 = {self.e[0]} != 1")
        if any(x < 0 for x in self.e) or any(x < 0 for x in self.eq):
            raise FundamentalInequalityViolated(
                "negative inner-distribution entry; exact arithmetic forbids this"
            )
        if sum(self.e) != self.eq[0]:
            raise ParameterError("sum of e does not equal (eQ)_0 = |Y|")

    @property
    def size(self) -> Fraction:
        return self.eq[0]

    @property
    def d(self) -> int:
        return len(self.e) - 1


@dataclass(frozen=True)
class WidthReport:
    width: int
    dual_width: int
    diameter: int
    descendent: bool


def distance_counts(subset: VertexSubset, census: DistanceCensus) -> list[int]:
    """Ordered-pair distance histogram of Y x Y."""
    counts = [0] * (census.diameter + 1)
    idx = subset.indices
    counts[0] = len(idx)
    dist = census.dist
    for a, i in enumerate(idx):
        row = dist[i]
        for j in idx[a + 1:]:
            counts[row[j]] += 2
    return counts


def inner_distribution_from_counts(
    counts: Sequence[int], sys: SchemeEigensystem
) -> InnerDistribution:
    """e_i = counts_i / |Y| and (eQ)_j = sum_i e_i Q_ij."""
    if len(counts) > sys.d + 1:
        if any(counts[sys.d + 1:]):
            raise ParameterError("distance histogram longer than the scheme diameter")
        counts = counts[: sys.d + 1]
    counts = list(counts) + [0] * (sys.d + 1 - len(counts))
    ny = counts[0]  # diagonal pairs, one per member
    if ny <= 0 or sum(counts) != ny * ny:
        raise ParameterError("histogram is not an ordered-pair census of a vertex set")
    e = tuple(Fraction(c, ny) for c in counts)
    eq = tuple(
        sum(e[i] * sys.Q[i, j] for i in range(sys.d + 1)) for j in range(sys.d + 1)
    )
    return InnerDistribution(e=e, eq=eq)


def inner_distribution(
    subset: VertexSubset, census: DistanceCensus, sys: SchemeEigensystem
) -> InnerDistribution:
    return inner_distribution_from_counts(distance_counts(subset, census), sys)


def width_and_dual_width(dist: InnerDistribution) -> WidthReport:
    """w = max{i : e_i != 0}, w* = max{i : (eQ)_i != 0}; raises when the
    fundamental inequality w + w* >= d fails (a bug, never valid data)."""
    d = dist.d
    w = max(i for i in range(d + 1) if dist.e[i] != 0)
    ws = max(i for i in range(d + 1) if dist.eq[i] != 0)
    if w + ws < d:
        raise FundamentalInequalityViolated(f"w={w}, w*={ws}, d={d}")
    return WidthReport(width=w, dual_width=ws, diameter=d, descendent=(w + ws == d))


def load_subset(path, graph: Graph) -> VertexSubset:
    """Subset file: JSON list of canonical vertex labels as emitted by the
    graph cache."""
    with open(path, encoding="ascii") as fh:
        try:
            labels = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(labels, list) or not labels:
        raise ParameterError(f"{path}: expected a nonempty JSON list of labels")
    return VertexSubset.from_labels(graph, labels)


def format_distribution(dist: InnerDistribution) -> dict:
    from .exact import format_fraction

    return {
        "e": [format_fraction(x) for x in dist.e],
        "eQ": [format_fraction(x) for x in dist.eq],
    }
