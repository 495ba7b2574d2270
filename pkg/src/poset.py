"""Intersection poset L(A) and its isomorphism test

The poset is stored as a bipartite incidence graph: one node per line, one node
per singular point labelled with its multiplicity, an edge for each incidence.
Isomorphism of posets is isomorphism of these labelled graphs, searched with the
VF2 backtracking matcher of networkx. Line nodes carry their profile (sorted point
multiplicities and number of parallel lines) so that the search prunes early.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from src.arrangement import Arrangement, CombinatorialData, combinatorial_data

LineProfile = Tuple[Tuple[int, ...], int]


@dataclass(frozen=True)
class PosetWitness:
    """Bijection between two intersection posets"""

    line_map: Dict[int, int]
    point_map: Dict[int, int]


@dataclass(frozen=True)
class PosetComparison:
    isomorphic: bool
    witness: Optional[PosetWitness] = None


@dataclass
class IntersectionPoset:
    """Bipartite incidence structure of an arrangement"""

    data: CombinatorialData
    graph: nx.Graph = field(repr=False)

    @classmethod
    def from_arrangement(cls, arrangement: Arrangement) -> "IntersectionPoset":
        data = combinatorial_data(arrangement)
        graph = nx.Graph()
        for index in range(data.n):
            graph.add_node(
                ("line", index), kind="line", label=line_profile(data, index)
            )
        for k, point in enumerate(data.sing):
            graph.add_node(("point", k), kind="point", label=point.multiplicity)
            for index in point.incident_lines:
                graph.add_edge(("line", index), ("point", k))

        for k, point in enumerate(data.sing):
            if graph.degree(("point", k)) != point.multiplicity:
                raise AssertionError(f"Point node {k} degree differs from multiplicity")
        return cls(data=data, graph=graph)

    @property
    def line_count(self) -> int:
        return self.data.n

    @property
    def point_count(self) -> int:
        return len(self.data.sing)


def line_profile(data: CombinatorialData, line_index: int) -> LineProfile:
    """Sorted multiplicities of the points on a line, plus how many lines it misses"""
    multiplicities = sorted(
        (point.multiplicity for point in data.points_on(line_index)), reverse=True
    )
    return tuple(multiplicities), data.parallel_count(line_index)


def _labels_match(first: Dict, second: Dict) -> bool:
    return first["kind"] == second["kind"] and first["label"] == second["label"]


def poset_isomorphic(first: Arrangement, second: Arrangement) -> PosetComparison:
    """Decide L(first) ~ L(second) and return a witness bijection when it exists"""
    poset_a = IntersectionPoset.from_arrangement(first)
    poset_b = IntersectionPoset.from_arrangement(second)

    if (
        poset_a.line_count != poset_b.line_count
        or poset_a.data.weak_signature != poset_b.data.weak_signature
    ):
        return PosetComparison(isomorphic=False)

    matcher = isomorphism.GraphMatcher(
        poset_a.graph, poset_b.graph, node_match=_labels_match
    )
    if not matcher.is_isomorphic():
        logging.debug("Intersection posets are not isomorphic")
        return PosetComparison(isomorphic=False)

    line_map: Dict[int, int] = {}
    point_map: Dict[int, int] = {}
    for (kind, index), (_, image) in matcher.mapping.items():
        if kind == "line":
            line_map[index] = image
        else:
            point_map[index] = image
    witness = PosetWitness(
        line_map=dict(sorted(line_map.items())),
        point_map=dict(sorted(point_map.items())),
    )
    return PosetComparison(isomorphic=True, witness=witness)


def verify_poset_witness(
    first: Arrangement, second: Arrangement, witness: PosetWitness
) -> bool:
    """Check independently that the line bijection carries incidences onto incidences"""
    data_a = combinatorial_data(first)
    data_b = combinatorial_data(second)
    if sorted(witness.line_map) != list(range(data_a.n)):
        return False
    if sorted(witness.line_map.values()) != list(range(data_b.n)):
        return False

    points_b = {
        frozenset(point.incident_lines): point.multiplicity for point in data_b.sing
    }
    images = set()
    for point in data_a.sing:
        image = frozenset(witness.line_map[i] for i in point.incident_lines)
        if points_b.get(image) != point.multiplicity:
            return False
        images.add(image)
    return len(images) == len(points_b)


DISTINGUISHING_PROFILE = [2, 3, 3, 3]


def _has_distinguishing_profile(data: CombinatorialData, index: int) -> bool:
    multiplicities = sorted(p.multiplicity for p in data.points_on(index))
    return multiplicities == DISTINGUISHING_PROFILE


def _common_multiplicity(
    data: CombinatorialData, first: int, second: int
) -> Optional[int]:
    for point in data.sing:
        if first in point.incident_lines and second in point.incident_lines:
            return point.multiplicity
    return None


def distinguishing_pair(
    arrangement: Arrangement,
) -> Tuple[List[int], Optional[int]]:
    """Lines carrying three triple points and one double point

    Returns their indices and, when there are exactly two of them, the
    multiplicity of their common point (None if they are parallel or the count
    differs).
    """
    data = combinatorial_data(arrangement)
    lines = [i for i in range(data.n) if _has_distinguishing_profile(data, i)]
    if len(lines) != 2:
        return lines, None
    return lines, _common_multiplicity(data, *lines)


def is_distinguishing_pair(arrangement: Arrangement, first: int, second: int) -> bool:
    """True if both lines carry three triple points and one double point and meet"""
    data = combinatorial_data(arrangement)
    if not all(_has_distinguishing_profile(data, i) for i in (first, second)):
        return False
    return _common_multiplicity(data, first, second) is not None
