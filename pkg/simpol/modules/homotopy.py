"""
同伦判定与 Face 约化
Z_d 上的边标号、零伦判定（圈上求和 / 一般图上求提升）、κ 推前与面 Face(φ) 的精确计算
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from ..errors import InvalidArgumentError, SimpolError
from ..logger import get_logger
from .analysis import ClassificationTag, cell_system
from .dist import OutcomeProfile, SimplicialDistribution, from_cells
from .lpcore import affine_hull_dimension
from .space import EdgeId, MeasurementSpace, VertexId, make_cycle

logger = get_logger()


@dataclass(frozen=True)
class EdgeLabeling:
    """每条边一个 Z_d 标号"""
    d: int
    labels: Tuple[Tuple[EdgeId, int], ...]

    def __post_init__(self):
        if self.d < 2:
            raise InvalidArgumentError(f"need d >= 2, got {self.d}")
        object.__setattr__(self, "labels", tuple((eid, x % self.d) for eid, x in self.labels))

    @classmethod
    def of(cls, d: int, labels: Mapping[EdgeId, int]) -> "EdgeLabeling":
        return cls(d, tuple(labels.items()))

    @classmethod
    def on_cycle(cls, space: MeasurementSpace, d: int, labels: Sequence[int]) -> "EdgeLabeling":
        """按边的声明顺序给标号"""
        if len(labels) != len(space.edges):
            raise InvalidArgumentError(f"need {len(space.edges)} labels, got {len(labels)}")
        return cls(d, tuple(zip(space.edge_ids, labels)))

    def __getitem__(self, edge_id: EdgeId) -> int:
        for eid, x in self.labels:
            if eid == edge_id:
                return x
        raise InvalidArgumentError(f"no label for edge {edge_id!r}")

    def covers(self, space: MeasurementSpace) -> bool:
        return {eid for eid, _ in self.labels} >= set(space.edge_ids)


class FaceKind(str, Enum):
    SINGLETON = "SINGLETON"
    NONEMPTY_DIM = "NONEMPTY_DIM"
    EMPTY = "EMPTY"


@dataclass
class FaceResult:
    kind: FaceKind
    dimension: int = -1
    point: Optional[SimplicialDistribution] = None


def _require_labels(phi: EdgeLabeling, space: MeasurementSpace):
    if not phi.covers(space):
        missing = sorted(set(space.edge_ids) - {eid for eid, _ in phi.labels})
        raise InvalidArgumentError(f"labeling misses edges {missing}")


def is_null_homotopic_cycle(phi: EdgeLabeling, space: MeasurementSpace) -> bool:
    """C^(n) 上 φ 零伦当且仅当 Σ φ(σ_i) ≡ 0 (mod d)"""
    order = space.directed_cycle_order()
    if order is None:
        raise InvalidArgumentError("space is not a directed cycle")
    _require_labels(phi, space)
    return sum(phi[e.id] for e in order) % phi.d == 0


def find_component_lifts(phi: EdgeLabeling, space: MeasurementSpace) -> Optional[List[Dict[VertexId, int]]]:
    """
    逐连通分支求提升 ψ，使每条边 σ 满足 ψ(tgt) − ψ(src) ≡ φ(σ)

    每个分支的基点取 0，沿 BFS 树传播后检查全部边。

    Returns:
        各分支的提升（按分支顺序），任一分支无解时返回 None
    """
    _require_labels(phi, space)
    graph = space.to_graph()
    lifts = []
    for part in space.components():
        base = part.vertices[0]
        psi = {base: 0}
        for u, v in nx.bfs_edges(graph, base):
            e = next(e for e in part.edges if {e.src, e.tgt} == {u, v})
            if e.src == u:
                psi[v] = (psi[u] + phi[e.id]) % phi.d
            else:
                psi[v] = (psi[u] - phi[e.id]) % phi.d
        for e in part.edges:
            if (psi[e.tgt] - psi[e.src]) % phi.d != phi[e.id]:
                logger.debug(f"Labeling has no lift: edge {e.id} breaks the potential")
                return None
        lifts.append(psi)
    return lifts


def find_lift(phi: EdgeLabeling, space: MeasurementSpace) -> Optional[Dict[VertexId, int]]:
    """零伦时返回整体提升 ψ: V → Z_d，否则返回 None"""
    lifts = find_component_lifts(phi, space)
    if lifts is None:
        return None
    merged: Dict[VertexId, int] = {}
    for psi in lifts:
        merged.update(psi)

    if space.is_cycle_space() and not is_null_homotopic_cycle(phi, space):
        raise SimpolError("cycle lift disagrees with the label-sum criterion")
    return merged


def is_null_homotopic(phi: EdgeLabeling, space: MeasurementSpace) -> bool:
    if space.is_cycle_space():
        return is_null_homotopic_cycle(phi, space)
    return find_component_lifts(phi, space) is not None


def kappa_pushforward(p: SimplicialDistribution) -> Dict[EdgeId, Tuple[Fraction, ...]]:
    """
    κ(a, b) = b − a (mod d) 推前：每条边上 Z_d 的分布

    只对均匀结果数的场景定义
    """
    d = p.profile.uniform_arity()
    result = {}
    for e in p.space.edges:
        mass = [Fraction(0)] * d
        for a, row in enumerate(p.matrix(e.id)):
            for b, value in enumerate(row):
                mass[(b - a) % d] += value
        result[e.id] = tuple(mass)
    return result


def labeling_of(p: SimplicialDistribution) -> Optional[EdgeLabeling]:
    """若 p 在每条边上的 κ 推前都是点质量，返回对应的标号 φ（p ∈ Face(φ)）"""
    d = p.profile.uniform_arity()
    labels = {}
    for eid, mass in kappa_pushforward(p).items():
        support = [c for c, x in enumerate(mass) if x != 0]
        if len(support) != 1:
            return None
        labels[eid] = support[0]
    return EdgeLabeling.of(d, labels)


def face(phi: EdgeLabeling, space: MeasurementSpace, d: Optional[int] = None) -> FaceResult:
    """
    计算 Face(φ) = {p : κ_*(p_σ) = δ^{φ(σ)}}

    变量为满足 (b − a) mod d = φ(σ) 的单元格，其余单元格为 0；
    约束为归一化、非信号与非负。

    Returns:
        FaceResult：EMPTY / SINGLETON(p) / NONEMPTY_DIM(k, 相对内点)
    """
    d = d or phi.d
    if d != phi.d:
        raise InvalidArgumentError(f"labeling lives in Z_{phi.d}, asked for d={d}")
    _require_labels(phi, space)
    profile = OutcomeProfile.uniform(space, d)
    cells = [
        (e.id, a, b)
        for e in space.edges
        for a in range(d)
        for b in range(d)
        if (b - a) % d == phi[e.id]
    ]
    system = cell_system(space, profile, cells)
    dimension, point = affine_hull_dimension(system)
    if dimension < 0:
        return FaceResult(FaceKind.EMPTY)
    sample = from_cells(space, profile, {cell: value for cell, value in point.items() if value != 0})
    if dimension == 0:
        return FaceResult(FaceKind.SINGLETON, 0, sample)
    return FaceResult(FaceKind.NONEMPTY_DIM, dimension, sample)


@dataclass(frozen=True)
class FaceCertificate:
    """由 Face(φ) = {p} 得到的顶点证书"""
    distribution: SimplicialDistribution
    labeling: EdgeLabeling
    tag: ClassificationTag = ClassificationTag.CONTEXTUAL_VERTEX


def certify_face_vertex(phi: EdgeLabeling, space: MeasurementSpace) -> Optional[FaceCertificate]:
    """
    φ 非零伦且 Face(φ) 为单点时，该点是上下文顶点

    Returns:
        带 CONTEXTUAL_VERTEX 标签的证书，条件不满足时返回 None
    """
    if is_null_homotopic(phi, space):
        return None
    result = face(phi, space)
    if result.kind != FaceKind.SINGLETON:
        return None
    logger.info(f"Certified contextual vertex from labeling {dict(phi.labels)}")
    return FaceCertificate(result.point, phi)


def staircase_labeling(n: int, d: int) -> Tuple[MeasurementSpace, EdgeLabeling]:
    """C^(n) 上 (0, ..., 0, 1) 的标号"""
    space = make_cycle(n)
    return space, EdgeLabeling.on_cycle(space, d, [0] * (n - 1) + [1])
