"""
测量空间模块
一维测量空间（有向多重图）的构造与手术：圆、路径、限制、并、交、边收缩
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from ..errors import InvalidArgumentError, NotCollapsibleError
from ..logger import get_logger

logger = get_logger()

VertexId = str
EdgeId = str


@dataclass(frozen=True)
class Edge:
    """一条 1-单形：src 为 d₁ 面（源），tgt 为 d₀ 面（靶）"""
    id: EdgeId
    src: VertexId
    tgt: VertexId


@dataclass(frozen=True)
class MeasurementSpace:
    """
    一维测量空间

    Attributes:
        vertices: 有序的顶点 id
        edges: 有序的边，允许平行边和反向边，不允许自环
    """
    vertices: Tuple[VertexId, ...] = ()
    edges: Tuple[Edge, ...] = ()
    _edge_index: Dict[EdgeId, Edge] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidArgumentError(f"duplicate vertex ids in {self.vertices}")

        known = set(self.vertices)
        index = {}
        for edge in self.edges:
            if edge.id in index:
                raise InvalidArgumentError(f"duplicate edge id {edge.id!r}")
            if edge.src not in known or edge.tgt not in known:
                raise InvalidArgumentError(f"edge {edge.id!r} has an undeclared endpoint ({edge.src} -> {edge.tgt})")
            if edge.src == edge.tgt:
                raise InvalidArgumentError(f"edge {edge.id!r} is a loop on {edge.src!r}; loops are not supported")
            index[edge.id] = edge
        object.__setattr__(self, "_edge_index", index)

    # ============= 查询 =============

    @property
    def edge_ids(self) -> Tuple[EdgeId, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, edge_id: EdgeId) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise InvalidArgumentError(f"unknown edge id {edge_id!r}")

    def has_edge(self, edge_id: EdgeId) -> bool:
        return edge_id in self._edge_index

    def has_vertex(self, vertex: VertexId) -> bool:
        return vertex in self.vertices

    def outgoing(self, vertex: VertexId) -> List[Edge]:
        return [e for e in self.edges if e.src == vertex]

    def incoming(self, vertex: VertexId) -> List[Edge]:
        return [e for e in self.edges if e.tgt == vertex]

    def is_isolated(self, vertex: VertexId) -> bool:
        return not any(e.src == vertex or e.tgt == vertex for e in self.edges)

    def to_graph(self) -> nx.MultiGraph:
        """底层无向多重图，边的 key 为边 id"""
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(e.src, e.tgt, key=e.id)
        return graph

    def components(self) -> List["MeasurementSpace"]:
        """按顶点顺序返回各连通分支（孤立点也是一个分支）"""
        graph = self.to_graph()
        order = {v: i for i, v in enumerate(self.vertices)}
        parts = sorted(nx.connected_components(graph), key=lambda c: min(order[v] for v in c))
        result = []
        for part in parts:
            vertices = tuple(v for v in self.vertices if v in part)
            edges = tuple(e for e in self.edges if e.src in part)
            result.append(MeasurementSpace(vertices, edges))
        return result

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and nx.is_connected(self.to_graph())

    def cycle_rank(self) -> int:
        """第一 Betti 数 |E| - |V| + #分支"""
        if not self.vertices:
            return 0
        return len(self.edges) - len(self.vertices) + nx.number_connected_components(self.to_graph())

    def is_forest(self) -> bool:
        return self.cycle_rank() == 0

    def cycle_order(self) -> Optional[List[Tuple[Edge, bool]]]:
        """
        若底层图恰好是一个圈，按绕圈顺序返回 (边, 是否正向)

        从第一条边出发，沿其方向行走；反向边的 forward 为 False。
        不是单个圈时返回 None。
        """
        if not self.edges or not self.is_connected() or self.cycle_rank() != 1:
            return None
        if len(self.edges) != len(self.vertices):
            return None
        degree = {v: 0 for v in self.vertices}
        for e in self.edges:
            degree[e.src] += 1
            degree[e.tgt] += 1
        if any(d != 2 for d in degree.values()):
            return None

        first = self.edges[0]
        walk = [(first, True)]
        used = {first.id}
        current = first.tgt
        while len(walk) < len(self.edges):
            step = next(
                (e for e in self.edges if e.id not in used and current in (e.src, e.tgt)),
                None,
            )
            if step is None:
                return None
            forward = step.src == current
            walk.append((step, forward))
            used.add(step.id)
            current = step.tgt if forward else step.src
        return walk

    def directed_cycle_order(self) -> Optional[List[Edge]]:
        """有向圈 C^(n)：边按给定顺序首尾相接时返回边序列"""
        walk = self.cycle_order()
        if walk is None or not all(forward for _, forward in walk):
            return None
        edges = [e for e, _ in walk]
        if [e.id for e in edges] != list(self.edge_ids):
            return None
        return edges

    def is_cycle_space(self) -> bool:
        return self.directed_cycle_order() is not None


@dataclass(frozen=True)
class CollapseResult:
    """collapse_edges 的结果：商空间与两个满射"""
    space: MeasurementSpace
    vertex_map: Dict[VertexId, VertexId]
    edge_map: Dict[EdgeId, EdgeId]
    collapsed: FrozenSet[EdgeId]


# ============= 构造 =============

def make_cycle(n: int) -> MeasurementSpace:
    """
    构造 n-圆 C^(n)：边 e_i: v_i -> v_{i+1}，e_n: v_n -> v_1

    Args:
        n: 边数，至少为 2

    Returns:
        MeasurementSpace
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidArgumentError(f"a cycle needs n >= 2 edges, got {n!r}")
    vertices = tuple(f"v{i}" for i in range(1, n + 1))
    edges = tuple(
        Edge(f"e{i}", f"v{i}", f"v{i % n + 1}") for i in range(1, n + 1)
    )
    return MeasurementSpace(vertices, edges)


def make_path(n: int) -> MeasurementSpace:
    """构造 n 条边的有向路径 v_1 -> v_2 -> ... -> v_{n+1}"""
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(f"a path needs n >= 1 edges, got {n!r}")
    vertices = tuple(f"v{i}" for i in range(1, n + 2))
    edges = tuple(Edge(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(1, n + 1))
    return MeasurementSpace(vertices, edges)


# ============= 手术 =============

def restrict(space: MeasurementSpace, edge_subset: Iterable[EdgeId]) -> MeasurementSpace:
    """由边子集张成的满子空间，保留原 id 与原顺序"""
    wanted = set(edge_subset)
    unknown = wanted - set(space.edge_ids)
    if unknown:
        raise InvalidArgumentError(f"unknown edge ids {sorted(unknown)}")
    edges = tuple(e for e in space.edges if e.id in wanted)
    touched = {e.src for e in edges} | {e.tgt for e in edges}
    vertices = tuple(v for v in space.vertices if v in touched)
    return MeasurementSpace(vertices, edges)


def union(a: MeasurementSpace, b: MeasurementSpace) -> MeasurementSpace:
    """同一父空间的两个子空间的并，顺序为 a 在前"""
    vertices = list(a.vertices) + [v for v in b.vertices if v not in a.vertices]
    edges = list(a.edges)
    for e in b.edges:
        if a.has_edge(e.id):
            if a.edge(e.id) != e:
                raise InvalidArgumentError(f"edge {e.id!r} differs between the two pieces")
            continue
        edges.append(e)
    return MeasurementSpace(tuple(vertices), tuple(edges))


def intersection_vertices(a: MeasurementSpace, b: MeasurementSpace) -> FrozenSet[VertexId]:
    return frozenset(a.vertices) & frozenset(b.vertices)


def complement_edges(space: MeasurementSpace, edge_subset: Iterable[EdgeId]) -> Tuple[EdgeId, ...]:
    wanted = set(edge_subset)
    return tuple(eid for eid in space.edge_ids if eid not in wanted)


def collapse_edges(space: MeasurementSpace, collapsed: Iterable[EdgeId]) -> CollapseResult:
    """
    沿边集 E0 收缩：等同每条被收缩边的两个端点并删除这些边

    合并后的顶点命名为按原顶点顺序用 '+' 连接的 id，单点类保持原 id。
    E0 中不在 space 里的 id 视为已经收缩过，因此对商空间再次收缩同一 E0 不改变空间。

    Args:
        space: 原空间
        collapsed: 被收缩的边 id 集合

    Returns:
        CollapseResult(商空间, 顶点映射, 存活边映射, 实际被收缩的边)

    Raises:
        NotCollapsibleError: 收缩会把某条存活的边变成自环
    """
    requested = frozenset(collapsed)
    e0 = requested & frozenset(space.edge_ids)
    if requested - e0:
        logger.debug(f"Edges {sorted(requested - e0)} are not in the space, treating them as already collapsed")

    sub = nx.MultiGraph()
    sub.add_nodes_from(space.vertices)
    for e in space.edges:
        if e.id in e0:
            sub.add_edge(e.src, e.tgt, key=e.id)

    collapsed_space = restrict(space, e0)
    if collapsed_space.cycle_rank() > 0:
        logger.warning(f"Collapsed edge set {sorted(e0)} contains a cycle; distribution transport needs diagonal matrices on all of them")

    order = {v: i for i, v in enumerate(space.vertices)}
    vertex_map: Dict[VertexId, VertexId] = {}
    new_vertices: List[VertexId] = []
    classes = sorted(nx.connected_components(sub), key=lambda c: min(order[v] for v in c))
    for cls in classes:
        members = sorted(cls, key=order.__getitem__)
        name = "+".join(members)
        new_vertices.append(name)
        for v in members:
            vertex_map[v] = name

    edge_map: Dict[EdgeId, EdgeId] = {}
    new_edges: List[Edge] = []
    for e in space.edges:
        if e.id in e0:
            continue
        src, tgt = vertex_map[e.src], vertex_map[e.tgt]
        if src == tgt:
            raise NotCollapsibleError(f"collapsing {sorted(e0)} turns surviving edge {e.id!r} into a loop")
        new_edges.append(Edge(e.id, src, tgt))
        edge_map[e.id] = e.id

    quotient = MeasurementSpace(tuple(new_vertices), tuple(new_edges))
    logger.debug(f"Collapsed {len(e0)} edges: {len(space.vertices)} -> {len(quotient.vertices)} vertices")
    return CollapseResult(quotient, vertex_map, edge_map, e0)
