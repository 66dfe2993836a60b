"""
沿公共顶点粘合的顶点判定
X = A ∪ B（边不交）时，用 p 在 A、B 上的顶点支撑 vsupp 和交点处的边缘匹配，
通过 LP 极值检查 p 是否为 sDist(X) 的顶点
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

from .. import config
from ..errors import InvalidArgumentError, PreconditionError, SimpolError
from ..logger import get_logger
from .analysis import find_sections
from .dist import (
    Cell,
    SimplicialDistribution,
    deterministic,
    format_rational,
    from_cells,
    is_valid,
    marginal,
    remove_parallel_duplicates,
    restrict_distribution,
    support_pattern,
    transport_collapse,
    validate,
)
from .lpcore import LinearSystem, lp_extremes
from .oracle import enumerate_polytope_vertices
from .space import EdgeId, MeasurementSpace, collapse_edges, intersection_vertices, restrict

logger = get_logger()


class Provenance(str, Enum):
    DETERMINISTIC = "DETERMINISTIC"
    K_ORDER = "K_ORDER"
    ORACLE = "ORACLE"


@dataclass(frozen=True)
class VsuppElement:
    distribution: SimplicialDistribution
    provenance: Provenance
    k: int = 1

    @property
    def label(self) -> str:
        if self.provenance == Provenance.K_ORDER:
            return f"K_ORDER({self.k})"
        return self.provenance.value


@dataclass
class VsuppResult:
    """{q ∈ Vertices(sDist(piece)) : q ⪯ p|piece}"""
    piece: MeasurementSpace
    restricted: SimplicialDistribution
    shape: str  # forest / cycle / general
    elements: List[VsuppElement] = field(default_factory=list)

    @property
    def vertices(self) -> List[SimplicialDistribution]:
        return [x.distribution for x in self.elements]


class GlueStatus(str, Enum):
    VERTEX = "VERTEX"
    NOT_VERTEX = "NOT_VERTEX"


@dataclass
class GlueResult:
    status: GlueStatus
    vsupp_a: VsuppResult
    vsupp_b: VsuppResult
    # VERTEX 时各 vsupp 元素的权重，不唯一的位置为 None
    weights_a: Optional[List[Optional[Fraction]]] = None
    weights_b: Optional[List[Optional[Fraction]]] = None
    # 与 p 不同的粘合分布 q ⪯ p（仅 NOT_VERTEX）
    witness: Optional[SimplicialDistribution] = None
    varying_cell: Optional[Cell] = None

    @property
    def is_vertex(self) -> bool:
        return self.status == GlueStatus.VERTEX


# ============= vsupp =============

def _cycle_vertices(r: SimplicialDistribution) -> List[VsuppElement]:
    """
    单圈（允许反向边）上的 vsupp：在提升有向图 (位置 i, 结果 a) 中枚举简单回路

    正向边的转移 a→b 需要 p(a,b) > 0，反向边使用转置矩阵。长度为 k·n 的回路给出 k 阶圈分布。
    """
    walk = r.space.cycle_order()
    n = len(walk)
    graph = nx.DiGraph()
    for i, (e, forward) in enumerate(walk):
        at, nxt = (e.src, e.tgt) if forward else (e.tgt, e.src)
        for a in range(r.profile[at]):
            for b in range(r.profile[nxt]):
                value = r.cell(e.id, a, b) if forward else r.cell(e.id, b, a)
                if value > 0:
                    graph.add_edge((i, a), ((i + 1) % n, b))

    elements = {}
    for circuit in nx.simple_cycles(graph):
        k = len(circuit) // n
        weight = Fraction(1, k)
        cells: Dict[Cell, Fraction] = {}
        for idx, (i, a) in enumerate(circuit):
            _, b = circuit[(idx + 1) % len(circuit)]
            e, forward = walk[i]
            cells[(e.id, a, b) if forward else (e.id, b, a)] = weight
        q = from_cells(r.space, r.profile, cells)
        provenance = Provenance.DETERMINISTIC if k == 1 else Provenance.K_ORDER
        elements[q.key()] = VsuppElement(q, provenance, k)
    return sorted(elements.values(), key=lambda x: (x.k, x.distribution.key()))


def vsupp(p: SimplicialDistribution, piece: MeasurementSpace) -> VsuppResult:
    """
    p 限制到 piece 后支撑内的全部顶点

    森林上顶点都是确定性的（来自截面）；单圈上用提升图回路得到 k 阶圈分布；
    其它情形回退到精确枚举。
    """
    r = restrict_distribution(p, piece)
    if piece.is_forest():
        elements = [
            VsuppElement(deterministic(piece, r.profile, s), Provenance.DETERMINISTIC)
            for s in find_sections(r, limit=config.section_cap())
        ]
        return VsuppResult(piece, r, "forest", elements)
    if piece.cycle_order() is not None:
        return VsuppResult(piece, r, "cycle", _cycle_vertices(r))

    logger.warning(f"Piece with edges {list(piece.edge_ids)} is neither a forest nor a cycle, falling back to enumeration")
    found = enumerate_polytope_vertices(piece, r.profile, support_pattern(r))
    elements = [VsuppElement(q, Provenance.ORACLE) for q in found]
    return VsuppResult(piece, r, "general", elements)


# ============= 粘合判定 =============

def _split(space: MeasurementSpace, a_edges: Iterable[EdgeId], b_edges: Iterable[EdgeId]) -> Tuple[MeasurementSpace, MeasurementSpace]:
    a_set, b_set = set(a_edges), set(b_edges)
    if a_set & b_set:
        raise InvalidArgumentError(f"pieces share edges {sorted(a_set & b_set)}")
    if a_set | b_set != set(space.edge_ids):
        missing = sorted(set(space.edge_ids) - a_set - b_set)
        raise InvalidArgumentError(f"pieces do not cover edges {missing}")
    if not a_set or not b_set:
        raise InvalidArgumentError("both pieces need at least one edge")
    return restrict(space, a_set), restrict(space, b_set)


def _glued(p: SimplicialDistribution, va: VsuppResult, vb: VsuppResult,
           point: Dict[tuple, Fraction]) -> SimplicialDistribution:
    cells: Dict[Cell, Fraction] = {}
    for tag, result in (("a", va), ("b", vb)):
        for i, q in enumerate(result.vertices):
            w = point[(tag, i)]
            if w == 0:
                continue
            for cell, value in q.cells():
                if value != 0:
                    cells[cell] = cells.get(cell, Fraction(0)) + w * value
    return from_cells(p.space, p.profile, cells)


def glue_vertex_check(p: SimplicialDistribution, a_edges: Iterable[EdgeId], b_edges: Iterable[EdgeId]) -> GlueResult:
    """
    判定 p 是否为 sDist(A ∪ B) 的顶点

    变量 λ_i（vsupp(A) 的权重）与 μ_j（vsupp(B) 的权重）非负且各自和为 1，
    交点每个结果处 A、B 两侧的边缘相等。p 是顶点当且仅当每个粘合坐标
    在该多面体上的最小值与最大值都等于 p 的值。

    Args:
        p: 合法的单纯分布
        a_edges: A 的边
        b_edges: B 的边（与 A 不交，二者覆盖全部边）

    Returns:
        GlueResult；NOT_VERTEX 时 witness 为一个与 p 不同的粘合分布
    """
    if not is_valid(p):
        raise PreconditionError("glue check needs a valid distribution")
    piece_a, piece_b = _split(p.space, a_edges, b_edges)
    va, vb = vsupp(p, piece_a), vsupp(p, piece_b)
    logger.info(f"vsupp sizes: A={len(va.elements)} ({va.shape}), B={len(vb.elements)} ({vb.shape})")

    keys = [("a", i) for i in range(len(va.elements))] + [("b", j) for j in range(len(vb.elements))]
    system = LinearSystem(keys)
    system.add_equality({("a", i): 1 for i in range(len(va.elements))}, 1)
    system.add_equality({("b", j): 1 for j in range(len(vb.elements))}, 1)

    shared = [v for v in p.space.vertices if v in intersection_vertices(piece_a, piece_b)]
    for v in shared:
        side_a = [marginal(q, v) for q in va.vertices]
        side_b = [marginal(q, v) for q in vb.vertices]
        for outcome in range(p.profile[v]):
            row = {("a", i): m[outcome] for i, m in enumerate(side_a) if m[outcome] != 0}
            for j, m in enumerate(side_b):
                if m[outcome] != 0:
                    row[("b", j)] = -m[outcome]
            if row:
                system.add_equality(row, 0)

    for tag, result in (("a", va), ("b", vb)):
        for e in result.piece.edges:
            for x in range(p.profile[e.src]):
                for y in range(p.profile[e.tgt]):
                    coeffs = {
                        (tag, i): q.cell(e.id, x, y)
                        for i, q in enumerate(result.vertices)
                        if q.cell(e.id, x, y) != 0
                    }
                    if not coeffs:
                        continue
                    target = p.cell(e.id, x, y)
                    ext = lp_extremes(system, coeffs)
                    if ext is None:
                        raise PreconditionError("glued polytope is empty; p does not glue from its vsupp")
                    if ext.is_fixed and ext.minimum == target:
                        continue
                    point = ext.argmin if ext.minimum != target else ext.argmax
                    logger.info(f"Cell {(e.id, x, y)} ranges over [{ext.minimum}, {ext.maximum}], not a vertex")
                    return GlueResult(GlueStatus.NOT_VERTEX, va, vb, witness=_glued(p, va, vb, point),
                                      varying_cell=(e.id, x, y))

    weights = {}
    for key in keys:
        ext = lp_extremes(system, key)
        weights[key] = ext.minimum if ext.is_fixed else None
    return GlueResult(
        GlueStatus.VERTEX, va, vb,
        weights_a=[weights[("a", i)] for i in range(len(va.elements))],
        weights_b=[weights[("b", j)] for j in range(len(vb.elements))],
    )


# ============= 示例核对 =============

@dataclass
class ClaimCheck:
    claim: str
    anchor: str
    passed: bool
    detail: str = ""


@dataclass
class ExampleReport:
    name: str
    checks: List[ClaimCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def check(self, claim: str, anchor: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(ClaimCheck(claim, anchor, bool(passed), detail))
        if not passed:
            logger.warning(f"[{self.name}] claim failed: {claim} ({detail})")
        return bool(passed)


def _fmt(values) -> str:
    return "(" + ", ".join("None" if x is None else format_rational(x) for x in values) + ")"


def _fixture(name: str) -> SimplicialDistribution:
    from ..fixtures import load_fixture
    return load_fixture(name)


def _weights_by_kind(result: VsuppResult, weights: List[Optional[Fraction]]) -> Dict[str, List[Optional[Fraction]]]:
    grouped: Dict[str, List[Optional[Fraction]]] = {}
    for element, w in zip(result.elements, weights):
        grouped.setdefault(element.label, []).append(w)
    return grouped


def verify_pr_box_example(p: Optional[SimplicialDistribution] = None) -> ExampleReport:
    """PR 盒：A = {e1}，B = {e2, e3, e4}，匹配条件迫使 α = β = 1/2"""
    p = p or _fixture("pr_box")
    report = ExampleReport("pr_box")
    anchor = "PR box gluing: alpha = beta = 1/2"
    if not report.check("fixture is a valid distribution", anchor, is_valid(p), str(validate(p))):
        return report
    result = glue_vertex_check(p, ["e1"], ["e2", "e3", "e4"])
    if not report.check("glue check reports VERTEX", anchor, result.is_vertex, result.status.value):
        return report
    half = Fraction(1, 2)
    report.check("alpha = (1/2, 1/2)", anchor, result.weights_a == [half, half], _fmt(result.weights_a))
    report.check("beta = (1/2, 1/2)", anchor, result.weights_b == [half, half], _fmt(result.weights_b))
    return report


def verify_trichotomic_example(p: Optional[SimplicialDistribution] = None) -> ExampleReport:
    """两个 2-圆在 v 处粘合，Q1..Q4 的唯一解 α = β = (1/3, 2/3)"""
    p = p or _fixture("trichotomic")
    report = ExampleReport("trichotomic")
    anchor = "trichotomic scenario: unique alpha = beta = (1/3, 2/3)"
    if not report.check("fixture is a valid distribution", anchor, is_valid(p), str(validate(p))):
        return report
    result = glue_vertex_check(p, ["s1", "s2"], ["s3", "s4"])
    if not report.check("glue check reports VERTEX", anchor, result.is_vertex, result.status.value):
        return report
    expected = [Fraction(1, 3), Fraction(2, 3)]
    report.check("alpha = (1/3, 2/3) over (deterministic, 2-order)", anchor,
                 result.weights_a == expected, _fmt(result.weights_a))
    report.check("beta = (1/3, 2/3) over (deterministic, 2-order)", anchor,
                 result.weights_b == expected, _fmt(result.weights_b))
    return report


def verify_233_example(p: Optional[SimplicialDistribution] = None) -> ExampleReport:
    """
    K_{3,3} 上的 (2,3,3) Bell 分布

    收缩四条 T 边，删除重复的 R 边，再在 A = {s1, s2}、B = {s3, s5} 上做粘合判定
    """
    p = p or _fixture("bell_233")
    report = ExampleReport("bell_233")
    anchor = "(2,3,3) Bell scenario: beta = (1/4, 1/4, 1/2)"
    if not report.check("fixture is a valid distribution", anchor, is_valid(p), str(validate(p))):
        return report

    try:
        collapse = collapse_edges(p.space, ["s6", "s7", "s8", "s9"])
        collapsed = transport_collapse(p, collapse)
    except SimpolError as e:
        report.check("T edges collapse", anchor, False, str(e))
        return report
    report.check("collapse leaves two vertices", anchor, len(collapse.space.vertices) == 2,
                 str(collapse.space.vertices))
    point = marginal(collapsed, collapse.vertex_map["a1"])
    quarter, half = Fraction(1, 4), Fraction(1, 2)
    report.check("point marginal = (1/2, 1/4, 1/4)", "(2,3,3) Bell scenario: q = (1/2, 1/4, 1/4)",
                 point == (half, quarter, quarter), _fmt(point))

    reduced, dropped = remove_parallel_duplicates(collapsed)
    if not report.check("duplicate R edge removed", anchor, dropped == {"s4": "s3"}, str(dropped)):
        return report

    result = glue_vertex_check(reduced, ["s1", "s2"], ["s3", "s5"])
    report.check("vsupp sizes are 4 and 3", anchor,
                 (len(result.vsupp_a.elements), len(result.vsupp_b.elements)) == (4, 3),
                 f"{len(result.vsupp_a.elements)}, {len(result.vsupp_b.elements)}")
    if not report.check("glue check reports VERTEX", anchor, result.is_vertex, result.status.value):
        return report
    grouped = _weights_by_kind(result.vsupp_b, result.weights_b)
    report.check("beta_1 = beta_2 = 1/4 on the deterministic elements", anchor,
                 grouped.get("DETERMINISTIC") == [quarter, quarter], _fmt(grouped.get("DETERMINISTIC", [])))
    report.check("beta_3 = 1/2 on the 2-order element", anchor,
                 grouped.get("K_ORDER(2)") == [half], _fmt(grouped.get("K_ORDER(2)", [])))
    return report
