"""
上下文性层级与顶点判定
截面回溯搜索、强上下文性、经典凸包成员（精确 LP）以及基于预序的顶点判定
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .. import config
from ..errors import PreconditionError, ResourceLimitError, SimpolError
from ..logger import get_logger
from .dist import (
    Cell,
    OutcomeProfile,
    Section,
    SimplicialDistribution,
    deterministic,
    from_cells,
    support_pattern,
)
from .lpcore import INFEASIBLE, LinearSystem, lp_feasible, solve_affine
from .space import MeasurementSpace, VertexId

logger = get_logger()

ONE = Fraction(1)


class ClassificationTag(str, Enum):
    DETERMINISTIC = "DETERMINISTIC"
    NONCONTEXTUAL_NONVERTEX = "NONCONTEXTUAL_NONVERTEX"
    CONTEXTUAL_NONVERTEX = "CONTEXTUAL_NONVERTEX"
    CONTEXTUAL_VERTEX = "CONTEXTUAL_VERTEX"

    # 非上下文顶点恰好是确定性分布
    NONCONTEXTUAL_VERTEX = "DETERMINISTIC"

    @property
    def is_vertex(self) -> bool:
        return self in (ClassificationTag.DETERMINISTIC, ClassificationTag.CONTEXTUAL_VERTEX)

    @property
    def is_contextual(self) -> bool:
        return self in (ClassificationTag.CONTEXTUAL_NONVERTEX, ClassificationTag.CONTEXTUAL_VERTEX)


@dataclass
class VertexTest:
    """
    顶点判定结果

    非顶点时给出核方向 direction 与 epsilon，使 p ± epsilon·direction 都是合法分布
    """
    is_vertex: bool
    dimension: int = 0
    direction: Optional[Dict[Cell, Fraction]] = None
    epsilon: Optional[Fraction] = None

    def perturbations(self, p: SimplicialDistribution) -> Optional[Tuple[SimplicialDistribution, SimplicialDistribution]]:
        if self.direction is None:
            return None
        plus = {cell: p.cell(*cell) + self.epsilon * self.direction.get(cell, 0)
                for cell in support_pattern(p)}
        minus = {cell: p.cell(*cell) - self.epsilon * self.direction.get(cell, 0)
                 for cell in support_pattern(p)}
        return from_cells(p.space, p.profile, plus), from_cells(p.space, p.profile, minus)


@dataclass
class Classification:
    tag: ClassificationTag
    sections: List[Section] = field(default_factory=list)
    weights: Optional[List[Tuple[Fraction, Section]]] = None
    vertex_test: Optional[VertexTest] = None

    @property
    def strongly_contextual(self) -> bool:
        return not self.sections


# ============= 线性系统 =============

def cell_system(space: MeasurementSpace, profile: OutcomeProfile, cells: Iterable[Cell]) -> LinearSystem:
    """
    以给定单元格为变量（其余单元格为 0）的非信号系统

    等式：每条边归一化；每个顶点每个结果处，所有关联边的边缘表达式相等。
    所有变量非负。
    """
    variables = sorted(set(cells))
    system = LinearSystem(variables)
    by_edge: Dict[str, List[Cell]] = {e.id: [] for e in space.edges}
    for cell in variables:
        by_edge[cell[0]].append(cell)

    for e in space.edges:
        system.add_equality({cell: 1 for cell in by_edge[e.id]}, 1)

    for v in space.vertices:
        incident = [(e, True) for e in space.edges if e.src == v] + [(e, False) for e in space.edges if e.tgt == v]
        if len(incident) < 2:
            continue
        for outcome in range(profile[v]):
            expressions = []
            for e, outgoing in incident:
                expr = {}
                for cell in by_edge[e.id]:
                    _, a, b = cell
                    if (a if outgoing else b) == outcome:
                        expr[cell] = 1
                expressions.append(expr)
            reference = expressions[0]
            for expr in expressions[1:]:
                row = dict(expr)
                for cell, coef in reference.items():
                    row[cell] = row.get(cell, 0) - coef
                if any(row.values()):
                    system.add_equality(row, 0)
    return system


# ============= 截面 =============

def _edge_supports(p: SimplicialDistribution) -> Dict[str, frozenset]:
    support: Dict[str, set] = {e.id: set() for e in p.space.edges}
    for (eid, a, b) in support_pattern(p):
        support[eid].add((a, b))
    return {eid: frozenset(cells) for eid, cells in support.items()}


def iter_sections(p: SimplicialDistribution) -> Iterator[Section]:
    """
    回溯枚举 supp(p) 中的截面

    每一步选取剩余定义域最小的顶点（fail-first），并用已赋值邻点的边支撑剪枝
    """
    space = p.space
    support = _edge_supports(p)

    domains: Dict[VertexId, List[int]] = {}
    for v in space.vertices:
        allowed = set(range(p.profile[v]))
        for e in space.edges:
            if e.src == v:
                allowed &= {a for a, _ in support[e.id]}
            if e.tgt == v:
                allowed &= {b for _, b in support[e.id]}
        domains[v] = sorted(allowed)

    neighbours: Dict[VertexId, List[Tuple[str, VertexId, bool]]] = {v: [] for v in space.vertices}
    for e in space.edges:
        neighbours[e.src].append((e.id, e.tgt, True))
        neighbours[e.tgt].append((e.id, e.src, False))

    order = {v: i for i, v in enumerate(space.vertices)}
    assignment: Dict[VertexId, int] = {}

    def consistent(v: VertexId, value: int) -> bool:
        for eid, other, outgoing in neighbours[v]:
            if other in assignment:
                pair = (value, assignment[other]) if outgoing else (assignment[other], value)
                if pair not in support[eid]:
                    return False
        return True

    def search() -> Iterator[Section]:
        if len(assignment) == len(space.vertices):
            yield Section.of(assignment)
            return
        best, best_values = None, None
        for v in space.vertices:
            if v in assignment:
                continue
            values = [x for x in domains[v] if consistent(v, x)]
            if best is None or len(values) < len(best_values) or (
                    len(values) == len(best_values) and order[v] < order[best]):
                best, best_values = v, values
            if not values:
                return
        for value in best_values:
            assignment[best] = value
            yield from search()
            del assignment[best]

    yield from search()


def find_sections(p: SimplicialDistribution, limit: Optional[int] = None) -> List[Section]:
    """
    supp(p) 的全部截面，按顶点顺序的取值字典序排列

    Args:
        p: 分布
        limit: 截面数量上限，超过时抛出 ResourceLimitError

    Returns:
        截面列表
    """
    found = []
    for section in iter_sections(p):
        found.append(section)
        if limit is not None and len(found) > limit:
            raise ResourceLimitError("too many sections in the support", limit, len(found))
    vertices = p.space.vertices
    found.sort(key=lambda s: tuple(s[v] for v in vertices))
    return found


def is_strongly_contextual(p: SimplicialDistribution) -> bool:
    return next(iter_sections(p), None) is None


def noncontextual_decomposition(p: SimplicialDistribution,
                                section_cap: Optional[int] = None) -> Optional[List[Tuple[Fraction, Section]]]:
    """
    求 p = Σ λ_φ δ^φ（φ ∈ supp(p)，λ ≥ 0，Σλ = 1）的精确凸权重

    Returns:
        [(λ_φ, φ)]（只保留正权重），不存在时返回 None
    """
    cap = section_cap if section_cap is not None else config.section_cap()
    sections = find_sections(p, limit=cap)
    if not sections:
        return None

    system = LinearSystem(range(len(sections)))
    system.add_equality({i: 1 for i in range(len(sections))}, 1)
    for e in p.space.edges:
        for a, row in enumerate(p.matrix(e.id)):
            for b, value in enumerate(row):
                if value == 0:
                    continue
                coeffs = {i: 1 for i, s in enumerate(sections) if s[e.src] == a and s[e.tgt] == b}
                system.add_equality(coeffs, value)

    point = lp_feasible(system)
    if point is None:
        logger.debug(f"No convex decomposition over {len(sections)} supported sections")
        return None
    return [(point[i], s) for i, s in enumerate(sections) if point[i] != 0]


def is_contextual(p: SimplicialDistribution, section_cap: Optional[int] = None) -> bool:
    return noncontextual_decomposition(p, section_cap) is None


# ============= 顶点判定 =============

def vertex_test(p: SimplicialDistribution) -> VertexTest:
    """
    p 是顶点当且仅当支撑上的非信号仿射系统有唯一解

    {q : q ⪯ p} 是该仿射集的非负部分，p 在支撑上严格为正，
    因此任一核方向都给出双向扰动。
    """
    support = support_pattern(p)
    system = cell_system(p.space, p.profile, support)
    solution = solve_affine(system)
    if solution.status == INFEASIBLE:
        raise PreconditionError("vertex test needs a valid distribution (non-signaling system is infeasible)")
    if solution.is_unique:
        return VertexTest(True)

    direction = {cell: value for cell, value in solution.kernel[0].items() if value != 0}
    bound = min(p.cell(*cell) / abs(value) for cell, value in direction.items())
    return VertexTest(False, solution.dimension, direction, bound / 2)


def is_vertex(p: SimplicialDistribution) -> bool:
    return vertex_test(p).is_vertex


def is_deterministic(p: SimplicialDistribution) -> bool:
    """每个矩阵恰有一个值为 1 的单元格"""
    return all([x for row in p.matrix(e.id) for x in row if x != 0] == [ONE] for e in p.space.edges)


def classify(p: SimplicialDistribution, section_cap: Optional[int] = None) -> Classification:
    """
    综合三项判定给出分类标签，并检查层级一致性（上下文顶点必为强上下文）
    """
    cap = section_cap if section_cap is not None else config.section_cap()
    test = vertex_test(p)
    sections = find_sections(p, limit=cap)

    if test.is_vertex:
        if sections:
            if deterministic(p.space, p.profile, sections[0]) != p:
                raise SimpolError("vertex with a supported section must be that deterministic distribution")
            return Classification(ClassificationTag.DETERMINISTIC, sections, [(ONE, sections[0])], test)
        return Classification(ClassificationTag.CONTEXTUAL_VERTEX, sections, None, test)

    weights = noncontextual_decomposition(p, cap) if sections else None
    if weights is None:
        return Classification(ClassificationTag.CONTEXTUAL_NONVERTEX, sections, None, test)
    return Classification(ClassificationTag.NONCONTEXTUAL_NONVERTEX, sections, weights, test)
