"""
小规模场景的精确顶点枚举
按支撑模式搜索：支撑 S 上非信号系统的唯一解若严格为正，则它是以 S 为支撑的顶点
"""

import itertools
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .. import config
from ..errors import InvalidArgumentError, ResourceLimitError
from ..logger import get_logger
from .analysis import cell_system
from .dist import Cell, OutcomeProfile, SimplicialDistribution, from_cells, support_pattern
from .lpcore import LinearSystem, lp_feasible, solve_affine
from .space import MeasurementSpace, VertexId

logger = get_logger()


def _allowed_cells(space: MeasurementSpace, profile: OutcomeProfile,
                   restriction: Optional[Iterable[Cell]]) -> Dict[str, List[Cell]]:
    allowed: Dict[str, List[Cell]] = {}
    wanted = set(restriction) if restriction is not None else None
    for e in space.edges:
        cells = [
            (e.id, a, b)
            for a in range(profile[e.src])
            for b in range(profile[e.tgt])
            if wanted is None or (e.id, a, b) in wanted
        ]
        allowed[e.id] = cells
    return allowed


def _system_rank(system: LinearSystem) -> int:
    solution = solve_affine(system)
    return len(system.variables) - solution.dimension


def enumerate_polytope_vertices(space: MeasurementSpace, profile: OutcomeProfile,
                                support_restriction: Optional[Iterable[Cell]] = None,
                                cell_cap: Optional[int] = None) -> List[SimplicialDistribution]:
    """
    枚举 sDist(X) 的全部顶点（可限制在给定支撑内）

    每条边选一个非空单元格子集；同一顶点处各关联边投影出的结果集合必须相同，
    且支撑大小不超过系统的秩。结果按精确矩阵字典序排列。

    Args:
        space: 测量空间
        profile: 结果数
        support_restriction: 允许为正的单元格，None 表示不限制
        cell_cap: 单元格总数上限，默认 SIMPOL_ORACLE_CELL_CAP

    Returns:
        顶点列表
    """
    cap = cell_cap if cell_cap is not None else config.oracle_cell_cap()
    allowed = _allowed_cells(space, profile, support_restriction)
    total = sum(len(cells) for cells in allowed.values())
    if total > cap:
        raise ResourceLimitError("oracle scenario has too many cells", cap, total)
    if not space.edges:
        raise InvalidArgumentError("oracle needs at least one edge")
    if any(not cells for cells in allowed.values()):
        return []

    full = cell_system(space, profile, [c for cells in allowed.values() for c in cells])
    if lp_feasible(full) is None:
        return []
    rank = _system_rank(full)
    logger.debug(f"Oracle: {total} cells, rank {rank}, {len(space.edges)} edges")

    edges = list(space.edges)
    # 顶点 -> 已选边投影出的结果集合
    projected: Dict[VertexId, FrozenSet[int]] = {}
    chosen: List[Tuple[Cell, ...]] = []
    found: Dict[tuple, SimplicialDistribution] = {}
    remaining_min = [len(edges) - i for i in range(len(edges) + 1)]

    def search(index: int, size: int):
        if index == len(edges):
            support = [c for cells in chosen for c in cells]
            solution = solve_affine(cell_system(space, profile, support))
            if solution.is_unique and all(solution.particular[c] > 0 for c in support):
                q = from_cells(space, profile, solution.particular)
                found[q.key()] = q
            return
        e = edges[index]
        budget = rank - size - (remaining_min[index + 1])
        for r in range(1, min(budget, len(allowed[e.id])) + 1):
            for subset in itertools.combinations(allowed[e.id], r):
                rows = frozenset(a for _, a, _ in subset)
                cols = frozenset(b for _, _, b in subset)
                saved = {}
                ok = True
                for vertex, outcomes in ((e.src, rows), (e.tgt, cols)):
                    if vertex in projected:
                        if projected[vertex] != outcomes:
                            ok = False
                            break
                    elif vertex not in saved:
                        saved[vertex] = outcomes
                if not ok:
                    continue
                projected.update(saved)
                chosen.append(subset)
                search(index + 1, size + r)
                chosen.pop()
                for vertex in saved:
                    del projected[vertex]

    search(0, 0)
    vertices = sorted(found.values(), key=SimplicialDistribution.key)
    logger.info(f"Oracle found {len(vertices)} vertices")
    return vertices


def hull_membership(p: SimplicialDistribution,
                    vertices: Sequence[SimplicialDistribution]) -> Optional[List[Fraction]]:
    """p 是否为给定点的凸组合，是则返回精确权重"""
    if not vertices:
        return None
    system = LinearSystem(range(len(vertices)))
    system.add_equality({i: 1 for i in range(len(vertices))}, 1)
    for cell, value in p.cells():
        system.add_equality({i: q.cell(*cell) for i, q in enumerate(vertices) if q.cell(*cell) != 0}, value)
    point = lp_feasible(system)
    if point is None:
        return None
    return [point[i] for i in range(len(vertices))]


def is_polytope_vertex(p: SimplicialDistribution, cell_cap: Optional[int] = None) -> bool:
    """用枚举交叉检验：p 是否出现在支撑受限于 supp(p) 的顶点中"""
    candidates = enumerate_polytope_vertices(p.space, p.profile, support_pattern(p), cell_cap)
    return p in candidates

