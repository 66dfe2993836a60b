"""
圆场景上的 k 阶圈分布
由 k×n 的列互异结果序列生成分布、识别、规范化、枚举与计数
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..errors import InvalidArgumentError
from ..logger import get_logger
from .dist import Cell, OutcomeProfile, SimplicialDistribution, from_cells, support_pattern
from .space import MeasurementSpace, make_cycle

logger = get_logger()


@dataclass(frozen=True)
class CycleSequence:
    """
    k 行 n 列的结果序列 a_i^(j)

    第 j 行是圈上第 j 圈经过的结果；每列内 k 个值互不相同。
    """
    n: int
    d: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.n < 2:
            raise InvalidArgumentError(f"a cycle needs n >= 2, got {self.n}")
        if self.d < 2:
            raise InvalidArgumentError(f"need d >= 2 outcomes, got {self.d}")
        if not 1 <= len(rows) <= self.d:
            raise InvalidArgumentError(f"order k must lie in [1, {self.d}], got {len(rows)}")
        for row in rows:
            if len(row) != self.n:
                raise InvalidArgumentError(f"row {row} must have n = {self.n} entries")
            for x in row:
                if not isinstance(x, int) or not 0 <= x < self.d:
                    raise InvalidArgumentError(f"outcome {x!r} is not in Z_{self.d}")
        for i in range(self.n):
            column = [row[i] for row in rows]
            if len(set(column)) != len(column):
                raise InvalidArgumentError(f"column {i + 1} repeats an outcome: {column}")

    @property
    def k(self) -> int:
        return len(self.rows)

    def column(self, i: int) -> Tuple[int, ...]:
        return tuple(row[i] for row in self.rows)

    def flat(self) -> Tuple[int, ...]:
        return tuple(x for row in self.rows for x in row)


def rotate(seq: CycleSequence, shift: int) -> CycleSequence:
    shift %= seq.k
    return CycleSequence(seq.n, seq.d, seq.rows[shift:] + seq.rows[:shift])


def canonicalize(seq: CycleSequence) -> CycleSequence:
    """行循环移位下（按行展开）字典序最小的代表"""
    return min((rotate(seq, r) for r in range(seq.k)), key=CycleSequence.flat)


def is_canonical(seq: CycleSequence) -> bool:
    # 第一列互异，字典序最小的移位就是第一列最小值位于首行的那个
    return seq.rows[0][0] == min(seq.column(0))


def sequence_cells(seq: CycleSequence, edge_ids: Sequence[str]) -> Dict[Cell, Fraction]:
    """序列在圈边上的单元格：e_i (i<n) 取 (a_i^(j), a_{i+1}^(j))，e_n 取 (a_n^(j), a_1^(j+1))"""
    weight = Fraction(1, seq.k)
    cells: Dict[Cell, Fraction] = {}
    for j, row in enumerate(seq.rows):
        for i in range(seq.n - 1):
            cells[(edge_ids[i], row[i], row[i + 1])] = weight
        following = seq.rows[(j + 1) % seq.k]
        cells[(edge_ids[seq.n - 1], row[seq.n - 1], following[0])] = weight
    return cells


def from_sequence(seq: CycleSequence, space: Optional[MeasurementSpace] = None,
                  profile: Optional[OutcomeProfile] = None) -> SimplicialDistribution:
    """
    k 阶圈分布 p：每条边在 k 个单元格上取 1/k

    Args:
        seq: 结果序列
        space: 默认 make_cycle(n)，给出时必须是边序与 C^(n) 一致的有向圈
        profile: 默认均匀 d

    Returns:
        SimplicialDistribution
    """
    space = space or make_cycle(seq.n)
    order = space.directed_cycle_order()
    if order is None or len(order) != seq.n:
        raise InvalidArgumentError(f"space is not a directed {seq.n}-cycle")
    profile = profile or OutcomeProfile.uniform(space, seq.d)
    for i, e in enumerate(order):
        if any(x >= profile[e.src] for x in seq.column(i)):
            raise InvalidArgumentError(f"column {i + 1} exceeds the arity of vertex {e.src!r}")
    return from_cells(space, profile, sequence_cells(seq, [e.id for e in order]))


def recognize(p: SimplicialDistribution) -> Optional[Tuple[int, CycleSequence]]:
    """
    识别 k 阶圈分布

    沿被支撑的转移绕圈：每列出发结果必须唯一确定下一步，
    回到起点前不得重复访问 (列, 结果)。成功时返回 (k, 规范序列)。
    """
    order = p.space.directed_cycle_order()
    if order is None:
        raise InvalidArgumentError("recognize needs a directed cycle space")
    n = len(order)
    d = p.profile.max_arity()

    nonzero = {value for _, value in p.cells() if value != 0}
    if len(nonzero) != 1:
        return None
    weight = nonzero.pop()
    if weight.numerator != 1:
        return None
    k = weight.denominator

    successors: List[Dict[int, List[int]]] = []
    for e in order:
        step: Dict[int, List[int]] = {}
        for (_, a, b) in sorted(c for c in support_pattern(p) if c[0] == e.id):
            step.setdefault(a, []).append(b)
        successors.append(step)
    if any(len(step) != k or any(len(bs) != 1 for bs in step.values()) for step in successors):
        return None

    start = min(successors[0])
    rows: List[Tuple[int, ...]] = []
    visited = set()
    current = start
    while True:
        row = []
        for i in range(n):
            if (i, current) in visited or current not in successors[i]:
                return None
            visited.add((i, current))
            row.append(current)
            current = successors[i][current][0]
        rows.append(tuple(row))
        if current == start:
            break
    if len(rows) != k:
        return None

    seq = CycleSequence(n, d, tuple(rows))
    if from_sequence(seq, p.space, p.profile) != p:
        return None
    return k, canonicalize(seq)


# ============= 计数与枚举 =============

def count_k(n: int, d: int, k: int) -> int:
    """恰为 k 阶的顶点数 C(d,k)^n · (k!)^(n-1) · (k-1)!"""
    if n < 2 or d < 1:
        raise InvalidArgumentError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if not 1 <= k <= d:
        return 0
    return math.comb(d, k) ** n * math.factorial(k) ** (n - 1) * math.factorial(k - 1)


def count_vertices(n: int, d: int, contextual_only: bool = False) -> int:
    low = 2 if contextual_only else 1
    return sum(count_k(n, d, k) for k in range(low, d + 1))


def _check_nd(n: int, d: int):
    if n < 2 or d < 2:
        raise InvalidArgumentError(f"need n >= 2 and d >= 2, got n={n}, d={d}")


def enumerate_sequences(n: int, d: int, k: int, arities: Optional[Sequence[int]] = None) -> Iterator[CycleSequence]:
    """
    按规范形字典序逐个生成全部 k 阶规范序列

    按行优先顺序逐格填值，每格从小到大取与同列上方各行不同的结果；
    第一列要求首行为列内最小值（消去 k 个循环移位）。

    Args:
        n: 圈长
        d: 结果数上界
        k: 阶数
        arities: 各列的结果数 m_i（丛场景），默认都为 d
    """
    _check_nd(n, d)
    arities = list(arities) if arities is not None else [d] * n
    if len(arities) != n:
        raise InvalidArgumentError(f"need {n} arities, got {len(arities)}")
    if not 1 <= k <= min(arities):
        return
    grid = [[0] * n for _ in range(k)]

    def fill(pos: int) -> Iterator[CycleSequence]:
        if pos == k * n:
            yield CycleSequence(n, d, tuple(tuple(row) for row in grid))
            return
        j, i = divmod(pos, n)
        above = {grid[r][i] for r in range(j)}
        if i == 0 and j == 0:
            candidates = range(arities[0] - k + 1)
        elif i == 0:
            candidates = range(grid[0][0] + 1, arities[0])
        else:
            candidates = range(arities[i])
        for value in candidates:
            if value in above:
                continue
            grid[j][i] = value
            yield from fill(pos + 1)

    yield from fill(0)


def enumerate_vertices(n: int, d: int, contextual_only: bool = False) -> Iterator[Tuple[CycleSequence, SimplicialDistribution]]:
    """
    C^(n) 上均匀 d 场景的全部顶点（按 k、再按规范形排序）

    Yields:
        (规范序列, 分布)
    """
    _check_nd(n, d)
    space = make_cycle(n)
    profile = OutcomeProfile.uniform(space, d)
    low = 2 if contextual_only else 1
    for k in range(low, d + 1):
        logger.debug(f"Enumerating {count_k(n, d, k)} vertices of order {k} on C^({n}) with d={d}")
        for seq in enumerate_sequences(n, d, k):
            yield seq, from_sequence(seq, space, profile)


# ============= 其它生成器 =============

def staircase_sequence(n: int, k: int, d: Optional[int] = None) -> CycleSequence:
    """第 j 行全为 j 的 k 阶序列"""
    return CycleSequence(n, d or max(k, 2), tuple(tuple([j] * n) for j in range(k)))


def random_sequence(n: int, d: int, k: int, rng: Optional[random.Random] = None) -> CycleSequence:
    """每列独立均匀抽取 k 个互异值的规范序列"""
    rng = rng or random.Random()
    if not 1 <= k <= d:
        raise InvalidArgumentError(f"order k must lie in [1, {d}], got {k}")
    columns = [rng.sample(range(d), k) for _ in range(n)]
    return canonicalize(CycleSequence(n, d, tuple(zip(*columns))))


def growth_ratio(n: int, d: int) -> float:
    """log V(n,d) 与 n(d·ln d − d) 之比，d 增大时趋于 1"""
    _check_nd(n, d)
    reference = n * (d * math.log(d) - d)
    if reference <= 0:
        raise InvalidArgumentError(f"d = {d} is too small for the asymptotic comparison")
    return math.log(count_vertices(n, d)) / reference
