"""
精确有理线性代数与线性规划
高斯消元（求解仿射系统）与两阶段单纯形法（Bland 最小下标规则防循环），全部使用 Fraction
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import InvalidArgumentError
from ..logger import get_logger

logger = get_logger()

Key = Hashable
Coefficients = Union[Mapping[Key, object], Sequence[object]]

ZERO = Fraction(0)
ONE = Fraction(1)

UNIQUE = "UNIQUE"
INFEASIBLE = "INFEASIBLE"
AFFINE = "AFFINE"

OPTIMAL = "OPTIMAL"
UNBOUNDED = "UNBOUNDED"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return Fraction(x)
    raise InvalidArgumentError(f"exact rationals only, got {x!r}")


class LinearSystem:
    """
    线性等式系统，可附带非负约束

    Attributes:
        variables: 有序的变量键
        equalities: (系数向量, 常数) 列表，系数向量与变量一一对应
        nonneg_vars: 需要非负的变量键集合
    """

    def __init__(self, variables: Iterable[Key], nonneg: Optional[Iterable[Key]] = None):
        self.variables: List[Key] = list(variables)
        self._index: Dict[Key, int] = {}
        for i, key in enumerate(self.variables):
            if key in self._index:
                raise InvalidArgumentError(f"duplicate variable {key!r}")
            self._index[key] = i
        self.nonneg_vars = frozenset(self.variables if nonneg is None else nonneg)
        unknown = self.nonneg_vars - set(self._index)
        if unknown:
            raise InvalidArgumentError(f"nonnegativity on unknown variables {sorted(map(str, unknown))}")
        self.equalities: List[Tuple[Tuple[Fraction, ...], Fraction]] = []

    def has_variable(self, key) -> bool:
        try:
            return key in self._index
        except TypeError:
            return False

    def index(self, key: Key) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise InvalidArgumentError(f"unknown variable {key!r}")

    def dense(self, coefficients: Coefficients) -> Tuple[Fraction, ...]:
        if isinstance(coefficients, Mapping):
            row = [ZERO] * len(self.variables)
            for key, value in coefficients.items():
                row[self.index(key)] += _frac(value)
            return tuple(row)
        if len(coefficients) != len(self.variables):
            raise InvalidArgumentError(
                f"coefficient vector has {len(coefficients)} entries, system has {len(self.variables)} variables"
            )
        return tuple(_frac(x) for x in coefficients)

    def add_equality(self, coefficients: Coefficients, constant=0) -> "LinearSystem":
        self.equalities.append((self.dense(coefficients), _frac(constant)))
        return self

    def with_equalities(self, extra: Iterable[Tuple[Coefficients, object]]) -> "LinearSystem":
        """复制一份并追加等式"""
        copy = LinearSystem(self.variables, self.nonneg_vars)
        copy.equalities = list(self.equalities)
        for coefficients, constant in extra:
            copy.add_equality(coefficients, constant)
        return copy

    def evaluate(self, point: Mapping[Key, Fraction], coefficients: Coefficients) -> Fraction:
        row = self.dense(coefficients)
        return sum((c * point[k] for c, k in zip(row, self.variables) if c), ZERO)

    def satisfied_by(self, point: Mapping[Key, Fraction]) -> bool:
        """点是否精确满足全部约束"""
        for key in self.nonneg_vars:
            if point[key] < 0:
                return False
        for row, constant in self.equalities:
            if sum((c * point[k] for c, k in zip(row, self.variables) if c), ZERO) != constant:
                return False
        return True


@dataclass
class AffineSolution:
    """solve_affine 的结果"""
    status: str
    dimension: int = 0
    particular: Optional[Dict[Key, Fraction]] = None
    kernel: List[Dict[Key, Fraction]] = field(default_factory=list)

    @property
    def is_unique(self) -> bool:
        return self.status == UNIQUE


def _rref(rows: List[List[Fraction]], ncols: int) -> List[int]:
    """原地化为行最简形，返回主元列（最后一列为常数列，不参与选主元）"""
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_affine(system: LinearSystem) -> AffineSolution:
    """
    忽略非负约束，精确求解等式系统

    Returns:
        UNIQUE(解) / INFEASIBLE / AFFINE(维数, 特解, 核基)
    """
    n = len(system.variables)
    rows = [list(row) + [constant] for row, constant in system.equalities]
    pivots = _rref(rows, n)
    for row in rows[len(pivots):]:
        if row[n] != 0:
            return AffineSolution(INFEASIBLE)

    particular = {key: ZERO for key in system.variables}
    for r, c in enumerate(pivots):
        particular[system.variables[c]] = rows[r][n]

    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return AffineSolution(UNIQUE, 0, particular)

    kernel = []
    for f in free:
        vec = {key: ZERO for key in system.variables}
        vec[system.variables[f]] = ONE
        for r, c in enumerate(pivots):
            vec[system.variables[c]] = -rows[r][f]
        kernel.append(vec)
    return AffineSolution(AFFINE, len(free), particular, kernel)


# ============= 单纯形法 =============

@dataclass
class LPResult:
    status: str  # OPTIMAL / INFEASIBLE / UNBOUNDED
    value: Optional[Fraction] = None
    point: Optional[Dict[Key, Fraction]] = None


class _Tableau:
    """标准形 min c·x, Ax = b, x ≥ 0 的稠密单纯形表"""

    def __init__(self, a: List[List[Fraction]], b: List[Fraction]):
        self.m = len(a)
        self.n = len(a[0]) if a else 0
        self.rows = [list(row) + [rhs] for row, rhs in zip(a, b)]
        self.basis: List[int] = []
        self.pivots = 0

    def pivot(self, r: int, c: int):
        inv = ONE / self.rows[r][c]
        self.rows[r] = [x * inv for x in self.rows[r]]
        for i in range(len(self.rows)):
            if i != r and self.rows[i][c] != 0:
                f = self.rows[i][c]
                self.rows[i] = [x - f * y for x, y in zip(self.rows[i], self.rows[r])]
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, cost: List[Fraction], allowed: int) -> List[Fraction]:
        reduced = []
        for j in range(allowed):
            z = sum((cost[self.basis[i]] * self.rows[i][j] for i in range(len(self.rows)) if self.rows[i][j]), ZERO)
            reduced.append(cost[j] - z)
        return reduced

    def run(self, cost: List[Fraction], allowed: int) -> str:
        """Bland 规则迭代至最优或无界，只允许下标 < allowed 的列入基"""
        while True:
            reduced = self.reduced_costs(cost, allowed)
            entering = next((j for j in range(allowed) if reduced[j] < 0 and j not in self.basis), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    candidate = (ratio, self.basis[i], i)
                    if best is None or candidate < best:
                        best = candidate
            if best is None:
                return UNBOUNDED
            self.pivot(best[2], entering)

    def solution(self, size: int) -> List[Fraction]:
        x = [ZERO] * size
        for i, j in enumerate(self.basis):
            if j < size:
                x[j] = self.rows[i][-1]
        return x


def _standard_form(system: LinearSystem) -> Tuple[List[List[Fraction]], List[Fraction], List[Tuple[int, int]]]:
    """自由变量拆成 x = x⁺ - x⁻，返回 (A, b, 列映射)"""
    columns: List[Tuple[int, int]] = []  # (原变量下标, 符号)
    for i, key in enumerate(system.variables):
        columns.append((i, 1))
        if key not in system.nonneg_vars:
            columns.append((i, -1))
    a = [[row[i] * sign for i, sign in columns] for row, _ in system.equalities]
    b = [constant for _, constant in system.equalities]
    return a, b, columns


def _solve_lp(system: LinearSystem, objective: Optional[Coefficients]) -> LPResult:
    a, b, columns = _standard_form(system)
    n = len(columns)
    m = len(a)

    if m == 0:
        # 无等式约束：原点可行
        point = {key: ZERO for key in system.variables}
        if objective is None:
            return LPResult(OPTIMAL, ZERO, point)
        c = system.dense(objective)
        if any(c[i] * sign < 0 for i, sign in columns):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, ZERO, point)

    # 右端非负化后加入人工变量做第一阶段
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    tableau = _Tableau([row + [ONE if k == i else ZERO for k in range(m)] for i, row in enumerate(a)], b)
    tableau.basis = list(range(n, n + m))
    phase1_cost = [ZERO] * n + [ONE] * m
    tableau.run(phase1_cost, n + m)
    infeasibility = sum((tableau.rows[i][-1] for i, j in enumerate(tableau.basis) if j >= n), ZERO)
    if infeasibility > 0:
        logger.debug(f"LP infeasible after phase 1 ({tableau.pivots} pivots)")
        return LPResult(INFEASIBLE)

    # 把残留的人工变量移出基，去掉冗余行
    redundant = []
    for i, j in enumerate(list(tableau.basis)):
        if j < n:
            continue
        col = next((k for k in range(n) if tableau.rows[i][k] != 0), None)
        if col is None:
            redundant.append(i)
        else:
            tableau.pivot(i, col)
    for i in reversed(redundant):
        del tableau.rows[i]
        del tableau.basis[i]

    if objective is None:
        cost = [ZERO] * (n + m)
    else:
        c = system.dense(objective)
        cost = [c[i] * sign for i, sign in columns] + [ZERO] * m
    status = tableau.run(cost, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    x = tableau.solution(n)
    point = {key: ZERO for key in system.variables}
    for (i, sign), value in zip(columns, x):
        point[system.variables[i]] += sign * value
    value = ZERO if objective is None else system.evaluate(point, objective)
    logger.debug(f"LP solved with {tableau.pivots} pivots")
    return LPResult(OPTIMAL, value, point)


def lp_feasible(system: LinearSystem) -> Optional[Dict[Key, Fraction]]:
    """返回一个精确可行点，不可行时返回 None"""
    result = _solve_lp(system, None)
    return result.point if result.status == OPTIMAL else None


def lp_minimize(system: LinearSystem, objective: Coefficients) -> LPResult:
    return _solve_lp(system, objective)


def lp_maximize(system: LinearSystem, objective: Coefficients) -> LPResult:
    negated = {key: -value for key, value in zip(system.variables, system.dense(objective)) if value}
    result = _solve_lp(system, negated)
    if result.status == OPTIMAL:
        result.value = -result.value
    return result


@dataclass
class Extremes:
    """lp_extremes 的结果，minimum / maximum 为 None 表示该方向无界"""
    minimum: Optional[Fraction]
    maximum: Optional[Fraction]
    argmin: Optional[Dict[Key, Fraction]] = None
    argmax: Optional[Dict[Key, Fraction]] = None

    @property
    def is_bounded(self) -> bool:
        return self.minimum is not None and self.maximum is not None

    @property
    def is_fixed(self) -> bool:
        return self.is_bounded and self.minimum == self.maximum


def lp_extremes(system: LinearSystem, objective: Union[Key, Coefficients]) -> Optional[Extremes]:
    """
    目标（变量键或线性表达式）在可行域上的最小值与最大值

    Returns:
        Extremes；可行域为空时返回 None
    """
    if not isinstance(objective, Mapping) and system.has_variable(objective):
        objective = {objective: ONE}
    low = lp_minimize(system, objective)
    if low.status == INFEASIBLE:
        return None
    high = lp_maximize(system, objective)
    return Extremes(
        minimum=low.value if low.status == OPTIMAL else None,
        maximum=high.value if high.status == OPTIMAL else None,
        argmin=low.point,
        argmax=high.point,
    )


def affine_hull_dimension(system: LinearSystem) -> Tuple[int, Optional[Dict[Key, Fraction]]]:
    """
    {等式 ∩ 非负} 的仿射包维数与一个相对内点

    对每个非负变量求极值：最大值为 0 的变量恒为 0，加入等式后由 solve_affine 得维数；
    相对内点取所有极值见证点的平均。可行域为空时返回 (-1, None)。
    """
    start = lp_feasible(system)
    if start is None:
        return -1, None
    witnesses = [start]
    pinned = []
    for key in system.variables:
        if key not in system.nonneg_vars:
            continue
        ext = lp_extremes(system, key)
        if ext.maximum is not None and ext.maximum == 0:
            pinned.append(({key: ONE}, ZERO))
        for point in (ext.argmin, ext.argmax):
            if point is not None:
                witnesses.append(point)
    hull = solve_affine(system.with_equalities(pinned))
    dimension = 0 if hull.status == UNIQUE else hull.dimension
    if dimension == 0:
        return 0, hull.particular
    weight = Fraction(1, len(witnesses))
    centre = {key: sum((w[key] for w in witnesses), ZERO) * weight for key in system.variables}
    return dimension, centre
