"""
单纯分布模块
一维空间上的单纯分布：每条边一个精确有理数随机矩阵，顶点处满足非信号条件
提供校验、边缘分布、确定性分布、凸组合、预序 ⪯、抽取引理与沿收缩的传递
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import InvalidArgumentError, NotCollapsibleError, PreconditionError, ShapeError
from ..logger import get_logger
from .space import CollapseResult, EdgeId, MeasurementSpace, VertexId

logger = get_logger()

Matrix = Tuple[Tuple[Fraction, ...], ...]
Cell = Tuple[EdgeId, int, int]
RationalLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: RationalLike) -> Fraction:
    """把 int / "num/den" / Fraction 转成 Fraction，拒绝浮点数"""
    if isinstance(value, bool):
        raise InvalidArgumentError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidArgumentError(f"cannot parse rational {value!r}")
    raise InvalidArgumentError(f"exact rationals only, got {type(value).__name__} {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class OutcomeProfile:
    """每个顶点的结果数 m_v（均为 ≥ 2 的整数）"""
    items: Tuple[Tuple[VertexId, int], ...]
    _lookup: Dict[VertexId, int] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(sorted(self.items)))
        for v, m in self.items:
            if not isinstance(m, int) or m < 2:
                raise InvalidArgumentError(f"vertex {v!r} needs at least 2 outcomes, got {m!r}")
        object.__setattr__(self, "_lookup", dict(self.items))

    @classmethod
    def of(cls, arity: Mapping[VertexId, int]) -> "OutcomeProfile":
        return cls(tuple(arity.items()))

    @classmethod
    def uniform(cls, space: MeasurementSpace, d: int) -> "OutcomeProfile":
        return cls(tuple((v, d) for v in space.vertices))

    @property
    def arity(self) -> Dict[VertexId, int]:
        return dict(self.items)

    def __getitem__(self, vertex: VertexId) -> int:
        if vertex in self._lookup:
            return self._lookup[vertex]
        raise InvalidArgumentError(f"no outcome arity for vertex {vertex!r}")

    def covers(self, vertex: VertexId) -> bool:
        return vertex in self._lookup

    def restricted(self, vertices: Iterable[VertexId]) -> "OutcomeProfile":
        keep = set(vertices)
        return OutcomeProfile(tuple((v, m) for v, m in self.items if v in keep))

    def is_uniform(self) -> bool:
        return len({m for _, m in self.items}) <= 1

    def uniform_arity(self) -> int:
        values = {m for _, m in self.items}
        if len(values) != 1:
            raise InvalidArgumentError(f"profile is not uniform: {dict(self.items)}")
        return values.pop()

    def max_arity(self) -> int:
        return max(m for _, m in self.items)


@dataclass(frozen=True)
class Section:
    """全局确定性结果：每个顶点一个结果下标"""
    values: Tuple[Tuple[VertexId, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(self.values)))

    @classmethod
    def of(cls, assignment: Mapping[VertexId, int]) -> "Section":
        return cls(tuple(assignment.items()))

    def __getitem__(self, vertex: VertexId) -> int:
        for v, a in self.values:
            if v == vertex:
                return a
        raise KeyError(vertex)

    def as_dict(self) -> Dict[VertexId, int]:
        return dict(self.values)


@dataclass(frozen=True)
class Violation:
    """validate 返回的违例记录"""
    kind: str  # negative / normalization / non-signaling
    location: str
    detail: str


class SimplicialDistribution:
    """
    一维空间上的单纯分布

    矩阵约定：行下标为源顶点结果（d₁ 面），列下标为靶顶点结果（d₀ 面）。
    构造时只检查形状，非信号条件由 validate() 报告。
    """

    __slots__ = ("space", "profile", "_matrices")

    def __init__(self, space: MeasurementSpace, profile: OutcomeProfile,
                 matrices: Mapping[EdgeId, Sequence[Sequence[RationalLike]]]):
        for v in space.vertices:
            if not profile.covers(v):
                raise ShapeError(f"profile has no arity for vertex {v!r}")
        extra = set(matrices) - set(space.edge_ids)
        if extra:
            raise ShapeError(f"matrices given for unknown edges {sorted(extra)}")

        normalized: Dict[EdgeId, Matrix] = {}
        for e in space.edges:
            if e.id not in matrices:
                raise ShapeError(f"missing matrix for edge {e.id!r}")
            rows, cols = profile[e.src], profile[e.tgt]
            raw = matrices[e.id]
            if len(raw) != rows or any(len(row) != cols for row in raw):
                raise ShapeError(f"edge {e.id!r} needs a {rows}x{cols} matrix")
            normalized[e.id] = tuple(tuple(as_rational(x) for x in row) for row in raw)

        object.__setattr__(self, "space", space)
        object.__setattr__(self, "profile", profile.restricted(space.vertices))
        object.__setattr__(self, "_matrices", normalized)

    def __setattr__(self, name, value):
        raise AttributeError("SimplicialDistribution is immutable")

    @property
    def matrices(self) -> Dict[EdgeId, Matrix]:
        return dict(self._matrices)

    def matrix(self, edge_id: EdgeId) -> Matrix:
        try:
            return self._matrices[edge_id]
        except KeyError:
            raise InvalidArgumentError(f"unknown edge id {edge_id!r}")

    def cell(self, edge_id: EdgeId, a: int, b: int) -> Fraction:
        return self._matrices[edge_id][a][b]

    def cells(self) -> Iterable[Tuple[Cell, Fraction]]:
        for e in self.space.edges:
            for a, row in enumerate(self._matrices[e.id]):
                for b, value in enumerate(row):
                    yield (e.id, a, b), value

    def key(self) -> tuple:
        """可哈希的精确表示，用于集合比较与排序"""
        return tuple((e.id, self._matrices[e.id]) for e in self.space.edges)

    def same_scenario(self, other: "SimplicialDistribution") -> bool:
        return self.space == other.space and self.profile == other.profile

    def __eq__(self, other):
        if not isinstance(other, SimplicialDistribution):
            return NotImplemented
        return self.same_scenario(other) and self._matrices == other._matrices

    def __hash__(self):
        return hash((self.space, self.profile, self.key()))

    def __repr__(self):
        body = ", ".join(
            f"{eid}=" + str([[format_rational(x) for x in row] for row in m])
            for eid, m in self._matrices.items()
        )
        return f"SimplicialDistribution({body})"


# ============= 校验与边缘分布 =============

def _row_sums(m: Matrix) -> Tuple[Fraction, ...]:
    return tuple(sum(row, ZERO) for row in m)


def _col_sums(m: Matrix) -> Tuple[Fraction, ...]:
    if not m:
        return ()
    return tuple(sum((row[b] for row in m), ZERO) for b in range(len(m[0])))


def incident_marginals(p: SimplicialDistribution, vertex: VertexId) -> List[Tuple[EdgeId, Tuple[Fraction, ...]]]:
    """顶点处每条关联边诱导的边缘分布：出边取行和，入边取列和"""
    result = []
    for e in p.space.edges:
        if e.src == vertex:
            result.append((e.id, _row_sums(p.matrix(e.id))))
        if e.tgt == vertex:
            result.append((e.id, _col_sums(p.matrix(e.id))))
    return result


def validate(p: SimplicialDistribution) -> List[Violation]:
    """
    校验单纯分布

    检查 (i) 元素非负 (ii) 每个矩阵和为 1 (iii) 每个顶点处所有关联边诱导的边缘分布一致

    Returns:
        违例列表，空列表表示合法
    """
    violations: List[Violation] = []
    for e in p.space.edges:
        m = p.matrix(e.id)
        for a, row in enumerate(m):
            for b, value in enumerate(row):
                if value < 0:
                    violations.append(Violation("negative", e.id, f"entry ({a},{b}) = {format_rational(value)}"))
        total = sum((sum(row, ZERO) for row in m), ZERO)
        if total != ONE:
            violations.append(Violation("normalization", e.id, f"entries sum to {format_rational(total)}"))

    for v in p.space.vertices:
        induced = incident_marginals(p, v)
        if len(induced) < 2:
            continue
        ref_edge, ref = induced[0]
        for eid, vec in induced[1:]:
            if vec != ref:
                violations.append(Violation(
                    "non-signaling", v,
                    f"edge {eid} induces {[format_rational(x) for x in vec]} "
                    f"but edge {ref_edge} induces {[format_rational(x) for x in ref]}",
                ))
    return violations


def is_valid(p: SimplicialDistribution) -> bool:
    return not validate(p)


def marginal(p: SimplicialDistribution, vertex: VertexId) -> Tuple[Fraction, ...]:
    """顶点处的公共边缘分布，孤立顶点报错"""
    if not p.space.has_vertex(vertex):
        raise InvalidArgumentError(f"unknown vertex {vertex!r}")
    induced = incident_marginals(p, vertex)
    if not induced:
        raise InvalidArgumentError(f"vertex {vertex!r} is isolated, it has no marginal")
    return induced[0][1]


def vertex_marginals(p: SimplicialDistribution) -> Dict[VertexId, Tuple[Fraction, ...]]:
    return {v: marginal(p, v) for v in p.space.vertices if not p.space.is_isolated(v)}


# ============= 构造 =============

def deterministic(space: MeasurementSpace, profile: OutcomeProfile,
                  section: Union[Section, Mapping[VertexId, int]]) -> SimplicialDistribution:
    """确定性分布 δ^φ：每条边在 (φ(src), φ(tgt)) 处为 1"""
    assignment = section.as_dict() if isinstance(section, Section) else dict(section)
    for v in space.vertices:
        if v not in assignment:
            raise InvalidArgumentError(f"section does not assign vertex {v!r}")
        if not 0 <= assignment[v] < profile[v]:
            raise InvalidArgumentError(f"outcome {assignment[v]} out of range for vertex {v!r} (m={profile[v]})")
    matrices = {}
    for e in space.edges:
        rows, cols = profile[e.src], profile[e.tgt]
        matrices[e.id] = [
            [ONE if (a, b) == (assignment[e.src], assignment[e.tgt]) else ZERO for b in range(cols)]
            for a in range(rows)
        ]
    return SimplicialDistribution(space, profile, matrices)


def from_cells(space: MeasurementSpace, profile: OutcomeProfile,
               cells: Mapping[Cell, Fraction]) -> SimplicialDistribution:
    """由稀疏单元格赋值构造分布，未给出的单元格为 0"""
    matrices = {
        e.id: [[ZERO] * profile[e.tgt] for _ in range(profile[e.src])]
        for e in space.edges
    }
    for (eid, a, b), value in cells.items():
        if eid not in matrices:
            raise ShapeError(f"cell on unknown edge {eid!r}")
        matrices[eid][a][b] = as_rational(value)
    return SimplicialDistribution(space, profile, matrices)


def uniform(space: MeasurementSpace, profile: OutcomeProfile) -> SimplicialDistribution:
    """均匀边缘的乘积分布，所有单元格为 1/(m_src·m_tgt)"""
    matrices = {}
    for e in space.edges:
        rows, cols = profile[e.src], profile[e.tgt]
        value = Fraction(1, rows * cols)
        matrices[e.id] = [[value] * cols for _ in range(rows)]
    return SimplicialDistribution(space, profile, matrices)


def mix(terms: Sequence[Tuple[RationalLike, SimplicialDistribution]]) -> SimplicialDistribution:
    """
    逐元素凸组合

    Args:
        terms: (权重, 分布) 列表，权重非负且和为 1，分布同场景

    Returns:
        组合后的分布
    """
    if not terms:
        raise InvalidArgumentError("mix needs at least one term")
    weights = [as_rational(w) for w, _ in terms]
    if any(w < 0 for w in weights):
        raise InvalidArgumentError(f"negative mixing weight in {weights}")
    if sum(weights, ZERO) != ONE:
        raise InvalidArgumentError(f"mixing weights sum to {format_rational(sum(weights, ZERO))}, expected 1")
    base = terms[0][1]
    for _, q in terms[1:]:
        if not q.same_scenario(base):
            raise InvalidArgumentError("mix terms live on different scenarios")

    matrices = {}
    for e in base.space.edges:
        rows, cols = base.profile[e.src], base.profile[e.tgt]
        matrices[e.id] = [
            [sum((w * q.cell(e.id, a, b) for w, (_, q) in zip(weights, terms)), ZERO) for b in range(cols)]
            for a in range(rows)
        ]
    return SimplicialDistribution(base.space, base.profile, matrices)


# ============= 预序与抽取 =============

def support_pattern(p: SimplicialDistribution) -> FrozenSet[Cell]:
    """严格为正的单元格集合"""
    return frozenset(cell for cell, value in p.cells() if value > 0)


def _require_same(q: SimplicialDistribution, p: SimplicialDistribution):
    if not q.same_scenario(p):
        raise InvalidArgumentError("distributions live on different scenarios")


def preceq(q: SimplicialDistribution, p: SimplicialDistribution) -> bool:
    """q ⪯ p：q 非零的单元格 p 也非零（只需检查生成单形即边）"""
    _require_same(q, p)
    return all(p.cell(*cell) != 0 for cell, value in q.cells() if value != 0)


def extract(q: SimplicialDistribution, p: SimplicialDistribution) -> Tuple[Fraction, Optional[SimplicialDistribution]]:
    """
    抽取引理：q ⪯ p 时求 α ∈ (0,1] 与 p̃ 使 p = αq + (1-α)p̃

    Returns:
        (α, p̃)，α = 1 时 p̃ 为 None
    """
    if not preceq(q, p):
        raise PreconditionError("extract requires q ⪯ p")
    alpha = min(p.cell(*cell) / value for cell, value in q.cells() if value != 0)
    if alpha == ONE:
        return alpha, None
    rest = 1 - alpha
    matrices = {}
    for e in p.space.edges:
        pm, qm = p.matrix(e.id), q.matrix(e.id)
        matrices[e.id] = [
            [(pm[a][b] - alpha * qm[a][b]) / rest for b in range(len(pm[a]))]
            for a in range(len(pm))
        ]
    return alpha, SimplicialDistribution(p.space, p.profile, matrices)


# ============= 子空间与收缩 =============

def restrict_distribution(p: SimplicialDistribution, piece: MeasurementSpace) -> SimplicialDistribution:
    """把分布限制到子空间 piece（按 id 复制矩阵）"""
    for e in piece.edges:
        if not p.space.has_edge(e.id) or p.space.edge(e.id) != e:
            raise InvalidArgumentError(f"edge {e.id!r} of the piece is not an edge of the distribution's space")
    for v in piece.vertices:
        if not p.space.has_vertex(v):
            raise InvalidArgumentError(f"vertex {v!r} of the piece is not in the distribution's space")
    return SimplicialDistribution(piece, p.profile.restricted(piece.vertices),
                                  {e.id: p.matrix(e.id) for e in piece.edges})


def _is_diagonal(m: Matrix) -> bool:
    return all(value == 0 for a, row in enumerate(m) for b, value in enumerate(row) if a != b)


def transport_collapse(p: SimplicialDistribution, collapse: CollapseResult) -> SimplicialDistribution:
    """
    沿收缩映射传递分布：返回商空间上的 p̄，满足 π*(p̄) = p

    被收缩的边必须携带对角矩阵（两端结果数相同、对角和为 1），
    同一合并类中的顶点边缘分布必须一致。
    """
    for eid in sorted(collapse.collapsed):
        e = p.space.edge(eid)
        if p.profile[e.src] != p.profile[e.tgt]:
            raise NotCollapsibleError(f"edge {eid!r} joins vertices with different outcome counts")
        if not _is_diagonal(p.matrix(eid)):
            raise NotCollapsibleError(f"edge {eid!r} carries off-diagonal mass")

    arity: Dict[VertexId, int] = {}
    seen_marginal: Dict[VertexId, Tuple[Fraction, ...]] = {}
    for old, new in collapse.vertex_map.items():
        m = p.profile[old]
        if arity.setdefault(new, m) != m:
            raise NotCollapsibleError(f"merged vertex {new!r} has members with different outcome counts")
        if p.space.is_isolated(old):
            continue
        vec = marginal(p, old)
        if seen_marginal.setdefault(new, vec) != vec:
            raise NotCollapsibleError(f"merged vertex {new!r} has members with different marginals")

    profile = OutcomeProfile.of(arity)
    matrices = {collapse.edge_map[eid]: p.matrix(eid) for eid in collapse.edge_map}
    logger.debug(f"Transported distribution through collapse of {sorted(collapse.collapsed)}")
    return SimplicialDistribution(collapse.space, profile, matrices)


def remove_parallel_duplicates(p: SimplicialDistribution) -> Tuple[SimplicialDistribution, Dict[EdgeId, EdgeId]]:
    """
    删除与先出现的平行边（同源同靶）携带相同矩阵的边

    Returns:
        (新分布, 被删除边 -> 保留边)
    """
    kept: List = []
    dropped: Dict[EdgeId, EdgeId] = {}
    for e in p.space.edges:
        twin = next(
            (k for k in kept if (k.src, k.tgt) == (e.src, e.tgt) and p.matrix(k.id) == p.matrix(e.id)),
            None,
        )
        if twin is None:
            kept.append(e)
        else:
            dropped[e.id] = twin.id
    if not dropped:
        return p, dropped
    space = MeasurementSpace(p.space.vertices, tuple(kept))
    logger.debug(f"Dropped duplicated parallel edges {dropped}")
    return SimplicialDistribution(space, p.profile, {e.id: p.matrix(e.id) for e in kept}), dropped
