"""
丛场景（每个顶点结果数不同）
逐顶点单射的推前 / 拉回、经典包含下的嵌入分析，以及混合结果数圈上的 k 阶顶点计数
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from ..errors import InvalidArgumentError
from ..logger import get_logger
from .analysis import Classification, classify
from .cycleclass import CycleSequence, enumerate_sequences, from_sequence
from .dist import OutcomeProfile, SimplicialDistribution, from_cells
from .space import MeasurementSpace, VertexId, make_cycle

logger = get_logger()


@dataclass(frozen=True)
class BundleScenario:
    """空间 X 及每个顶点的结果数 m_v"""
    space: MeasurementSpace
    profile: OutcomeProfile

    def __post_init__(self):
        for v in self.space.vertices:
            if not self.profile.covers(v):
                raise InvalidArgumentError(f"bundle scenario has no arity for vertex {v!r}")

    @classmethod
    def on_cycle(cls, arities: Sequence[int]) -> "BundleScenario":
        """C^(n) 上第 i 个顶点取 m_i 个结果"""
        space = make_cycle(len(arities))
        return cls(space, OutcomeProfile.of(dict(zip(space.vertices, arities))))


@dataclass(frozen=True)
class VertexwiseInjection:
    """
    逐顶点单射 T_v: Z_{m_v} → Z_{M_v}

    Attributes:
        maps: (顶点, 像元组)，像元组第 a 项为 T_v(a)
        target: 目标场景的结果数 M_v
    """
    maps: Tuple[Tuple[VertexId, Tuple[int, ...]], ...]
    target: OutcomeProfile

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(sorted((v, tuple(img)) for v, img in self.maps)))
        for v, image in self.maps:
            if len(set(image)) != len(image):
                raise InvalidArgumentError(f"map at {v!r} is not injective: {image}")
            if any(not 0 <= x < self.target[v] for x in image):
                raise InvalidArgumentError(f"map at {v!r} leaves Z_{self.target[v]}: {image}")

    @classmethod
    def of(cls, maps: Mapping[VertexId, Sequence[int]], target: Mapping[VertexId, int]) -> "VertexwiseInjection":
        return cls(tuple((v, tuple(img)) for v, img in maps.items()), OutcomeProfile.of(target))

    @classmethod
    def canonical_inclusion(cls, profile: OutcomeProfile, size: Optional[int] = None) -> "VertexwiseInjection":
        """Z_{m_v} ↪ Z_M, a ↦ a，M 默认取最大结果数"""
        size = size or profile.max_arity()
        if size < profile.max_arity():
            raise InvalidArgumentError(f"cannot embed arity {profile.max_arity()} into {size} outcomes")
        return cls(tuple((v, tuple(range(m))) for v, m in profile.items),
                   OutcomeProfile(tuple((v, size) for v, _ in profile.items)))

    def image(self, vertex: VertexId) -> Tuple[int, ...]:
        for v, img in self.maps:
            if v == vertex:
                return img
        raise InvalidArgumentError(f"no map for vertex {vertex!r}")

    def source_arity(self, vertex: VertexId) -> int:
        return len(self.image(vertex))


def _check_source(p: SimplicialDistribution, t: VertexwiseInjection):
    for v in p.space.vertices:
        if t.source_arity(v) != p.profile[v]:
            raise InvalidArgumentError(
                f"map at {v!r} has {t.source_arity(v)} inputs, vertex has {p.profile[v]} outcomes"
            )


def pushforward(p: SimplicialDistribution, t: VertexwiseInjection) -> SimplicialDistribution:
    """T_*(p)：单元格 (a, b) 的质量搬到 (T_src(a), T_tgt(b))"""
    _check_source(p, t)
    target = t.target.restricted(p.space.vertices)
    cells = {}
    for (eid, a, b), value in p.cells():
        if value == 0:
            continue
        e = p.space.edge(eid)
        cells[(eid, t.image(e.src)[a], t.image(e.tgt)[b])] = value
    return from_cells(p.space, target, cells)


def pullback(q: SimplicialDistribution, t: VertexwiseInjection) -> Optional[SimplicialDistribution]:
    """
    T^*(q)：q 的支撑落在 T 的像内时返回唯一满足 T_*(p) = q 的 p，否则返回 None
    """
    source = OutcomeProfile(tuple((v, len(img)) for v, img in t.maps)).restricted(q.space.vertices)
    inverse: Dict[VertexId, Dict[int, int]] = {
        v: {x: a for a, x in enumerate(t.image(v))} for v in q.space.vertices
    }
    cells = {}
    for (eid, x, y), value in q.cells():
        if value == 0:
            continue
        e = q.space.edge(eid)
        if x not in inverse[e.src] or y not in inverse[e.tgt]:
            logger.debug(f"Edge {eid!r} has mass at ({x},{y}) outside the image of the injection, no pullback")
            return None
        cells[(eid, inverse[e.src][x], inverse[e.tgt][y])] = value
    return from_cells(q.space, source, cells)


def embed_bundle(p: SimplicialDistribution) -> SimplicialDistribution:
    """经典包含 i: m_v ↪ M（M = max m_v）下的 i_*(p)"""
    return pushforward(p, VertexwiseInjection.canonical_inclusion(p.profile))


def analyze_bundle(p: SimplicialDistribution, section_cap: Optional[int] = None) -> Classification:
    """在 i_*(p) 上分类，标签原样作为 p 的标签"""
    result = classify(embed_bundle(p), section_cap)
    logger.debug(f"Bundle distribution classified as {result.tag.value} after embedding")
    return result


def count_bundle_vertices(n: int, arities: Sequence[int], k: Optional[int] = None,
                          contextual_only: bool = False) -> int:
    """
    C^(n) 上各顶点结果数为 m_i 时的 k 阶顶点数 Π C(m_i, k) · (k!)^(n-1) · (k-1)!

    k 为 None 时对全部 k 求和
    """
    if len(arities) != n:
        raise InvalidArgumentError(f"need {n} arities, got {len(arities)}")
    if n < 2 or any(m < 2 for m in arities):
        raise InvalidArgumentError(f"need n >= 2 and every arity >= 2, got n={n}, arities={list(arities)}")
    if k is not None:
        if not 1 <= k <= min(arities):
            return 0
        return math.prod(math.comb(m, k) for m in arities) * math.factorial(k) ** (n - 1) * math.factorial(k - 1)
    low = 2 if contextual_only else 1
    return sum(count_bundle_vertices(n, arities, j) for j in range(low, min(arities) + 1))


def enumerate_bundle_cycle_vertices(arities: Sequence[int], contextual_only: bool = False
                                    ) -> Iterator[Tuple[CycleSequence, SimplicialDistribution]]:
    """
    C^(n) 丛场景上的全部顶点：第 i 列从 Z_{m_i} 中取 k 个互异值

    Yields:
        (规范序列, 丛场景上的分布)
    """
    scenario = BundleScenario.on_cycle(arities)
    n, d = len(arities), max(arities)
    low = 2 if contextual_only else 1
    for k in range(low, min(arities) + 1):
        for seq in enumerate_sequences(n, d, k, arities):
            yield seq, from_sequence(seq, scenario.space, scenario.profile)
