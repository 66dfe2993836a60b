"""
simpol 命令实现
每个 cmd_* 返回 (pydantic 报告, 退出码)，由 main.py 负责参数解析与输出
退出码约定：0 表示查询的谓词成立，1 表示不成立
"""

import random
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from . import config
from .errors import InvalidArgumentError
from .fixtures import verify_all
from .logger import get_logger
from .modules.analysis import (
    classify,
    is_strongly_contextual,
    noncontextual_decomposition,
    vertex_test,
)
from .modules.bundle import VertexwiseInjection, analyze_bundle, count_bundle_vertices, pullback, pushforward
from .modules.cycleclass import count_k, enumerate_sequences, random_sequence
from .modules.dist import Cell, format_rational, support_pattern, validate
from .modules.glue import glue_vertex_check
from .modules.homotopy import EdgeLabeling, FaceKind, face, is_null_homotopic
from .modules.oracle import enumerate_polytope_vertices
from .modules.space import complement_edges, make_cycle
from .serialization import distribution_to_json, load_distribution, load_injection, load_scenario

logger = get_logger()


# ============= Pydantic Models =============

class SequenceEntry(BaseModel):
    """一个 k 阶圈分布的规范序列"""
    k: int = Field(description="阶数")
    rows: List[List[int]] = Field(description="k 行 n 列的结果序列")


class CycleVerticesReport(BaseModel):
    """cycle-vertices 结果"""
    n: int = Field(description="圈长")
    d: int = Field(description="结果数（丛场景下为最大结果数）")
    arities: Optional[List[int]] = Field(default=None, description="丛场景下各顶点的结果数")
    contextual_only: bool = Field(description="是否只统计上下文顶点")
    total: int = Field(description="顶点总数")
    per_k: Dict[int, int] = Field(description="各阶顶点数")
    vertices: Optional[List[SequenceEntry]] = Field(default=None, description="枚举出的规范序列")
    seed: Optional[int] = Field(default=None, description="随机抽样使用的种子")


class Decomposition(BaseModel):
    weight: str = Field(description="凸权重")
    section: Dict[str, int] = Field(description="确定性截面")


class CheckReport(BaseModel):
    """check 结果"""
    valid: bool = Field(description="是否为合法单纯分布")
    violations: List[str] = Field(default_factory=list, description="违例")
    vertex: Optional[bool] = Field(default=None, description="是否为顶点")
    kernel_direction: Optional[Dict[str, str]] = Field(default=None, description="非顶点时的扰动方向")
    epsilon: Optional[str] = Field(default=None, description="扰动步长")
    contextual: Optional[bool] = Field(default=None, description="是否上下文")
    strongly_contextual: Optional[bool] = Field(default=None, description="是否强上下文")
    decomposition: Optional[List[Decomposition]] = Field(default=None, description="非上下文时的确定性分解")
    classification: Optional[str] = Field(default=None, description="分类标签")
    predicate: bool = Field(description="所查询谓词的合取")


class FaceReport(BaseModel):
    """face 结果"""
    n: int
    d: int
    labels: List[int]
    null_homotopic: bool = Field(description="标号是否零伦")
    kind: str = Field(description="SINGLETON / NONEMPTY_DIM / EMPTY")
    dimension: int = Field(description="面的维数，空面为 -1")
    distribution: Optional[dict] = Field(default=None, description="唯一点或相对内点")
    certified_vertex: bool = Field(description="非零伦且单点时为上下文顶点")


class VsuppEntry(BaseModel):
    provenance: str
    weight: Optional[str] = None
    distribution: dict


class GlueReport(BaseModel):
    """glue-check 结果"""
    status: str = Field(description="VERTEX / NOT_VERTEX")
    piece_a: List[str]
    piece_b: List[str]
    vsupp_a: List[VsuppEntry]
    vsupp_b: List[VsuppEntry]
    varying_cell: Optional[str] = Field(default=None, description="取值不唯一的坐标")
    witness: Optional[dict] = Field(default=None, description="与 p 不同的粘合分布")


class OracleReport(BaseModel):
    """oracle-enumerate 结果"""
    count: int
    support_restricted: bool
    vertices: List[dict]


class PushforwardReport(BaseModel):
    """pushforward 结果"""
    source_tag: str
    target_tag: str
    tags_agree: bool
    pullback_roundtrip: bool
    distribution: dict


class ClaimModel(BaseModel):
    claim: str
    anchor: str
    passed: bool
    detail: str = ""


class ExampleModel(BaseModel):
    name: str
    passed: bool
    claims: List[ClaimModel]


class VerifyReport(BaseModel):
    """verify-paper 结果"""
    passed: bool
    examples: List[ExampleModel]


# ============= 辅助函数 =============

def cell_label(cell: Cell) -> str:
    eid, a, b = cell
    return f"{eid}[{a},{b}]"


def _rationals(values: Dict[Cell, Fraction]) -> Dict[str, str]:
    return {cell_label(c): format_rational(x) for c, x in sorted(values.items())}


def parse_labels(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidArgumentError(f"labels must be comma-separated integers, got {text!r}")


# ============= 命令 =============

def cmd_cycle_vertices(n: int, d: int, contextual_only: bool = False, count_only: bool = False,
                       sample: int = 0, seed: Optional[int] = None,
                       arities: Optional[Sequence[int]] = None) -> Tuple[CycleVerticesReport, int]:
    """
    统计（并可选枚举 / 随机抽样）C^(n) 上的顶点

    Args:
        n: 圈长
        d: 结果数
        contextual_only: 只统计 k >= 2
        count_only: 只输出计数
        sample: 随机抽取的顶点个数，0 表示不抽样
        seed: 抽样种子，默认 SIMPOL_SEED
        arities: 丛场景下各顶点的结果数，给出时覆盖 n 与 d
    """
    if arities:
        n, d = len(arities), max(arities)
    if n < 2 or d < 2:
        raise InvalidArgumentError(f"need --n >= 2 and --d >= 2, got n={n}, d={d}")
    low = 2 if contextual_only else 1
    if arities:
        per_k = {k: count_bundle_vertices(n, arities, k) for k in range(low, min(arities) + 1)}
    else:
        per_k = {k: count_k(n, d, k) for k in range(low, d + 1)}
    report = CycleVerticesReport(n=n, d=d, arities=list(arities) if arities else None,
                                 contextual_only=contextual_only, total=sum(per_k.values()), per_k=per_k)

    if sample:
        if arities:
            raise InvalidArgumentError("--sample is only supported for uniform outcome counts")
        seed = seed if seed is not None else config.default_seed()
        rng = random.Random(seed)
        report.seed = seed
        report.vertices = []
        for _ in range(sample):
            k = rng.randint(low, d)
            seq = random_sequence(n, d, k, rng)
            report.vertices.append(SequenceEntry(k=k, rows=[list(r) for r in seq.rows]))
    elif not count_only:
        report.vertices = [
            SequenceEntry(k=k, rows=[list(r) for r in seq.rows])
            for k in per_k
            for seq in enumerate_sequences(n, d, k, arities)
        ]
    logger.info(f"C^({n}) with d={d}: {report.total} vertices")
    return report, 0


def cmd_check(dist_path: Path, vertex: bool = False, contextual: bool = False, strong: bool = False,
              classify_all: bool = False) -> Tuple[CheckReport, int]:
    """校验分布并回答所查询的谓词"""
    p = load_distribution(dist_path)
    violations = validate(p)
    if violations:
        report = CheckReport(valid=False, predicate=False,
                             violations=[f"{v.kind} at {v.location}: {v.detail}" for v in violations])
        return report, 1

    report = CheckReport(valid=True, predicate=True)
    if vertex or classify_all:
        test = vertex_test(p)
        report.vertex = test.is_vertex
        if not test.is_vertex:
            report.kernel_direction = _rationals(test.direction)
            report.epsilon = format_rational(test.epsilon)
        if vertex:
            report.predicate = report.predicate and test.is_vertex
    if strong or classify_all:
        report.strongly_contextual = is_strongly_contextual(p)
        if strong:
            report.predicate = report.predicate and report.strongly_contextual
    if contextual or classify_all:
        weights = noncontextual_decomposition(p)
        report.contextual = weights is None
        if weights is not None:
            report.decomposition = [
                Decomposition(weight=format_rational(w), section=s.as_dict()) for w, s in weights
            ]
        if contextual:
            report.predicate = report.predicate and report.contextual
    if classify_all:
        if p.profile.is_uniform():
            report.classification = classify(p).tag.value
        else:
            report.classification = analyze_bundle(p).tag.value
    return report, 0 if report.predicate else 1


def cmd_face(n: int, d: int, labels: Sequence[int]) -> Tuple[FaceReport, int]:
    """C^(n) 上标号 φ 的面 Face(φ)"""
    space = make_cycle(n)
    phi = EdgeLabeling.on_cycle(space, d, labels)
    result = face(phi, space)
    null = is_null_homotopic(phi, space)
    report = FaceReport(
        n=n, d=d, labels=[x % d for x in labels],
        null_homotopic=null,
        kind=result.kind.value,
        dimension=result.dimension,
        distribution=distribution_to_json(result.point) if result.point is not None else None,
        certified_vertex=(not null) and result.kind == FaceKind.SINGLETON,
    )
    return report, 1 if result.kind == FaceKind.EMPTY else 0


def _vsupp_entries(elements, weights) -> List[VsuppEntry]:
    weights = weights or [None] * len(elements)
    return [
        VsuppEntry(provenance=x.label, weight=None if w is None else format_rational(w),
                   distribution=distribution_to_json(x.distribution))
        for x, w in zip(elements, weights)
    ]


def cmd_glue_check(dist_path: Path, piece_a: Sequence[str]) -> Tuple[GlueReport, int]:
    """以 piece_a 与其补为分解做粘合顶点判定"""
    p = load_distribution(dist_path)
    piece_b = list(complement_edges(p.space, piece_a))
    result = glue_vertex_check(p, piece_a, piece_b)
    report = GlueReport(
        status=result.status.value,
        piece_a=list(piece_a),
        piece_b=piece_b,
        vsupp_a=_vsupp_entries(result.vsupp_a.elements, result.weights_a),
        vsupp_b=_vsupp_entries(result.vsupp_b.elements, result.weights_b),
        varying_cell=cell_label(result.varying_cell) if result.varying_cell else None,
        witness=distribution_to_json(result.witness) if result.witness is not None else None,
    )
    return report, 0 if result.is_vertex else 1


def cmd_oracle(scenario_path: Path, support_of: Optional[Path] = None) -> Tuple[OracleReport, int]:
    """精确枚举场景（或某个分布支撑内）的全部顶点"""
    space, profile = load_scenario(scenario_path)
    restriction = None
    if support_of is not None:
        restriction = support_pattern(load_distribution(support_of))
    vertices = enumerate_polytope_vertices(space, profile, restriction)
    report = OracleReport(
        count=len(vertices),
        support_restricted=restriction is not None,
        vertices=[distribution_to_json(q) for q in vertices],
    )
    return report, 0


def cmd_pushforward(dist_path: Path, embed: Optional[int] = None,
                    maps_path: Optional[Path] = None) -> Tuple[PushforwardReport, int]:
    """沿逐顶点单射推前，并比较两侧的分类标签"""
    p = load_distribution(dist_path)
    if maps_path is not None:
        t = load_injection(maps_path)
    else:
        t = VertexwiseInjection.canonical_inclusion(p.profile, embed)
    q = pushforward(p, t)
    source = classify(p).tag
    target = classify(q).tag
    back = pullback(q, t)
    roundtrip = back is not None and back == p
    report = PushforwardReport(
        source_tag=source.value,
        target_tag=target.value,
        tags_agree=source == target,
        pullback_roundtrip=roundtrip,
        distribution=distribution_to_json(q),
    )
    return report, 0 if report.tags_agree and roundtrip else 1


def cmd_verify_paper() -> Tuple[VerifyReport, int]:
    """运行全部内置示例核对"""
    examples = [
        ExampleModel(
            name=r.name,
            passed=r.passed,
            claims=[ClaimModel(claim=c.claim, anchor=c.anchor, passed=c.passed, detail=c.detail) for c in r.checks],
        )
        for r in verify_all()
    ]
    report = VerifyReport(passed=all(x.passed for x in examples), examples=examples)
    return report, 0 if report.passed else 1
