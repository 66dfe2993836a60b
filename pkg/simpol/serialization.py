"""
JSON 格式
场景：{"vertices":[{"id":"v1","outcomes":2},...],"edges":[{"id":"e1","from":"v1","to":"v2"},...]}
分布：{"scenario":<场景 JSON 或内置 id>,"matrices":{"e1":[["0","1/2"],["1/2","0"]],...}}
有理数写成 "num/den" 字符串，整数可直接写
"""

import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import InvalidArgumentError
from .logger import get_logger
from .modules.bundle import VertexwiseInjection
from .modules.dist import OutcomeProfile, SimplicialDistribution, format_rational
from .modules.space import Edge, MeasurementSpace, make_cycle, make_path

logger = get_logger()


# ============= Pydantic Models =============

class VertexModel(BaseModel):
    """场景中的顶点"""
    id: str = Field(description="顶点 id")
    outcomes: int = Field(ge=2, description="结果数 m_v")


class EdgeModel(BaseModel):
    """场景中的边（from 为源，to 为靶）"""
    model_config = ConfigDict(populate_by_name=True)

    id: str = Field(description="边 id")
    source: str = Field(alias="from", description="源顶点")
    target: str = Field(alias="to", description="靶顶点")


class ScenarioModel(BaseModel):
    """测量场景"""
    vertices: List[VertexModel] = Field(description="顶点及其结果数")
    edges: List[EdgeModel] = Field(default_factory=list, description="有向边")
    comment: Optional[str] = Field(default=None, description="说明")


class DistributionModel(BaseModel):
    """单纯分布"""
    scenario: Union[ScenarioModel, str] = Field(description="场景 JSON 或内置 id（cycle:N:D / path:N:D）")
    matrices: Dict[str, List[List[Union[int, str]]]] = Field(description="每条边的矩阵，行为源结果，列为靶结果")
    comment: Optional[str] = Field(default=None, description="说明")

    @field_validator("matrices")
    @classmethod
    def _no_floats(cls, value):
        for eid, rows in value.items():
            for row in rows:
                for x in row:
                    if isinstance(x, str) and ("." in x or "e" in x.lower()):
                        raise ValueError(f"edge {eid}: {x!r} is not an exact rational")
        return value


# ============= 场景 =============

def builtin_scenario(ident: str) -> Tuple[MeasurementSpace, OutcomeProfile]:
    """内置场景 id：cycle:N:D 为 C^(N)，path:N:D 为 N 条边的路径，结果数均为 D"""
    parts = ident.split(":")
    if len(parts) != 3 or parts[0] not in ("cycle", "path"):
        raise InvalidArgumentError(f"unknown scenario id {ident!r}, expected cycle:N:D or path:N:D")
    try:
        n, d = int(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidArgumentError(f"scenario id {ident!r} needs integer N and D")
    space = make_cycle(n) if parts[0] == "cycle" else make_path(n)
    return space, OutcomeProfile.uniform(space, d)


def scenario_from_model(model: ScenarioModel) -> Tuple[MeasurementSpace, OutcomeProfile]:
    space = MeasurementSpace(
        tuple(v.id for v in model.vertices),
        tuple(Edge(e.id, e.source, e.target) for e in model.edges),
    )
    return space, OutcomeProfile.of({v.id: v.outcomes for v in model.vertices})


def scenario_to_model(space: MeasurementSpace, profile: OutcomeProfile, comment: Optional[str] = None) -> ScenarioModel:
    return ScenarioModel(
        vertices=[VertexModel(id=v, outcomes=profile[v]) for v in space.vertices],
        edges=[EdgeModel(id=e.id, source=e.src, target=e.tgt) for e in space.edges],
        comment=comment,
    )


def load_scenario(path: Union[str, Path]) -> Tuple[MeasurementSpace, OutcomeProfile]:
    """读取场景文件；文件也可以是一个带 scenario 字段的分布"""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if "scenario" in data:
        data = data["scenario"]
        if isinstance(data, str):
            return builtin_scenario(data)
    return scenario_from_model(ScenarioModel.model_validate(data))


# ============= 分布 =============

def distribution_from_model(model: DistributionModel) -> SimplicialDistribution:
    if isinstance(model.scenario, str):
        space, profile = builtin_scenario(model.scenario)
    else:
        space, profile = scenario_from_model(model.scenario)
    return SimplicialDistribution(space, profile, model.matrices)


def distribution_to_model(p: SimplicialDistribution, comment: Optional[str] = None) -> DistributionModel:
    return DistributionModel(
        scenario=scenario_to_model(p.space, p.profile),
        matrices={
            e.id: [[format_rational(x) for x in row] for row in p.matrix(e.id)]
            for e in p.space.edges
        },
        comment=comment,
    )


def distribution_to_json(p: SimplicialDistribution, comment: Optional[str] = None) -> dict:
    return distribution_to_model(p, comment).model_dump(by_alias=True, exclude_none=True)


def distribution_from_json(data: Union[dict, str]) -> SimplicialDistribution:
    if isinstance(data, str):
        return distribution_from_model(DistributionModel.model_validate_json(data))
    return distribution_from_model(DistributionModel.model_validate(data))


def load_distribution(path: Union[str, Path]) -> SimplicialDistribution:
    text = Path(path).read_text(encoding="utf-8")
    logger.debug(f"Loading distribution from {path}")
    return distribution_from_json(text)


def dump_distribution(p: SimplicialDistribution, path: Union[str, Path], comment: Optional[str] = None):
    Path(path).write_text(
        json.dumps(distribution_to_json(p, comment), ensure_ascii=False, indent=2),
        encoding="utf-8",
    )
    logger.info(f"Distribution written to {path}")


# ============= 逐顶点单射 =============

class InjectionModel(BaseModel):
    """逐顶点单射 T_v: Z_{m_v} → Z_{M_v}"""
    target: Dict[str, int] = Field(description="目标结果数 M_v")
    maps: Dict[str, List[int]] = Field(description="maps[v][a] = T_v(a)")
    comment: Optional[str] = Field(default=None, description="说明")


def load_injection(path: Union[str, Path]) -> VertexwiseInjection:
    model = InjectionModel.model_validate_json(Path(path).read_text(encoding="utf-8"))
    return VertexwiseInjection.of(model.maps, model.target)
