"""
内置示例分布与汇总核对
fixtures/*.json 中的分布，以及 verify-paper 子命令使用的全部核对项
"""

from pathlib import Path
from typing import List

from .errors import InvalidArgumentError
from .logger import get_logger
from .modules.analysis import ClassificationTag, classify
from .modules.cycleclass import CycleSequence, count_k, count_vertices, from_sequence, recognize
from .modules.dist import SimplicialDistribution
from .modules.glue import ExampleReport, verify_233_example, verify_pr_box_example, verify_trichotomic_example
from .serialization import load_distribution

logger = get_logger()

PROJECT_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = PROJECT_ROOT / "fixtures"

FIXTURES = ("pr_box", "trichotomic", "bell_233", "cycle2_z4_order3", "uniform_c3_d2")


def fixture_path(name: str) -> Path:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise InvalidArgumentError(f"unknown fixture {name!r}, available: {', '.join(FIXTURES)}")
    return path


def load_fixture(name: str) -> SimplicialDistribution:
    return load_distribution(fixture_path(name))


def verify_cycle_example(p: SimplicialDistribution = None) -> ExampleReport:
    """C^(2) 上 4 个结果的 3 阶圈分布，序列 (0,1; 3,2; 2,3)"""
    p = p or load_fixture("cycle2_z4_order3")
    report = ExampleReport("cycle2_z4_order3")
    anchor = "3-order cycle distribution on C^(2) over Z_4, sequence (0,1; 3,2; 2,3)"
    seq = CycleSequence(2, 4, ((0, 1), (3, 2), (2, 3)))
    report.check("sequence generates the fixture matrices", anchor, from_sequence(seq) == p)
    recognized = recognize(p)
    report.check("recognized as 3-order", anchor, recognized is not None and recognized[0] == 3,
                 str(recognized[1].rows if recognized else None))
    tag = classify(p).tag
    report.check("classified as contextual vertex", anchor, tag == ClassificationTag.CONTEXTUAL_VERTEX, tag.value)
    return report


def verify_counting_formula() -> ExampleReport:
    report = ExampleReport("vertex_count")
    anchor = "number of vertices of the cycle scenario polytope"
    expected = {(4, 2): 24, (3, 2): 12, (2, 2): 6, (2, 3): 39}
    for (n, d), value in expected.items():
        got = count_vertices(n, d)
        report.check(f"V({n},{d}) = {value}", anchor, got == value, str(got))
    terms = [count_k(2, 4, k) for k in (2, 3, 4)]
    report.check("n=2, d=4 contextual terms are 72, 192, 144", anchor, terms == [72, 192, 144], str(terms))
    return report


def verify_all() -> List[ExampleReport]:
    """依次运行全部核对，返回各示例的报告"""
    reports = []
    for runner in (verify_cycle_example, verify_pr_box_example, verify_trichotomic_example,
                   verify_233_example, verify_counting_formula):
        report = runner()
        status = "PASS" if report.passed else "FAIL"
        logger.info(f"{report.name}: {status} ({sum(c.passed for c in report.checks)}/{len(report.checks)} claims)")
        reports.append(report)
    return reports
