#!/usr/bin/env python3
"""
simpol 命令行
一维测量场景上单纯分布的构造、分类与顶点判定，子命令：
1. cycle-vertices：C^(n) 上顶点计数 / 枚举 / 随机抽样
2. check：校验分布，判定顶点 / 上下文 / 强上下文并给出分类
3. face：圈上边标号的面 Face(φ)
4. glue-check：沿公共顶点粘合的顶点判定
5. oracle-enumerate：小场景精确顶点枚举
6. pushforward：沿逐顶点单射推前
7. verify-paper：内置示例核对
"""
import argparse
import json
import sys
from pathlib import Path

from pydantic import BaseModel, ValidationError

from simpol.errors import SimpolError
from simpol.logger import get_logger, set_level
from simpol.tools import (
    cmd_check,
    cmd_cycle_vertices,
    cmd_face,
    cmd_glue_check,
    cmd_oracle,
    cmd_pushforward,
    cmd_verify_paper,
    parse_labels,
)

# 使用统一的日志器
logger = get_logger()


def emit(report: BaseModel, json_target, text: str):
    """--json 时输出 JSON（'-' 为 stdout，否则写文件），否则输出文本摘要"""
    if json_target is None:
        print(text)
        return
    payload = report.model_dump_json(indent=2, exclude_none=True)
    if json_target == "-":
        print(payload)
    else:
        Path(json_target).write_text(payload + "\n", encoding="utf-8")
        logger.info(f"Report written to {json_target}")


def cycle_vertices_run(args) -> int:
    """顶点计数模式"""
    arities = parse_labels(args.arities) if args.arities else None
    report, code = cmd_cycle_vertices(args.n, args.d, args.contextual_only, args.count_only,
                                      args.sample, args.seed, arities)
    lines = [f"total: {report.total}"]
    lines += [f"k={k}: {count}" for k, count in report.per_k.items()]
    for entry in report.vertices or []:
        lines.append(f"k={entry.k} " + "; ".join(",".join(map(str, row)) for row in entry.rows))
    emit(report, args.json, "\n".join(lines))
    return code


def check_run(args) -> int:
    report, code = cmd_check(Path(args.dist), args.vertex, args.contextual, args.strong, args.classify)
    lines = [f"valid: {report.valid}"]
    lines += [f"  {v}" for v in report.violations]
    if report.vertex is not None:
        lines.append(f"vertex: {report.vertex}")
        if report.kernel_direction:
            lines.append(f"  direction: {report.kernel_direction}  epsilon: {report.epsilon}")
    if report.strongly_contextual is not None:
        lines.append(f"strongly contextual: {report.strongly_contextual}")
    if report.contextual is not None:
        lines.append(f"contextual: {report.contextual}")
        for term in report.decomposition or []:
            lines.append(f"  {term.weight} * {term.section}")
    if report.classification:
        lines.append(report.classification)
    emit(report, args.json, "\n".join(lines))
    return code


def face_run(args) -> int:
    report, code = cmd_face(args.n, args.d, parse_labels(args.labels))
    lines = [f"labels: {report.labels} (null-homotopic: {report.null_homotopic})", f"{report.kind} dim={report.dimension}"]
    if report.distribution is not None:
        lines += [f"  {eid}: {m}" for eid, m in report.distribution["matrices"].items()]
    if report.certified_vertex:
        lines.append("certified contextual vertex")
    emit(report, args.json, "\n".join(lines))
    return code


def glue_check_run(args) -> int:
    report, code = cmd_glue_check(Path(args.dist), [x for x in args.piece_a.split(",") if x])
    lines = [report.status, f"A = {report.piece_a}, B = {report.piece_b}"]
    for name, entries in (("A", report.vsupp_a), ("B", report.vsupp_b)):
        lines.append(f"vsupp({name}): " + ", ".join(
            f"{e.provenance}" + (f"={e.weight}" if e.weight is not None else "") for e in entries))
    if report.varying_cell:
        lines.append(f"varying coordinate: {report.varying_cell}")
    emit(report, args.json, "\n".join(lines))
    return code


def oracle_run(args) -> int:
    """精确枚举模式"""
    logger.info("=" * 60)
    logger.info(f"Oracle enumeration - {args.scenario}")
    logger.info("=" * 60)
    report, code = cmd_oracle(Path(args.scenario), Path(args.support_of) if args.support_of else None)
    lines = [f"vertices: {report.count}"]
    for q in report.vertices:
        lines.append("  " + "  ".join(f"{eid}={m}" for eid, m in q["matrices"].items()))
    emit(report, args.json, "\n".join(lines))
    return code


def pushforward_run(args) -> int:
    if args.embed is None and args.maps is None:
        raise SimpolError("pushforward needs --embed M or --maps FILE")
    report, code = cmd_pushforward(Path(args.dist), args.embed, Path(args.maps) if args.maps else None)
    lines = [
        f"source: {report.source_tag}",
        f"target: {report.target_tag}",
        f"tags agree: {report.tags_agree}, pullback round trip: {report.pullback_roundtrip}",
    ]
    emit(report, args.json, "\n".join(lines))
    return code


def verify_paper_run(args) -> int:
    """内置示例核对模式"""
    logger.info("=" * 60)
    logger.info("Verifying bundled examples")
    logger.info("=" * 60)
    report, code = cmd_verify_paper()
    lines = []
    for example in report.examples:
        lines.append(f"[{'PASS' if example.passed else 'FAIL'}] {example.name}")
        for claim in example.claims:
            mark = "ok" if claim.passed else "FAILED"
            lines.append(f"    {mark:6} {claim.claim}" + (f"  ({claim.detail})" if not claim.passed and claim.detail else ""))
    emit(report, args.json, "\n".join(lines))
    if not report.passed:
        logger.error("Some claims failed")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="simpol - 一维场景上单纯分布的顶点与上下文性工具",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
运行示例:
  %(prog)s cycle-vertices --n 4 --d 2 --count-only             # 24 个顶点：16 个确定性 + 8 个 2 阶
  %(prog)s cycle-vertices --n 2 --d 4 --contextual-only --count-only
  %(prog)s cycle-vertices --n 3 --d 5 --sample 5 --seed 7      # 随机抽取 5 个顶点
  %(prog)s cycle-vertices --arities 2,3 --contextual-only      # 丛场景，各顶点结果数不同
  %(prog)s check --dist fixtures/pr_box.json --classify        # CONTEXTUAL_VERTEX
  %(prog)s check --dist fixtures/uniform_c3_d2.json --vertex   # 退出码 1，并给出扰动方向
  %(prog)s face --n 4 --d 2 --labels 0,0,0,1                   # SINGLETON
  %(prog)s glue-check --dist fixtures/pr_box.json --piece-a e1
  %(prog)s oracle-enumerate --scenario fixtures/uniform_c3_d2.json
  %(prog)s pushforward --dist fixtures/pr_box.json --embed 3
  %(prog)s verify-paper --json                                 # 结构化核对报告

退出码:
  0 查询的谓词成立 / 1 不成立 / 2 参数或输入错误
        """
    )
    parser.add_argument('--verbose', action='store_true', help='输出调试日志')
    parser.add_argument('--quiet', action='store_true', help='只输出警告和错误')
    sub = parser.add_subparsers(dest='command', required=True)

    def with_json(p):
        p.add_argument('--json', nargs='?', const='-', default=None, metavar='OUT',
                       help='输出 JSON 报告（不带参数时写到 stdout）')
        return p

    p = with_json(sub.add_parser('cycle-vertices', help='C^(n) 上的顶点计数与枚举'))
    p.add_argument('--n', type=int, default=0, help='圈长 n >= 2')
    p.add_argument('--d', type=int, default=0, help='结果数 d >= 2')
    p.add_argument('--arities', type=str, help='丛场景各顶点结果数，如 2,3（覆盖 --n/--d）')
    p.add_argument('--contextual-only', action='store_true', help='只统计 k >= 2 的上下文顶点')
    p.add_argument('--count-only', action='store_true', help='只输出计数')
    p.add_argument('--sample', type=int, default=0, metavar='COUNT', help='随机抽取的顶点个数')
    p.add_argument('--seed', type=int, help='随机种子（默认 SIMPOL_SEED）')
    p.set_defaults(run=cycle_vertices_run)

    p = with_json(sub.add_parser('check', help='校验与分类一个分布'))
    p.add_argument('--dist', required=True, help='分布 JSON 文件')
    p.add_argument('--vertex', action='store_true', help='是否为顶点')
    p.add_argument('--contextual', action='store_true', help='是否上下文')
    p.add_argument('--strong', action='store_true', help='是否强上下文')
    p.add_argument('--classify', action='store_true', help='给出分类标签')
    p.set_defaults(run=check_run)

    p = with_json(sub.add_parser('face', help='圈上边标号的面'))
    p.add_argument('--n', type=int, required=True, help='圈长')
    p.add_argument('--d', type=int, required=True, help='Z_d')
    p.add_argument('--labels', required=True, help='逗号分隔的 n 个标号')
    p.set_defaults(run=face_run)

    p = with_json(sub.add_parser('glue-check', help='粘合顶点判定（B 为 A 的补）'))
    p.add_argument('--dist', required=True, help='分布 JSON 文件')
    p.add_argument('--piece-a', required=True, help='A 的边，逗号分隔')
    p.set_defaults(run=glue_check_run)

    p = with_json(sub.add_parser('oracle-enumerate', help='小场景精确顶点枚举'))
    p.add_argument('--scenario', required=True, help='场景 JSON（或带 scenario 字段的分布）')
    p.add_argument('--support-of', help='只枚举支撑在该分布支撑内的顶点')
    p.set_defaults(run=oracle_run)

    p = with_json(sub.add_parser('pushforward', help='沿逐顶点单射推前'))
    p.add_argument('--dist', required=True, help='分布 JSON 文件')
    p.add_argument('--embed', type=int, help='经典包含到 M 个结果')
    p.add_argument('--maps', help='单射 JSON 文件')
    p.set_defaults(run=pushforward_run)

    p = with_json(sub.add_parser('verify-paper', help='核对全部内置示例'))
    p.set_defaults(run=verify_paper_run)
    return parser


def main(argv=None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        set_level("DEBUG")
    elif args.quiet:
        set_level("WARNING")

    try:
        return args.run(args)
    except KeyboardInterrupt:
        logger.info("Program stopped")
        return 2
    except (SimpolError, ValidationError, json.JSONDecodeError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
