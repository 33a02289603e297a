"""
コマンドラインインターフェース

リダクション連鎖 3-CNF-SAT → Family Intersection → Common Matching Weight →
Channel Assignment の各段を書き出す reduce、各段の判定を総当たりオラクルで
突き合わせる verify、CA インスタンスを厳密に解く solve、サイズを表にする
stats のサブコマンドを提供します。

終了コード: 0 検証成功、1 判定の不一致、2 入力エラー、3 必須の検査で予算超過
"""

# 標準ライブラリ
import argparse
import logging
import sys
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TypeVar

# サードパーティライブラリ
import pandas as pd

# ローカルモジュール
from channel import CaInstance, orientation_pair, solve_exact
from cnf import Assignment, CnfFormula, sat_oracle
from config import config
from exceptions import BudgetExceededError, FormulaError, InstanceFormatError, OracleTooLargeError, ReductionError, SolverBudgetError
from family import FamilyFunction, assignment_to_selectors, cnf_to_families, decode_family_value, family_intersect
from gadget import MergedGadget, cmw_to_ca, compose_yes_coloring, merged_weight, verify_composed
from matching import ReductionTrace, WeightedBipartiteGraph, cmw_oracle, family_to_graph, selector_to_matching
from sizes import ReductionSizes, size_identity_violations, sizes_from_artifacts, stats_frame
from utils import format_ca, format_cmw, format_family, load_ca, load_formula, save_text

logger = logging.getLogger(f"{config.LOGGER_NAME}.cli")

EXIT_VERIFIED = 0
EXIT_DISAGREEMENT = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3

T = TypeVar("T")


class StageStatus(StrEnum):
    """各段の検証状態"""

    VERIFIED = "verified"
    CONSTRUCTIVE = "constructive"  # YES 方向のみ（証拠の彩色を構成して確認）
    SKIPPED = "skipped"


@dataclass
class StageResult:
    """一つの段の検証結果"""

    name: str
    status: StageStatus
    verdict: bool | None = None
    reason: str = ""
    seconds: float = 0.0
    size: str = ""
    witness: str = ""


@dataclass(frozen=True)
class StageArtifacts:
    """
    リダクション連鎖の各段のインスタンス

    Attributes:
        formula: 元の論理式
        families: (f, g)
        graphs: (G1, G2)
        traces: f と g の圧縮の記録
        merged: 最終の CA インスタンス（ハンドルとガジェット定数付き）
    """

    formula: CnfFormula
    families: tuple[FamilyFunction, FamilyFunction]
    graphs: tuple[WeightedBipartiteGraph, WeightedBipartiteGraph]
    traces: tuple[ReductionTrace, ReductionTrace]
    merged: MergedGadget

    @property
    def sizes(self) -> ReductionSizes:
        return sizes_from_artifacts(self.formula, self.graphs, self.traces, self.merged)


@dataclass
class VerificationReport:
    """
    verify の結果

    段は検証済み、構成的に検証済み（YES 方向のみ）、理由付きで省略のいずれかで、
    黙って欠けることはありません。
    """

    stages: list[StageResult] = field(default_factory=list)
    disagreements: list[str] = field(default_factory=list)
    sizes: ReductionSizes | None = None

    @property
    def agreed(self) -> bool:
        return not self.disagreements

    def stage(self, name: str) -> StageResult:
        return next(result for result in self.stages if result.name == name)

    def frame(self) -> pd.DataFrame:
        rows = [
            {
                "段": result.name,
                "状態": result.status.value,
                "判定": "-" if result.verdict is None else ("YES" if result.verdict else "NO"),
                "時間(秒)": round(result.seconds, 3),
                "サイズ": result.size,
                "証拠": result.witness,
                "理由": result.reason,
            }
            for result in self.stages
        ]
        return pd.DataFrame(rows, columns=["段", "状態", "判定", "時間(秒)", "サイズ", "証拠", "理由"])


def build_artifacts(formula: CnfFormula, budget: int | None = None) -> StageArtifacts:
    """
    論理式から全ての段のインスタンスを作る

    Raises:
        ReductionTooLargeError: グラフの片側 k^b が予算を超える場合
    """
    f, g = cnf_to_families(formula)
    g1, t1 = family_to_graph(f, budget)
    g2, t2 = family_to_graph(g, budget)
    return StageArtifacts(formula, (f, g), (g1, g2), (t1, t2), cmw_to_ca(g1, g2))


def _timed(action: Callable[[], T]) -> tuple[T, float]:
    started = time.perf_counter()
    result = action()
    return result, time.perf_counter() - started


def _constructive_coloring_check(artifacts: StageArtifacts, assignment: Assignment) -> tuple[bool, str]:
    """充足割り当てから CA の YES 彩色を組み立てて確かめる"""
    formula = artifacts.formula
    (f, g), (t1, t2), (g1, g2) = artifacts.families, artifacts.traces, artifacts.graphs
    selector_f, selector_g = assignment_to_selectors(formula, assignment)
    matchings = (selector_to_matching(t1, f, selector_f), selector_to_matching(t2, g, selector_g))
    weights = (g1.matching_weight(matchings[0]), g2.matching_weight(matchings[1]))
    if weights[0] != weights[1]:
        return False, f"マッチングの重みが一致しません: {weights}"
    # ガジェットの置換は区間 i に入る a 頂点、すなわちマッチングの逆置換
    inverses = []
    for matching in matchings:
        inverse = [0] * len(matching)
        for left, right in enumerate(matching):
            inverse[right] = left
        inverses.append(inverse)
    coloring = compose_yes_coloring(artifacts.merged, inverses[0], inverses[1])
    if not verify_composed(artifacts.merged, coloring):
        return False, "組み立てた彩色が適正でないかスパンが s と異なります"
    if merged_weight(artifacts.merged, coloring) != weights[0]:
        return False, "彩色から読み取った重みがマッチングの重みと一致しません"
    return True, f"共通重み {weights[0]}"


def run_verification(
    formula: CnfFormula,
    budget: int | None = None,
    constructive: bool = True,
    solver_budget: int | None = None,
    time_limit: float | None = None,
) -> VerificationReport:
    """
    各段の判定を総当たりオラクルで求めて突き合わせる

    SAT オラクルは必須で、その他の段は予算を超えると理由付きで省略します。
    充足可能な場合は CA の YES 彩色を構成して適正性とスパンを確かめます。

    Args:
        formula: 論理式
        budget: 列挙の予算（None の場合は設定値）
        constructive: 充足可能な場合に YES 彩色を構成するか
        solver_budget: 分枝限定法の探索ノード上限
        time_limit: 分枝限定法の実時間上限（秒）

    Returns:
        各段の結果と不一致の一覧

    Raises:
        OracleTooLargeError: SAT オラクルが予算を超える場合
        ReductionTooLargeError: リダクションが予算を超える場合
    """
    report = VerificationReport()

    assignment, seconds = _timed(lambda: sat_oracle(formula, budget))
    expected = assignment is not None
    report.stages.append(
        StageResult(
            "SAT",
            StageStatus.VERIFIED,
            expected,
            seconds=seconds,
            size=f"n={formula.variable_count}, m={formula.clause_count}",
            witness="" if assignment is None else "".join("1" if value else "0" for value in assignment),
        )
    )

    artifacts = build_artifacts(formula, budget)
    report.sizes = artifacts.sizes
    for violation in size_identity_violations(report.sizes):
        report.disagreements.append(f"サイズ: {violation}")
    f, g = artifacts.families
    g1, g2 = artifacts.graphs

    def record(name: str, verdict: bool) -> None:
        if verdict != expected:
            message = f"{name}: 判定 {verdict} が SAT オラクルの {expected} と一致しません"
            logger.error(message)
            report.disagreements.append(message)

    # Family Intersection
    size = f"f {f.row_count}×{f.columns}, g {g.row_count}×{g.columns}"
    try:
        intersection, seconds = _timed(lambda: family_intersect(f, g, budget))
    except OracleTooLargeError as e:
        logger.warning(f"Family Intersection を省略: {e}")
        report.stages.append(StageResult("FamilyIntersection", StageStatus.SKIPPED, reason=str(e), size=size))
    else:
        verdict = intersection is not None
        witness = ""
        if intersection is not None:
            decoded = decode_family_value(formula, intersection.value)
            witness = f"共通値 {intersection.value}"
            if decoded is None or not formula.evaluate(decoded):
                report.disagreements.append(f"FamilyIntersection: 共通値 {intersection.value} が充足割り当てに戻りません")
        report.stages.append(StageResult("FamilyIntersection", StageStatus.VERIFIED, verdict, seconds=seconds, size=size, witness=witness))
        record("FamilyIntersection", verdict)

    # Common Matching Weight
    size = f"片側 {g1.side} と {g2.side}"
    try:
        common, seconds = _timed(lambda: cmw_oracle(g1, g2, budget))
    except OracleTooLargeError as e:
        logger.warning(f"Common Matching Weight を省略: {e}")
        report.stages.append(StageResult("CommonMatchingWeight", StageStatus.SKIPPED, reason=str(e), size=size))
    else:
        verdict = common is not None
        witness = "" if common is None else f"共通重み {common.weight}"
        report.stages.append(StageResult("CommonMatchingWeight", StageStatus.VERIFIED, verdict, seconds=seconds, size=size, witness=witness))
        record("CommonMatchingWeight", verdict)

    # Channel Assignment
    merged = artifacts.merged
    size = f"|V|={merged.instance.vertex_count}, s={merged.span_bound}"
    started = time.perf_counter()
    result = StageResult("ChannelAssignment", StageStatus.SKIPPED, size=size)
    reasons = []
    if assignment is not None and constructive:
        ok, detail = _constructive_coloring_check(artifacts, assignment)
        if ok:
            result.status, result.verdict, result.witness = StageStatus.CONSTRUCTIVE, True, detail
        else:
            report.disagreements.append(f"ChannelAssignment: {detail}")
            logger.error(f"構成的検証に失敗: {detail}")
    if merged.instance.vertex_count > config.CA_EXACT_MAX_VERTICES:
        reasons.append(f"頂点数 {merged.instance.vertex_count} が厳密解の上限 {config.CA_EXACT_MAX_VERTICES} を超えます")
    else:
        try:
            solved = solve_exact(merged.instance, cap=merged.span_bound, budget=solver_budget, time_limit=time_limit)
        except SolverBudgetError as e:
            logger.warning(f"Channel Assignment の厳密解を省略: {e}")
            reasons.append(str(e))
        else:
            result.status, result.verdict = StageStatus.VERIFIED, not solved.exceeds_cap
            if solved.coloring is not None:
                result.witness = f"スパン {solved.span}, 重み {merged_weight(merged, solved.coloring)}"
            record("ChannelAssignment", result.verdict)
    if result.status is StageStatus.SKIPPED and not reasons and assignment is not None:
        reasons.append("構成的検証が無効です")
    result.reason = "; ".join(reasons)
    result.seconds = time.perf_counter() - started
    report.stages.append(result)

    logger.info(f"検証完了: SAT={expected}, 不一致 {len(report.disagreements)} 件")
    return report


def cmd_reduce(args: argparse.Namespace) -> int:
    """指定した段のインスタンスを書き出す"""
    formula = load_formula(args.input, args.width)
    artifacts = build_artifacts(formula, args.budget)
    if args.to == "family":
        text = format_family(artifacts.families[0]) + "\n" + format_family(artifacts.families[1])
    elif args.to == "cmw":
        text = format_cmw(*artifacts.graphs)
    else:
        text = format_ca(artifacts.merged.instance)
    save_text(args.output, text)
    print(stats_frame(artifacts.sizes).to_string(index=False))
    return EXIT_VERIFIED


def cmd_verify(args: argparse.Namespace) -> int:
    """各段の判定を突き合わせ、不一致があれば 1 を返す"""
    formula = load_formula(args.input, args.width)
    report = run_verification(formula, args.budget, not args.no_constructive, args.solver_budget, args.time_limit)
    print(report.frame().to_string(index=False))
    for message in report.disagreements:
        print(f"不一致: {message}")
    return EXIT_VERIFIED if report.agreed else EXIT_DISAGREEMENT


def cmd_solve(args: argparse.Namespace) -> int:
    """CA インスタンスの最小スパンを求める"""
    instance: CaInstance = load_ca(args.input)
    solved = solve_exact(instance, cap=args.cap, budget=args.budget, time_limit=args.time_limit)
    if solved.exceeds_cap:
        print(f"cap={args.cap} 以下の彩色はありません（exceeds cap）")
        return EXIT_VERIFIED
    assert solved.coloring is not None and solved.ordering is not None
    normalized = solved.coloring.normalized(orientation_pair(instance))
    print(f"最小スパン: {solved.span}")
    print(f"順序: {' '.join(solved.ordering)}")
    print(pd.DataFrame({"頂点": list(instance.vertices), "色": [normalized[vertex] for vertex in instance.vertices]}).to_string(index=False))
    return EXIT_VERIFIED


def cmd_stats(args: argparse.Namespace) -> int:
    """サイズの表を表示し、恒等式の違反があれば 1 を返す"""
    formula = load_formula(args.input, args.width)
    sizes = build_artifacts(formula, args.budget).sizes
    print(stats_frame(sizes).to_string(index=False))
    violations = size_identity_violations(sizes)
    for violation in violations:
        print(f"違反: {violation}")
    return EXIT_DISAGREEMENT if violations else EXIT_VERIFIED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="channel-reduction", description="3-CNF-SAT から Channel Assignment へのリダクション連鎖")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_formula_arguments(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("input", help="DIMACS CNF ファイル")
        sub.add_argument("--width", type=int, default=None, help=f"節の幅（既定値 {config.DEFAULT_WIDTH}）")
        sub.add_argument("--budget", type=int, default=None, help=f"列挙の予算（既定値 {config.ENUMERATION_BUDGET}）")

    reduce_parser = subparsers.add_parser("reduce", help="指定した段のインスタンスを書き出す")
    add_formula_arguments(reduce_parser)
    reduce_parser.add_argument("--to", choices=("family", "cmw", "ca"), required=True)
    reduce_parser.add_argument("-o", "--output", required=True, help="出力ファイル")
    reduce_parser.set_defaults(handler=cmd_reduce)

    verify_parser = subparsers.add_parser("verify", help="各段の判定を突き合わせる")
    add_formula_arguments(verify_parser)
    verify_parser.add_argument("--no-constructive", action="store_true", help="YES 彩色の構成を省略する")
    verify_parser.add_argument("--solver-budget", type=int, default=None, help="分枝限定法の探索ノード上限")
    verify_parser.add_argument("--time-limit", type=float, default=None, help="分枝限定法の実時間上限（秒）")
    verify_parser.set_defaults(handler=cmd_verify)

    solve_parser = subparsers.add_parser("solve", help="CA インスタンスを厳密に解く")
    solve_parser.add_argument("input", help="ca 形式のファイル")
    solve_parser.add_argument("--cap", type=int, default=None, help="スパンの上限")
    solve_parser.add_argument("--budget", type=int, default=None, help="探索ノード上限")
    solve_parser.add_argument("--time-limit", type=float, default=None, help="実時間上限（秒）")
    solve_parser.set_defaults(handler=cmd_solve)

    stats_parser = subparsers.add_parser("stats", help="各段のサイズを表示する")
    add_formula_arguments(stats_parser)
    stats_parser.set_defaults(handler=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    コマンドラインのエントリポイント

    Returns:
        終了コード
    """
    args = build_parser().parse_args(argv)
    try:
        return int(args.handler(args))
    except (FormulaError, InstanceFormatError, OSError) as e:
        logger.error(f"入力エラー: {e}")
        print(f"入力エラー: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except BudgetExceededError as e:
        logger.error(f"予算超過: {e}")
        print(f"予算超過: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ReductionError as e:
        logger.error(f"リダクションエラー: {e}")
        print(f"エラー: {e}", file=sys.stderr)
        return EXIT_DISAGREEMENT


if __name__ == "__main__":
    sys.exit(main())
