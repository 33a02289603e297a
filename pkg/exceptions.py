"""
カスタム例外クラス

このモジュールはリダクション連鎖（3-CNF-SAT → Family Intersection →
Common Matching Weight → Channel Assignment）固有の例外クラスを定義します。
"""


class ReductionError(Exception):
    """
    リダクション処理時の基底例外

    本パッケージが送出する全てのエラーの基底クラスです。
    """

    pass


class FormulaError(ReductionError):
    """
    論理式エラー

    節の幅が揃っていない、変数番号が範囲外、節番号が範囲外などの場合に発生します。
    """

    pass


class DimacsError(FormulaError):
    """
    DIMACS構文エラー

    ヘッダの不正、幅の合わない節、範囲外の変数などを行番号付きで報告します。
    """

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"行 {line}: {message}")
        self.line = line


class InstanceFormatError(ReductionError):
    """
    インスタンスファイル構文エラー

    family / cmw / ca 形式のファイルの読み込みに失敗した場合に発生します。
    """

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"行 {line}: {message}")
        self.line = line


class DimensionError(ReductionError):
    """
    次元不一致エラー

    表の形状、セレクタの長さ、置換の長さが想定と一致しない場合に発生します。
    """

    pass


class PrescriptionError(ReductionError):
    """
    文字指定エラー

    語の置換に対する指定 α が ⊥ パターン（ŵ_i = 1̂ の位置のみ指定あり）に
    違反する場合、または文字がアルファベットの範囲外の場合に発生します。
    """

    pass


class ColoringError(ReductionError):
    """
    彩色エラー

    部分的な彩色、空の彩色、ガジェットの区間占有が壊れた彩色などで発生します。
    """

    pass


class GadgetError(ReductionError):
    """
    ガジェット構成エラー

    定数の恒等式が成り立たない、マッチング重みが一致しないまま合成を
    要求された、マージ時に意図しない識別子の衝突がある場合に発生します。
    """

    pass


class BudgetExceededError(ReductionError):
    """
    予算超過エラー

    列挙・探索の規模が指定された予算を超える場合に発生します。
    机上規模の検証には大きすぎるインスタンスであることを示します。
    """

    def __init__(self, message: str, required: int | None = None, budget: int | float | None = None) -> None:
        super().__init__(message)
        self.required = required
        self.budget = budget


class ReductionTooLargeError(BudgetExceededError):
    """
    リダクション規模超過

    語の圧縮で作るグラフの片側サイズ k^b が予算を超える場合に発生します。
    """

    pass


class OracleTooLargeError(BudgetExceededError):
    """
    オラクル規模超過

    総当たりオラクル（2^n, b^a, n!, s^|V|）の列挙数が予算を超える場合に発生します。
    """

    pass


class SolverBudgetError(BudgetExceededError):
    """
    ソルバー予算超過

    分枝限定法の探索ノード数または実時間が上限に達した場合に発生します。
    「上限スパン超過」とは区別されます。
    """

    pass


class RigidityError(ReductionError):
    """
    剛性不足エラー

    貪欲彩色の列挙が全YES彩色を尽くしている保証がない（スラックがある）ため、
    要求された結論を導けない場合に発生します。
    """

    pass
