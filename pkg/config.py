"""
アプリケーション設定

このモジュールはリダクション・オラクル・ソルバー全体で使用する定数を定義します。
環境変数から設定を読み込むことも可能です。
"""

import os
from dataclasses import dataclass


@dataclass
class Config:
    """アプリケーション設定クラス"""

    # 列挙予算設定
    ENUMERATION_BUDGET: int = 1 << 22  # 2^n, b^a, n!, k^b, s^|V| の上限
    SOLVER_NODE_BUDGET: int = 5_000_000  # 分枝限定法の探索ノード上限
    SOLVER_TIME_LIMIT: float = 60.0  # 分枝限定法の実時間上限（秒）
    CA_EXACT_MAX_VERTICES: int = 17  # verify で厳密解を試みる頂点数の上限

    # 入力設定
    DEFAULT_WIDTH: int = 3  # 節の幅（DIMACS入力の既定値）

    # ロギング設定
    LOGGER_NAME: str = "channel_reduction"
    LOG_DIR: str = "logs"
    LOG_FILE: str = "channel_reduction.log"
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    LOG_MAX_BYTES: int = 1048576  # 1MB
    LOG_BACKUP_COUNT: int = 5

    @classmethod
    def from_env(cls) -> "Config":
        """
        環境変数から設定を読み込む

        Returns:
            環境変数から読み込んだ設定を持つConfigインスタンス
        """
        return cls(
            ENUMERATION_BUDGET=int(os.getenv("ENUMERATION_BUDGET", str(cls.ENUMERATION_BUDGET))),
            SOLVER_NODE_BUDGET=int(os.getenv("SOLVER_NODE_BUDGET", str(cls.SOLVER_NODE_BUDGET))),
            SOLVER_TIME_LIMIT=float(os.getenv("SOLVER_TIME_LIMIT", str(cls.SOLVER_TIME_LIMIT))),
            CA_EXACT_MAX_VERTICES=int(os.getenv("CA_EXACT_MAX_VERTICES", str(cls.CA_EXACT_MAX_VERTICES))),
            DEFAULT_WIDTH=int(os.getenv("DEFAULT_WIDTH", str(cls.DEFAULT_WIDTH))),
            LOGGER_NAME=os.getenv("LOGGER_NAME", cls.LOGGER_NAME),
            LOG_DIR=os.getenv("LOG_DIR", cls.LOG_DIR),
            LOG_FILE=os.getenv("LOG_FILE", cls.LOG_FILE),
            LOG_LEVEL=os.getenv("LOG_LEVEL", cls.LOG_LEVEL),
            LOG_FORMAT=os.getenv("LOG_FORMAT", cls.LOG_FORMAT),
            LOG_MAX_BYTES=int(os.getenv("LOG_MAX_BYTES", str(cls.LOG_MAX_BYTES))),
            LOG_BACKUP_COUNT=int(os.getenv("LOG_BACKUP_COUNT", str(cls.LOG_BACKUP_COUNT))),
        )

    def resolve_budget(self, budget: int | None) -> int:
        """予算引数が None の場合は既定の列挙予算を返す"""
        return self.ENUMERATION_BUDGET if budget is None else budget


# グローバル設定インスタンス
config = Config.from_env()
