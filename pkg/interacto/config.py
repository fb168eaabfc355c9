from typing import List

from pydantic import ConfigDict
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    HISTORY_CAPACITY: int = 20
    DOUBLE_CLICK_TIMEOUT_MS: int = 1000
    ALT_DOUBLE_CLICK_TIMEOUT_MS: int = 500
    KEYS_TYPED_TIMEOUT_MS: int = 1000
    TAP_TIMEOUT_MS: int = 1000
    CLICK_TOLERANCE: float = 1.0
    ROBOT_STEP_MS: int = 100
    THROTTLED_KINDS: str = "pointer_move,touch_move,scroll"
    LOG_LEVELS: str = ""
    BENCH_MIN_REPS: int = 3
    BENCH_MAX_OVERHEAD: float = 2.0

    model_config = ConfigDict(
        env_file=".env",
        env_prefix="INTERACTO_",
        extra="ignore",
    )

    def throttled_kinds(self) -> List[str]:
        return [k.strip() for k in self.THROTTLED_KINDS.split(",") if k.strip()]

    def log_levels(self) -> List[str]:
        return [lvl.strip() for lvl in self.LOG_LEVELS.split(",") if lvl.strip()]


settings = Settings()
