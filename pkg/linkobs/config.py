import os

from dotenv import find_dotenv, load_dotenv
from pydantic import BaseModel, ConfigDict, Field

from .errors import ConfigError

DEFAULT_Q_MAX = 8
DEFAULT_SKEIN_BOUND = 12
DEFAULT_GRID_DEPTH = 10


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    q_max: int = Field(default=DEFAULT_Q_MAX, ge=2, description="Magnus truncation degree cap for Milnor invariants")
    skein_bound: int = Field(default=DEFAULT_SKEIN_BOUND, ge=0, description="Crossing bound for the skein oracle")
    grid_depth: int = Field(
        default=DEFAULT_GRID_DEPTH, ge=1, le=20, description="log2 of the initial cell count of the signature grid"
    )

    @classmethod
    def from_env(cls) -> "Settings":
        """Defaults, with q_max taken from LINKOBS_Q_MAX (a .env file is honoured)."""
        load_dotenv(find_dotenv(usecwd=True))
        raw = os.environ.get("LINKOBS_Q_MAX")
        if raw is None:
            return cls()
        try:
            q_max = int(raw)
        except ValueError as e:
            raise ConfigError(f"LINKOBS_Q_MAX must be an integer, got {raw!r}") from e
        if q_max < 2:
            raise ConfigError(f"LINKOBS_Q_MAX must be at least 2, got {q_max}")
        return cls(q_max=q_max)
