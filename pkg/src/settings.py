import os
import logging
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()

LOG_FORMAT = '%(asctime)s - PermArray - %(levelname)s - %(message)s'
PACKAGE_DATA = Path(__file__).resolve().parent / "data"


class Settings(BaseModel):
    """
    Runtime knobs read from the environment (and a local .env file).
    """
    model_config = ConfigDict(frozen=True)

    workers: int = Field(1, ge=1, description="Worker processes for pairwise scans and search.")
    verify_cap: int = Field(5000, ge=2, description="Largest PA certified by a full pairwise scan.")
    closure_cap: int = Field(500_000, ge=1, description="Default element cap for generator closure.")
    table_max_n: int = Field(32, ge=2, description="Upper n of the default bound-propagation domain.")
    checkpoint_every: int = Field(10_000, ge=1, description="Candidates between search snapshots.")
    log_level: str = "INFO"
    data_dir: Path = PACKAGE_DATA


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings(
        workers=int(os.getenv("PA_WORKERS", "1")),
        verify_cap=int(os.getenv("PA_VERIFY_CAP", "5000")),
        closure_cap=int(os.getenv("PA_CLOSURE_CAP", "500000")),
        table_max_n=int(os.getenv("PA_TABLE_MAX_N", "32")),
        checkpoint_every=int(os.getenv("PA_CHECKPOINT_EVERY", "10000")),
        log_level=os.getenv("PA_LOG_LEVEL", "INFO").upper(),
        data_dir=Path(os.getenv("PA_DATA_DIR", str(PACKAGE_DATA))),
    )


def configure_logging(level: str = "") -> None:
    """Entry-point logging setup; library modules only create loggers."""
    logging.basicConfig(level=level or get_settings().log_level, format=LOG_FORMAT)
