import logging
import os

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError, field_validator

load_dotenv()
logger = logging.getLogger(__name__)


def get_env(name: str) -> str | None:
    value = os.getenv(name)
    return value.strip() if value else None


class Settings(BaseModel):
    """Process-wide knobs that never change results; run parameters live in the run file."""

    threads: int = 1

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, value: int):
        if value < 1:
            raise ValueError("Thread count must be positive")
        return value


def load_settings() -> Settings:
    try:
        return Settings(threads=int(get_env("PHOTONWAVE_THREADS") or 1))
    except (ValidationError, ValueError):
        logger.warning("Ignoring invalid PHOTONWAVE_THREADS; using defaults.")
        return Settings()


settings = load_settings()
