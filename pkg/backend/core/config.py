# backend/core/config.py
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application
    LOG_LEVEL: str = "WARNING"

    # Series budget
    BUDGET_MAXTERMS: int = 4096
    BUDGET_REL_TOL: float = 1e-14

    # Verification
    RANDOM_STATE: int = 42

    # Phase sweeps
    N_JOBS: int = 1
    GRID_POINTS: int = 161
    PHASE_STEP: float = 0.01

    # Output
    DEFAULT_FORMAT: str = "text"

    class Config:
        env_file = ".env"
        env_prefix = "LATMIN_"


settings = Settings()
