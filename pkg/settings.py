# settings.py
from dotenv import load_dotenv
from pydantic import BaseModel
import os

# Load .env into environment variables
load_dotenv()

_HERE = os.path.dirname(os.path.abspath(__file__))


class Settings(BaseModel):
    # App
    APP_NAME: str = os.getenv("APP_NAME", "derived-reduction-check")
    APP_VERSION: str = os.getenv("APP_VERSION", "0.3.0")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # Suite defaults (CLI flags override these)
    DEFAULT_SAMPLES: int = int(os.getenv("DEFAULT_SAMPLES", "100"))
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "0"))
    DEFAULT_TOL: float = float(os.getenv("DEFAULT_TOL", "1e-8"))

    # Random elements for the exact identity sweeps
    EXACT_SAMPLES: int = int(os.getenv("EXACT_SAMPLES", "200"))
    OFF_ZERO_SET_POINTS: int = int(os.getenv("OFF_ZERO_SET_POINTS", "20"))

    # Numeric exponential
    EXP_TERM_TOL: float = float(os.getenv("EXP_TERM_TOL", "1e-16"))
    EXP_RESIDUAL_TOL: float = float(os.getenv("EXP_RESIDUAL_TOL", "1e-13"))
    ORTHO_TOL: float = float(os.getenv("ORTHO_TOL", "1e-10"))

    # Built-in example corpus
    CORPUS_DIR: str = os.getenv("CORPUS_DIR", os.path.join(_HERE, "corpus"))

    # Bump when the JSON report layout changes
    REPORT_SCHEMA_VERSION: str = os.getenv("REPORT_SCHEMA_VERSION", "1")


# Single shared settings object
settings = Settings()
