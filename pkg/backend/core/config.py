# config.py
import os
from pathlib import Path

from dotenv import load_dotenv

from core.errors import ConfigError


BASE_DIR = Path(__file__).resolve().parents[2]
ROOT_ENV = BASE_DIR / ".env"
if ROOT_ENV.exists():
    load_dotenv(ROOT_ENV)


class Config:
    # Logging
    LOG_LEVEL = "INFO"

    # Parallelism (joblib n_jobs)
    THREADS = 1

    # Numerical rank cut-off, relative to the largest singular value
    RANK_TOLERANCE = 1e-8

    # CHSA defaults
    CHSA_NEIGHBORS = 7
    CHSA_GAMMA = 1e-10
    CHSA_LAMBDA = 1e-5
    SOLVER_TOLERANCE = 1e-9
    NEGATIVITY_THRESHOLD = 1e-7

    # names of variables whose value could not be parsed
    UNPARSEABLE = []

    @classmethod
    def _read(cls, name, default, cast):
        raw = os.getenv(name)
        if raw is None:
            return default
        try:
            return cast(raw)
        except ValueError:
            cls.UNPARSEABLE.append(name)
            return default

    @classmethod
    def load(cls):
        """(Re)read every GRASSMANN_* variable from the environment"""
        cls.UNPARSEABLE = []
        cls.LOG_LEVEL = os.getenv("GRASSMANN_LOG_LEVEL", "INFO")
        cls.THREADS = cls._read("GRASSMANN_THREADS", 1, int)
        cls.RANK_TOLERANCE = cls._read("GRASSMANN_RANK_TOLERANCE", 1e-8, float)
        cls.CHSA_NEIGHBORS = cls._read("GRASSMANN_CHSA_NEIGHBORS", 7, int)
        cls.CHSA_GAMMA = cls._read("GRASSMANN_CHSA_GAMMA", 1e-10, float)
        cls.CHSA_LAMBDA = cls._read("GRASSMANN_CHSA_LAMBDA", 1e-5, float)
        cls.SOLVER_TOLERANCE = cls._read("GRASSMANN_SOLVER_TOLERANCE", 1e-9, float)
        cls.NEGATIVITY_THRESHOLD = cls._read("GRASSMANN_NEGATIVITY_THRESHOLD", 1e-7, float)

    @classmethod
    def validate(cls):
        """Validate that configured values parse and are in range"""
        if cls.UNPARSEABLE:
            raise ConfigError(f"Unparseable environment variables: {', '.join(cls.UNPARSEABLE)}")

        problems = []
        if cls.THREADS == 0:
            problems.append("GRASSMANN_THREADS")
        if not cls.RANK_TOLERANCE > 0:
            problems.append("GRASSMANN_RANK_TOLERANCE")
        if cls.CHSA_NEIGHBORS < 1:
            problems.append("GRASSMANN_CHSA_NEIGHBORS")
        if cls.CHSA_GAMMA < 0:
            problems.append("GRASSMANN_CHSA_GAMMA")
        if cls.CHSA_LAMBDA < 0:
            problems.append("GRASSMANN_CHSA_LAMBDA")
        if not cls.SOLVER_TOLERANCE > 0:
            problems.append("GRASSMANN_SOLVER_TOLERANCE")
        if cls.NEGATIVITY_THRESHOLD < 0:
            problems.append("GRASSMANN_NEGATIVITY_THRESHOLD")

        if problems:
            raise ConfigError(f"Out-of-range environment variables: {', '.join(problems)}")

        return True


Config.load()
