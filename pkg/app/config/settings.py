import os

from dotenv import load_dotenv

load_dotenv()


class Settings:
    """Application settings."""

    # Directories
    LOGS_DIR = os.getenv("GOSSIP_LOGS_DIR", "logs")
    OUT_DIR = os.getenv("GOSSIP_OUT_DIR", "results")

    # Logging
    LOG_LEVEL = os.getenv("GOSSIP_LOG_LEVEL", "INFO")

    # Runs
    DEFAULT_SEED = int(os.getenv("GOSSIP_SEED", 0))
    DEFAULT_JOBS = int(os.getenv("GOSSIP_JOBS", 1))

    # Metrics (0 disables the HTTP endpoint)
    METRICS_PORT = int(os.getenv("GOSSIP_METRICS_PORT", 0))

    # Round classification
    GREEN_FRACTION = float(os.getenv("GOSSIP_GREEN_FRACTION", 0.125))

    # Offline multiport scheduler
    ALG1_BUDGET_CONST = int(os.getenv("GOSSIP_ALG1_BUDGET_CONST", 4))
    ALG1_MAX_RETRIES = int(os.getenv("GOSSIP_ALG1_MAX_RETRIES", 3))


settings = Settings()
