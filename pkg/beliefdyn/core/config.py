import os

from dotenv import load_dotenv

load_dotenv()

class Config:
    THREADS = max(1, int(os.getenv("BELIEFDYN_THREADS", "1")))
    ADAPTER_DEADLINE = float(os.getenv("BELIEFDYN_ADAPTER_DEADLINE", "30"))
    LOG_LEVEL = os.getenv("BELIEFDYN_LOG_LEVEL", "INFO")
    DEFAULT_REPLICATES = int(os.getenv("BELIEFDYN_REPLICATES", "30"))
    FLOAT_FORMAT = "{:.6f}"
    DIGEST_LENGTH = 16
    OUTPUT_DIR = os.path.join("res", "runs")
    POPULATION_DIR = os.path.join("res", "populations")
    TRACE_FILE = "trace.jsonl"
    SUMMARY_FILE = "summary.csv"
    SUMMARY_JSON_FILE = "summary.json"
    TERMINAL_FILE = "terminal.json"
    REPORT_FILE = "report.json"
    TERMINAL_CSV = "terminal.csv"
    TRAJECTORIES_CSV = "trajectories.csv"
    TRANSITIONS_CSV = "transitions.csv"
    LEGS_DIR = "legs"
