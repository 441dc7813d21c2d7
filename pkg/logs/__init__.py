from pathlib import Path

LOGS_DIR = Path(__file__).parent
