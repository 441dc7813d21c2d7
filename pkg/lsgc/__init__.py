from pathlib import Path

# .env file should be placed here
DOTENV_FILE: Path = Path(__file__).parent.parent / ".env"

__version__ = "0.1.0"
