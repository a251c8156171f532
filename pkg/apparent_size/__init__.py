from .cli import run
from .pipeline import run_pipeline

__all__ = ["run", "run_pipeline"]
