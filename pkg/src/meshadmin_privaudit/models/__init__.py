"""Case-study architectures and rulesets shipped with MeshAdminPrivAudit."""

from pathlib import Path

MODELS_DIR = Path(__file__).parent


def model_path(name: str) -> Path:
    """Path of a shipped document, e.g. model_path('measrdroid.arch')."""
    path = MODELS_DIR / name
    if not path.is_file():
        raise FileNotFoundError(f"No shipped model named {name}")
    return path


__all__ = ["MODELS_DIR", "model_path"]
