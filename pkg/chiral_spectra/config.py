import os


def _env_float(name: str, default: str) -> float:
    value = os.environ.get(name, default)
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {value!r}") from None


def _env_int(name: str, default: str) -> int:
    value = os.environ.get(name, default)
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {value!r}") from None


TOL = _env_float("CHIRAL_SPECTRA_TOL", "1e-8")
RANK_TOL = _env_float("CHIRAL_SPECTRA_RANK_TOL", "1e-10")
EIG_CAP = _env_int("CHIRAL_SPECTRA_EIG_CAP", "512")
GRAPH_DIR = os.path.abspath(os.environ.get("CHIRAL_SPECTRA_GRAPH_DIR", os.getcwd()))
GRAPH_LOADER = os.environ.get("CHIRAL_SPECTRA_GRAPH_LOADER", "AUTO").upper()
LOG_LEVEL = os.environ.get("CHIRAL_SPECTRA_LOG_LEVEL", "WARNING").upper()
