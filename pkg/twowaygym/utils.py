import hashlib
import json
import logging
import math
import sys
import typing as T

import numpy as np
import pandas as pd


def setup_logging(verbose: bool = False) -> None:
    """
    Configure the root logger for command-line use.

    Args:
        verbose (bool, optional): Log at DEBUG instead of INFO level.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def canonical_json(obj: T.Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj: T.Any) -> str:
    """
    SHA-256 hex digest of a string, bytes or a JSON-serializable object.
    """
    if isinstance(obj, bytes):
        data = obj
    elif isinstance(obj, str):
        data = obj.encode("utf-8")
    else:
        data = canonical_json(obj).encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def nlogn(n: T.Union[int, np.ndarray], power: int = 1) -> T.Union[float, np.ndarray]:
    """
    Reference shape n^power * log2(n), with log2(1) clamped to 1 so that n = 1 stays positive.
    """
    n = np.asarray(n, dtype=float)
    return n ** power * np.maximum(np.log2(np.maximum(n, 1.0)), 1.0)


def ceil_log2(m: int) -> int:
    """
    ceil(log2(m)) for m >= 1.
    """
    if m < 1:
        raise ValueError(f"ceil_log2 is undefined for {m}.")
    return (m - 1).bit_length()


def fit_constants(ns: T.Sequence[int], values: T.Sequence[float]) -> pd.DataFrame:
    """
    Fit `values ~ c * n^p * log2 n` for p in {1, 2, 3} by least squares.

    Args:
        ns (Sequence[int]): Size parameters.
        values (Sequence[float]): Measured quantities (e.g. state counts).

    Returns:
        pd.DataFrame: One row per reference shape with the fitted constant, the maximal
            ratio value / shape and the relative residual.
    """
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    rows = []
    for power, name in [(1, "n log n"), (2, "n^2 log n"), (3, "n^3 log n")]:
        if len(ns) == 0:
            rows.append({"shape": name, "c": math.nan, "max_ratio": math.nan, "rel_residual": math.nan})
            continue
        shape = nlogn(ns, power)
        coef, *_ = np.linalg.lstsq(shape[:, None], values, rcond=None)
        c = float(coef[0])
        residual = float(np.linalg.norm(values - c * shape) / max(np.linalg.norm(values), 1e-12))
        rows.append({
            "shape": name,
            "c": c,
            "max_ratio": float(np.max(values / shape)),
            "rel_residual": residual,
        })
    return pd.DataFrame(rows)
