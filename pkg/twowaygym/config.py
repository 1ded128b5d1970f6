"""
Loading of the caps that bound exhaustive campaigns and of the frozen regression constants.
"""
import json
import logging
import typing as T
from dataclasses import dataclass, fields, replace
from pathlib import Path

from twowaygym.definitions import CAPS_PTH, REGRESSION_PTH

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Caps:
    """
    Size caps of the workbench. Defaults are stored in `caps.json` next to this module.

    Args:
        enumeration_max_n: Largest vertex count for which all graphs may be enumerated.
        unary_materialization_cap: Largest unary length that may be written out as a tape.
        flat_emission_cap: Largest state count of an emitted flat automaton.
        transducer_state_cap: Largest state count of a sweeping transducer.
        solver_max_n: Largest vertex count for which reachability automata are built.
    """

    enumeration_max_n: int = 4
    unary_materialization_cap: int = 10_000_000
    flat_emission_cap: int = 1_000_000
    transducer_state_cap: int = 200_000
    solver_max_n: int = 24


def load_caps(pth: T.Optional[T.Union[str, Path]] = None, **overrides) -> Caps:
    """
    Load caps from a JSON file and apply keyword overrides (`None` values are ignored).
    """
    pth = Path(pth) if pth is not None else CAPS_PTH
    with open(pth) as f:
        raw = json.load(f)
    known = {f.name for f in fields(Caps)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"Unknown caps in {pth}: {sorted(unknown)}.")
    caps = Caps(**raw)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides:
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"Unknown cap overrides: {sorted(unknown)}.")
        caps = replace(caps, **overrides)
        logger.debug("Caps overridden: %s", overrides)
    return caps


def load_regression(pth: T.Optional[T.Union[str, Path]] = None) -> dict[str, float]:
    """
    Load the committed regression constants (size and narrowness bounds).
    """
    pth = Path(pth) if pth is not None else REGRESSION_PTH
    with open(pth) as f:
        return {k: float(v) for k, v in json.load(f).items()}
