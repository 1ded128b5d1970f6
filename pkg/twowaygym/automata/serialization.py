"""
Versioned JSON documents for machines. Endmarkers are written as "CENT" and "DOLLAR".
"""
import json
import typing as T
from pathlib import Path

from twowaygym.automata.machine import TapeGeometry, TwoWayAutomaton
from twowaygym.definitions import ENDMARKER_JSON_NAMES, MACHINE_JSON_VERSION
from twowaygym.errors import FormatError

_ENDMARKER_FROM_JSON = {v: k for k, v in ENDMARKER_JSON_NAMES.items()}


def _symbol_to_json(s: str) -> str:
    return ENDMARKER_JSON_NAMES.get(s, s)


def _symbol_from_json(s: str) -> str:
    return _ENDMARKER_FROM_JSON.get(s, s)


def automaton_to_dict(A: TwoWayAutomaton) -> dict:
    order = A.state_index()
    transitions = []
    for (q, s), moves in sorted(A.transitions.items(), key=lambda kv: (order.get(kv[0][0], -1), A.symbols.index(kv[0][1]))):
        for p, d in moves:
            transitions.append({"from": q, "symbol": _symbol_to_json(s), "to": p, "dir": d})
    doc = {
        "version": MACHINE_JSON_VERSION,
        "name": A.name,
        "states": list(A.states),
        "alphabet": list(A.alphabet),
        "initial": A.initial,
        "accepting": [q for q in A.states if q in A.accepting],
        "rejecting": [q for q in A.states if q in A.rejecting],
        "universal": [q for q in A.states if q in A.universal],
        "existential": [q for q in A.states if q in A.existential],
        "geometry": A.geometry.value,
        "transitions": transitions,
    }
    if A.emissions:
        doc["emissions"] = [
            {"from": q, "symbol": _symbol_to_json(s), "output": out} for (q, s), out in A.emissions.items()
        ]
    return doc


def automaton_from_dict(doc: dict) -> TwoWayAutomaton:
    version = doc.get("version")
    if version != MACHINE_JSON_VERSION:
        raise FormatError(f"Unsupported machine document version {version!r}.", "json-version")
    try:
        transitions: dict[tuple[str, str], list] = {}
        for t in doc["transitions"]:
            key = (t["from"], _symbol_from_json(t["symbol"]))
            transitions.setdefault(key, []).append((t["to"], int(t["dir"])))
        emissions = {(e["from"], _symbol_from_json(e["symbol"])): e["output"] for e in doc.get("emissions", [])}
        return TwoWayAutomaton(
            states=tuple(doc["states"]),
            alphabet=tuple(doc["alphabet"]),
            initial=doc["initial"],
            transitions={k: tuple(v) for k, v in transitions.items()},
            accepting=frozenset(doc.get("accepting", [])),
            rejecting=frozenset(doc.get("rejecting", [])),
            universal=frozenset(doc.get("universal", [])),
            existential=frozenset(doc["existential"]) if "existential" in doc else None,
            geometry=TapeGeometry(doc.get("geometry", TapeGeometry.CIRCULAR.value)),
            emissions=emissions,
            name=doc.get("name", ""),
        )
    except (KeyError, TypeError) as e:
        raise FormatError(f"Malformed machine document: {e!r}.", "json-schema") from None


def automaton_to_json(A: TwoWayAutomaton, indent: T.Optional[int] = 2) -> str:
    return json.dumps(automaton_to_dict(A), indent=indent, ensure_ascii=False)


def automaton_from_json(text: str) -> TwoWayAutomaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"Not a JSON document: {e}.", "json-syntax") from None
    return automaton_from_dict(doc)


def save_automaton(A: TwoWayAutomaton, pth: T.Union[str, Path]) -> None:
    Path(pth).write_text(automaton_to_json(A), encoding="utf-8")


def load_automaton(pth: T.Union[str, Path]) -> TwoWayAutomaton:
    return automaton_from_json(Path(pth).read_text(encoding="utf-8"))
