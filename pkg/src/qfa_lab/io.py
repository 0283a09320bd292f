"""JSON automaton files.

QFA::

    {"type": "qfa", "states": [...], "alphabet": [...], "start": ..., "accept": [...],
     "reject": [...], "operators": {"kappa": M, "dollar": M, "<letter>": M}}

DFA::

    {"type": "dfa", "states": [...], "alphabet": [...], "start": ..., "accept": [...],
     "delta": {"<state>": {"<letter>": "<state>"}}}

``M`` is a row-major list of rows; an entry is a number or ``[re, im]``.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .dfa import DFA
from .qfa import QFA, validate_qfa


class AutomatonFileError(ValueError):
    pass


class AutomatonValidationError(AutomatonFileError):
    def __init__(self, problems: list[str]):
        super().__init__("invalid automaton: " + "; ".join(problems))
        self.problems = problems


def _entry(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _matrix(rows, letter: str) -> np.ndarray:
    try:
        return np.array([[complex(*e) if isinstance(e, list) else complex(e) for e in row]
                         for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise AutomatonFileError(f"bad matrix for {letter!r}: {exc}") from None


def to_dict(obj: QFA | DFA) -> dict:
    if isinstance(obj, QFA):
        return {
            "type": "qfa",
            "states": list(obj.states),
            "alphabet": list(obj.alphabet),
            "start": obj.start,
            "accept": [q for q in obj.states if q in obj.accept],
            "reject": [q for q in obj.states if q in obj.reject],
            "operators": {k: [[_entry(z) for z in row] for row in m] for k, m in obj.ops.items()},
        }
    return {
        "type": "dfa",
        "states": list(obj.states),
        "alphabet": list(obj.alphabet),
        "start": obj.start,
        "accept": [q for q in obj.states if q in obj.accept],
        "delta": obj.table(),
    }


def from_dict(doc: dict, validate: bool = True) -> QFA | DFA:
    try:
        kind = doc["type"]
        if kind == "qfa":
            qfa = QFA(
                states=tuple(doc["states"]),
                alphabet=tuple(doc["alphabet"]),
                start=doc["start"],
                accept=frozenset(doc["accept"]),
                reject=frozenset(doc["reject"]),
                ops={k: _matrix(m, k) for k, m in doc["operators"].items()},
            )
            problems = validate_qfa(qfa) if validate else []
            if problems:
                raise AutomatonValidationError(problems)
            return qfa
        if kind == "dfa":
            return DFA.from_table(doc["alphabet"], doc["delta"], doc["start"], doc["accept"])
    except KeyError as exc:
        raise AutomatonFileError(f"missing field {exc}") from None
    except AutomatonFileError:
        raise
    except ValueError as exc:
        raise AutomatonValidationError([str(exc)]) from None
    raise AutomatonFileError(f"unknown automaton type {doc.get('type')!r}")


def loads(text: str, validate: bool = True) -> QFA | DFA:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AutomatonFileError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise AutomatonFileError("top level must be a JSON object")
    return from_dict(doc, validate)


def dumps(obj: QFA | DFA) -> str:
    return json.dumps(to_dict(obj), indent=1)


def load_automaton(path, validate: bool = True) -> QFA | DFA:
    """Read an automaton file; QFAs are checked with ``validate_qfa`` unless ``validate`` is off."""
    return loads(Path(path).read_text(encoding="utf-8"), validate)


def save_automaton(obj: QFA | DFA, path) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


FIXTURES = ("k2.qfa", "k3.qfa", "parity.qfa", "g1.dfa", "g2.dfa", "g3.dfa", "even_a.dfa")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("qfa_lab") / "data" / name))


def load_fixture(name: str, directory=None, validate: bool = True) -> QFA | DFA:
    path = Path(directory) / name if directory is not None else fixture_path(name)
    if not path.exists():
        raise FileNotFoundError(f"fixture {name} not found at {path}")
    return load_automaton(path, validate)
