"""JSON model files and CSV convergence reports.

Model files carry a ``"type"`` discriminator:

``lattice``
    ``{"type": "lattice", "origin": 0, "step": 1, "probs": [0.5, 0.5]}``
    or ``{"type": "lattice", "atoms": [...], "probs": [...]}``.
``ambiguity``
    ``{"type": "ambiguity", "models": [{"law": <lattice>, "alpha": 0, "beta": 1}, ...]}``.
``space``
    ``{"type": "space", "atoms": [...], "endowment": [...],
    "models": [{"weights": [...], "alpha": 0, "beta": 1}, ...]}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .ambiguity import AmbiguityModel, ModelEntry
from .asymptotics import ConvergenceReport, Row
from .dist import LatticeDistribution
from .errors import PoolRiskError
from .pooling import SampleSpace

CSV_COLUMNS = ("n", "value", "gap", "n_gap", "sqrtn_gap", "bound_lower", "bound_upper", "verdict")


class ModelFileError(PoolRiskError):
    """Malformed or invalid model file."""


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ModelFileError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise ModelFileError(f"{where}: missing field {key!r}")
    return obj[key]


def _real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _reals(values, where: str) -> list[float]:
    if not isinstance(values, list) or not values:
        raise ModelFileError(f"{where}: expected a nonempty list of numbers")
    return [_real(x, f"{where}[{i}]") for i, x in enumerate(values)]


def _wrap(where: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ModelFileError:
        raise
    except PoolRiskError as exc:
        raise ModelFileError(f"{where}: {exc}") from exc


def lattice_from_dict(obj: dict, where: str = "law") -> LatticeDistribution:
    probs = _reals(_require(obj, "probs", where), f"{where}.probs")
    if "atoms" in obj:
        atoms = _reals(obj["atoms"], f"{where}.atoms")
        step = _real(obj["step"], f"{where}.step") if "step" in obj else None
        return _wrap(where, LatticeDistribution.from_atoms, atoms, probs, step=step)
    origin = _real(_require(obj, "origin", where), f"{where}.origin")
    step = _real(_require(obj, "step", where), f"{where}.step")
    return _wrap(where, LatticeDistribution, origin, step, probs)


def _penalties(entry: dict, where: str) -> tuple[float, float]:
    return _real(entry.get("alpha", 0.0), f"{where}.alpha"), _real(entry.get("beta", 1.0), f"{where}.beta")


def ambiguity_from_dict(obj: dict) -> AmbiguityModel:
    models = _require(obj, "models", "ambiguity")
    if not isinstance(models, list) or not models:
        raise ModelFileError("ambiguity.models: expected a nonempty list")
    entries = []
    for i, m in enumerate(models):
        where = f"models[{i}]"
        law = lattice_from_dict(_require(m, "law", where), f"{where}.law")
        alpha, beta = _penalties(m, where)
        entries.append(ModelEntry(law, alpha, beta))
    return _wrap("ambiguity", AmbiguityModel, entries)


def space_from_dict(obj: dict) -> SampleSpace:
    endowment = _reals(_require(obj, "endowment", "space"), "space.endowment")
    atoms = obj.get("atoms", list(range(len(endowment))))
    models = _require(obj, "models", "space")
    if not isinstance(models, list) or not models:
        raise ModelFileError("space.models: expected a nonempty list")
    weights, alphas, betas = [], [], []
    for i, m in enumerate(models):
        where = f"models[{i}]"
        weights.append(_reals(_require(m, "weights", where), f"{where}.weights"))
        a, b = _penalties(m, where)
        alphas.append(a)
        betas.append(b)
    if any(len(w) != len(endowment) for w in weights):
        raise ModelFileError("space: every models[i].weights must have one entry per endowment atom")
    return _wrap("space", SampleSpace, tuple(atoms), endowment, weights, alphas, betas)


_BUILDERS = {"lattice": lattice_from_dict, "ambiguity": ambiguity_from_dict, "space": space_from_dict}


def parse_model_text(text: str):
    """Parse model JSON text into a lattice law, ambiguity set or sample space."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    kind = _require(obj, "type", "model file")
    if kind not in _BUILDERS:
        raise ModelFileError(f"type: unknown model type {kind!r}; expected one of {sorted(_BUILDERS)}")
    return _BUILDERS[kind](obj)


def parse_model_file(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_model_text(text)


def _fmt(x: float | None) -> str:
    if x is None:
        return "empirical"
    return format(float(x), ".17g")


def report_to_csv(report: ConvergenceReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        w.writerow(
            [r.n, _fmt(r.value), _fmt(r.gap), _fmt(r.n_gap), _fmt(r.sqrtn_gap),
             _fmt(report.bound_lower), _fmt(report.bound_upper), report.verdict]
        )
    return buf.getvalue()


def report_from_csv(text: str) -> tuple[list[Row], float, float | None, str]:
    """Rows, lower bound, upper bound (None if empirical) and verdict from CSV text."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ModelFileError(f"unexpected CSV header {reader.fieldnames}")
    rows, lower, upper, verdict = [], math.nan, None, "inconclusive"
    for rec in reader:
        rows.append(Row(int(rec["n"]), float(rec["value"]), float(rec["gap"]), float(rec["n_gap"]), float(rec["sqrtn_gap"])))
        lower = float(rec["bound_lower"])
        upper = None if rec["bound_upper"] == "empirical" else float(rec["bound_upper"])
        verdict = rec["verdict"]
    return rows, lower, upper, verdict
