"""JSON specification documents read and written by the command line tool.

A document looks like::

    {
      "dims": [2, 3, 3, 3],
      "state": {"0.0.2.2": [0.288675, 0.0], ...},
      "normalize": false,
      "generators": [{"diag": [null, [{"k": 1, "L": 2}, {"k": 1, "L": 4}, ...], ...]},
                     {"cycles": [["0.0.0.0", "1.1.0.2"]], "phases": [[{"k": 0, "L": 1}, ...]]},
                     {"site_local": [[0, 0], [1, 0], [1, 0], [1, 0]]},
                     {"matrix": [[[re, im], ...], ...]}],
      "code": [{ket: [re, im], ...}, ...],
      "params": {"K": 1, "D": 8}
    }

Kets are site values joined by ".", so two-digit values are unambiguous.
Every key except ``dims`` is optional; a ``report`` key is carried along
untouched so that machine-readable output can be read back in.
"""

from __future__ import annotations

import json
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._config import settings
from .cyclotomic import Cyclotomic, PhaseExp
from .errors import MixedStabError, SpecParseError
from .hilbert import Dims, StateVector, as_dims, unflatten
from .operators import GenPermOperator, genperm_from_spec
from .stabiliser import CodeSpace, StabiliserGroup

__all__ = [
    "SpecDocument",
    "parse_spec",
    "load_spec",
    "ket_string",
    "state_to_json",
    "genperm_to_json",
    "cyclotomic_to_json",
    "fixture_document",
]

_KNOWN_KEYS = {"dims", "state", "normalize", "generators", "code", "params", "report", "name"}


@dataclass
class SpecDocument:
    dims: Dims
    state: StateVector | None = None
    generators: list = field(default_factory=list)
    code: list[StateVector] | None = None
    params: dict | None = None
    report: dict | None = None
    name: str | None = None


def ket_string(digits) -> str:
    return ".".join(str(int(d)) for d in digits)


def _parse_ket(ket: str, dims: Dims, where: str) -> tuple[int, ...]:
    if not isinstance(ket, str):
        raise SpecParseError(f"{where}: ket must be a string, got {ket!r}")
    parts = ket.split(".")
    if len(parts) != dims.n:
        raise SpecParseError(f"{where}: ket {ket!r} has {len(parts)} site values, expected {dims.n}")
    try:
        digits = tuple(int(p) for p in parts)
    except ValueError:
        raise SpecParseError(f"{where}: ket {ket!r} has a non-integer site value") from None
    for j, D in zip(digits, dims):
        if not 0 <= j < D:
            raise SpecParseError(f"{where}: ket {ket!r} has value {j} outside [0, {D})")
    return digits


def _parse_complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            pass
    if isinstance(value, Mapping) and "k" in value:
        return _parse_phase(value, where).value
    raise SpecParseError(f"{where}: cannot read complex number {value!r}")


def _parse_phase(value, where: str) -> PhaseExp:
    if isinstance(value, Mapping):
        try:
            k, L = int(value.get("k", 0)), int(value.get("L", 1))
        except (TypeError, ValueError):
            raise SpecParseError(f"{where}: bad phase {value!r}") from None
        if L <= 0:
            raise SpecParseError(f"{where}: phase modulus must be positive")
        return PhaseExp(k, L)
    try:
        return PhaseExp.from_complex(_parse_complex(value, where))
    except ValueError as exc:
        raise SpecParseError(f"{where}: {exc}") from None


def _parse_state(obj, dims: Dims, where: str, normalize: bool) -> StateVector:
    if not isinstance(obj, Mapping):
        raise SpecParseError(f"{where}: expected a map from kets to amplitudes")
    amps = np.zeros(dims.total, dtype=complex)
    for ket, amp in obj.items():
        digits = _parse_ket(ket, dims, where)
        idx = 0
        for j, D in zip(digits, dims):
            idx = idx * D + j
        amps[idx] += _parse_complex(amp, f"{where}[{ket!r}]")
    state = StateVector(dims, amps)
    if normalize:
        return state.normalized()
    if not state.is_normalized():
        raise SpecParseError(
            f"{where}: state has norm {state.norm():.12g}; pass normalize to rescale it"
        )
    return state


def _parse_generator(obj, dims: Dims, where: str):
    if not isinstance(obj, Mapping):
        raise SpecParseError(f"{where}: generator must be an object")
    if "matrix" in obj:
        rows = obj["matrix"]
        try:
            m = np.array([[_parse_complex(x, where) for x in row] for row in rows], dtype=complex)
        except TypeError:
            raise SpecParseError(f"{where}: matrix must be a list of rows") from None
        if m.shape != (dims.total, dims.total):
            raise SpecParseError(f"{where}: matrix shape {m.shape} does not match dimension {dims.total}")
        return m
    spec = dict(obj)
    if "cycles" in spec:
        spec["cycles"] = [
            [_parse_ket(k, dims, f"{where}.cycles") for k in cyc] for cyc in spec["cycles"]
        ]
        if spec.get("phases") is not None:
            spec["phases"] = [[_parse_phase(p, f"{where}.phases") for p in row] for row in spec["phases"]]
    if "diag" in spec:
        spec["diag"] = [
            None if row is None else [_parse_phase(p, f"{where}.diag") for p in row] for row in spec["diag"]
        ]
    if "phase" in spec:
        spec["phase"] = _parse_phase(spec["phase"], f"{where}.phase")
    unknown = set(spec) - {"cycles", "phases", "diag", "site_local", "phase"}
    if unknown:
        raise SpecParseError(f"{where}: unknown generator keys {sorted(unknown)}")
    try:
        return genperm_from_spec(dims, spec)
    except MixedStabError as exc:
        raise SpecParseError(f"{where}: {exc}") from None


def parse_spec(obj: Mapping, normalize: bool | None = None) -> SpecDocument:
    """Validate a decoded JSON document and build library objects from it."""
    if not isinstance(obj, Mapping):
        raise SpecParseError("top level must be a JSON object")
    unknown = set(obj) - _KNOWN_KEYS
    if unknown:
        raise SpecParseError(f"unknown top-level keys {sorted(unknown)}")
    if "dims" not in obj:
        raise SpecParseError("missing required key 'dims'")
    try:
        dims = as_dims(obj["dims"])
    except (MixedStabError, TypeError, ValueError) as exc:
        raise SpecParseError(f"dims: {exc}") from None
    if normalize is None:
        normalize = bool(obj.get("normalize", False))
    doc = SpecDocument(dims, name=obj.get("name"), report=obj.get("report"))
    if obj.get("state") is not None:
        doc.state = _parse_state(obj["state"], dims, "state", normalize)
    if obj.get("generators") is not None:
        doc.generators = [
            _parse_generator(g, dims, f"generators[{i}]") for i, g in enumerate(obj["generators"])
        ]
    if obj.get("code") is not None:
        doc.code = [_parse_state(s, dims, f"code[{i}]", normalize) for i, s in enumerate(obj["code"])]
    if obj.get("params") is not None:
        params = obj["params"]
        if not isinstance(params, Mapping) or not {"K", "D"} <= set(params):
            raise SpecParseError("params: expected an object with integer K and D")
        try:
            doc.params = {"K": int(params["K"]), "D": int(params["D"])}
        except (TypeError, ValueError):
            raise SpecParseError("params: K and D must be integers") from None
    return doc


def load_spec(source, normalize: bool | None = None) -> SpecDocument:
    """Load a document from a path, a JSON string or a fixture name."""
    if isinstance(source, Mapping):
        return parse_spec(source, normalize)
    text = None
    if isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    elif isinstance(source, (str, os.PathLike)) and Path(source).is_file():
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SpecParseError(f"cannot read {source}: {exc}") from None
    if text is None:
        from .constructions import FIXTURES

        if isinstance(source, str) and source in FIXTURES:
            return parse_spec(fixture_document(source), normalize)
        raise SpecParseError(f"{source!r} is neither a readable file nor a fixture name")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_spec(obj, normalize)


# ---------------------------------------------------------------------------
# writing


def _cnum(z: complex, digits: int = 15) -> list[float]:
    z = complex(z)
    return [round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0]


def state_to_json(psi: StateVector, atol: float | None = None) -> dict:
    atol = settings.atol if atol is None else atol
    return {
        ket_string(unflatten(k, psi.dims)): [float(a.real), float(a.imag)]
        for k, a in enumerate(psi.amplitudes)
        if abs(a) > atol
    }


def genperm_to_json(op: GenPermOperator) -> dict:
    cycles, phases = [], []
    for cyc in op.cycles():
        cycles.append([ket_string(unflatten(k, op.dims)) for k in cyc])
        phases.append([{"k": int(op.phase_k[k]), "L": int(op.L)} for k in cyc])
    return {"cycles": cycles, "phases": phases}


def generator_to_json(g) -> dict:
    if isinstance(g, GenPermOperator):
        return genperm_to_json(g)
    m = np.asarray(g, dtype=complex)
    return {"matrix": [[_cnum(x) for x in row] for row in m]}


def cyclotomic_to_json(value: Cyclotomic) -> dict:
    z = complex(value)
    out = {"value": _cnum(z, 12)}
    if value.is_rational():
        frac = value.as_fraction()
        out["exact"] = str(frac)
    else:
        out["exact"] = {"N": value.N, "coeffs": [str(c) for c in value.coeffs]}
    return out


def document(dims, **parts) -> dict:
    doc = {"dims": list(as_dims(dims).dims)}
    for key, value in parts.items():
        if value is None:
            continue
        if key == "state":
            doc["state"] = state_to_json(value)
        elif key == "code":
            basis = value.basis if isinstance(value, CodeSpace) else value
            doc["code"] = [state_to_json(b) for b in basis]
        elif key == "generators":
            doc["generators"] = [generator_to_json(g) for g in value]
        else:
            doc[key] = value
    return doc


def fixture_document(name: str) -> dict:
    """Spec document for a built-in fixture."""
    from . import constructions as c

    fx = c.FIXTURES[name]
    payload = fx.payload()
    if fx.kind == "state":
        return document(fx.dims, name=name, state=payload)
    if fx.kind == "code":
        gens = c.q312_3_generators() if fx.dims == (3, 3, 3) else c.q312_5_generators()
        return document(fx.dims, name=name, code=payload, generators=gens,
                        params={"K": payload.K, "D": payload.claimed_distance})
    if fx.kind == "operator":
        return document(fx.dims, name=name, generators=[payload])
    if isinstance(payload, StabiliserGroup):
        return document(fx.dims, name=name, generators=list(payload.generators))
    raise SpecParseError(f"fixture {name!r} cannot be exported")
