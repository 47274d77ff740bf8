"""Spec ingestion, dispatch and the result envelope."""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from pydantic import ValidationError

from .. import __version__
from ..algebra import GuardExceeded, Ideal, RationalFunction
from ..algebra.ideal import DEFAULT_MINOR_LIMIT
from ..connection import (
    ConnectionData,
    InvariantTensor,
    curvature_nonzero_entries,
    frame_torsor,
    is_flat,
    torsor_ring,
)
from ..foliation import (
    FamilyOfSubvarieties,
    ZPConfig,
    atypicality_check,
    degree_budget,
    family_leaf_locus,
    leaf_locus,
    zp_candidate_loci,
)
from ..gauss_manin import SuperellipticFamily, gauss_manin, verify_periods
from .schemas import PAYLOADS, ProblemSpec


class SpecError(ValueError):
    """Input rejected before or during computation (exit code 2)."""

    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


@dataclass
class Options:
    e: int | None = None
    fast_closure: bool = False
    verify_periods: bool = False
    guard_minors: int = DEFAULT_MINOR_LIMIT


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def input_hash(spec: dict) -> str:
    return hashlib.sha256(canonical_json(spec).encode()).hexdigest()


def split_spec(data: dict, kind: str | None = None) -> tuple[ProblemSpec, Any]:
    """Accept a full ProblemSpec or a bare payload (kind from the caller); raises ValidationError."""
    if isinstance(data, dict) and "kind" in data and "payload" in data:
        spec = ProblemSpec.model_validate(data)
        if kind is not None and spec.kind != kind:
            raise SpecError([f"spec kind {spec.kind!r} does not match command {kind!r}"])
    else:
        if kind is None:
            raise SpecError(["bare payload needs a kind"])
        spec = ProblemSpec.model_validate({"kind": kind, "payload": data})
    payload = PAYLOADS[spec.kind].model_validate(spec.payload)
    return spec, payload


def canonicalize(data: dict, kind: str | None = None) -> dict:
    spec, payload = split_spec(data, kind)
    out = spec.model_dump(exclude_unset=True)
    out["kind"] = spec.kind
    out["payload"] = payload.model_dump(exclude_unset=True)
    return out


# building domain objects -------------------------------------------------------

def _entry(x, vars) -> RationalFunction:
    if isinstance(x, list):
        if len(x) != 2:
            raise ValueError(f"entry {x!r} must be [numerator, denominator]")
        return RationalFunction.parse(str(x[0]), str(x[1]), vars)
    return RationalFunction.parse(str(x), "1", vars)


def build_connection(m) -> ConnectionData:
    return ConnectionData.from_json(m.connection.model_dump())


def build_torsor(m):
    c = build_connection(m)
    tensors = [InvariantTensor(t.a, t.b, tuple(_entry(x, c.vars) for x in t.section))
               for t in m.invariant_tensors]
    point = None if m.base_point is None else [Fraction(str(x)) for x in m.base_point]
    return frame_torsor(c, tensors, point, m.group_dimension)


def build_family(T, fm) -> FamilyOfSubvarieties:
    return FamilyOfSubvarieties.over_torsor(T, fm.params, fm.ideal, fm.param_ideal)


def build_base_family(base_vars, fm) -> FamilyOfSubvarieties:
    return FamilyOfSubvarieties.over_base(base_vars, fm.params, fm.ideal, fm.param_ideal)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LEAFCUT_THREADS", "1")))
    except ValueError:
        return 1


# per-kind handlers ----------------------------------------------------------

def _flatness(p, opts, seed):
    c = build_connection(p)
    return {"flat": is_flat(c), "curvature_nonzero_entries": curvature_nonzero_entries(c)}


def _torsor_json(T) -> dict:
    return {"ring": list(T.ring), "group_dimension": T.group_dimension,
            "base_point": [str(x) for x in T.base_point]}


def _locus(p, opts, seed):
    T, L = build_torsor(p)
    f = build_family(T, p.family)
    res = leaf_locus(T, L, f, p.e, opts.guard_minors, opts.fast_closure)
    out = res.to_json()
    out["torsor"] = _torsor_json(T)
    return out


def _family_locus(p, opts, seed):
    T, L = build_torsor(p)
    f = build_family(T, p.family)
    h = build_base_family(T.base_vars, p.h)
    res = family_leaf_locus(T, L, f, p.e, h, opts.guard_minors, opts.fast_closure)
    out = res.to_json()
    out["torsor"] = _torsor_json(T)
    return out


def _zpdrive(p, opts, seed):
    T, L = build_torsor(p)
    fams = [build_family(T, fm) for fm in p.families]
    ws = [build_base_family(T.base_vars, fm) for fm in p.weakly_special]
    cfg = ZPConfig(p.dim_S, p.dim_flag, fams, ws, p.dim_H)
    out = zp_candidate_loci(T, L, cfg, p.e, opts.guard_minors).to_json()
    out["torsor"] = _torsor_json(T)
    return out


def _gaussmanin(p, opts, seed):
    fam = SuperellipticFamily(p.N, tuple(p.exponents), tuple(p.points), tuple(p.params))
    res = gauss_manin(fam, p.characters, workers=_threads())
    out = res.to_json()
    out["flat"] = {str(k): is_flat(c) for k, c in sorted(res.connections.items())}
    if opts.verify_periods:
        out["period_check"] = verify_periods(res, points=p.verify_points, seed=seed)
    return out


def _degree_bound(p, opts, seed):
    if p.stages is not None:
        stages = [(s.kappa, s.r) for s in p.stages]
    elif p.kappa is not None and p.r is not None:
        stages = [(p.kappa, p.r)] * p.steps
    else:
        raise SpecError(["degree-bound needs kappa and r, or stages"])
    ledger, running = [], p.deg_V
    for k, r in stages:
        running *= k ** r
        ledger.append({"kappa": k, "r": r, "factor": str(k ** r), "running": str(running)})
    bound = degree_budget(p.deg_V, stages=stages)
    return {"deg_V": p.deg_V, "bound": str(bound), "ledger": ledger}


def _atypical(p, opts, seed):
    return atypicality_check(p.dim_U, p.dim_V, p.dim_P, p.dim_L, p.dim_H).to_json()


HANDLERS = {
    "flatness": _flatness,
    "locus": _locus,
    "family-locus": _family_locus,
    "zpdrive": _zpdrive,
    "gaussmanin": _gaussmanin,
    "degree-bound": _degree_bound,
    "atypical": _atypical,
}


def _apply_options(canon: dict, opts: Options) -> dict:
    if opts.e is not None and canon["kind"] in ("locus", "family-locus", "zpdrive"):
        canon = json.loads(canonical_json(canon))
        canon["payload"]["e"] = opts.e
    return canon


def run(data: dict, kind: str | None = None, opts: Options | None = None) -> dict:
    """Validate, dispatch and wrap the result; raises SpecError or GuardExceeded."""
    opts = opts or Options()
    t0 = time.perf_counter()
    try:
        canon = _apply_options(canonicalize(data, kind), opts)
    except ValidationError as exc:
        raise SpecError(_pydantic_messages(exc)) from exc
    problems = semantic_diagnostics(canon)
    if problems:
        raise SpecError(problems)
    spec, payload = split_spec(canon)
    t1 = time.perf_counter()
    result = HANDLERS[spec.kind](payload, opts, spec.seed)
    t2 = time.perf_counter()
    result = json.loads(canonical_json(result))
    t3 = time.perf_counter()
    flags = {"fast_closure": opts.fast_closure, "verify_periods": opts.verify_periods,
             "guard_minors": opts.guard_minors}
    return {
        "input_hash": input_hash({"spec": canon, "flags": flags}),
        "tool_version": __version__,
        "kind": spec.kind,
        "result": result,
        "timings": {"parse_ms": round((t1 - t0) * 1000, 3), "compute_ms": round((t2 - t1) * 1000, 3),
                    "serialize_ms": round((t3 - t2) * 1000, 3)},
    }


# validation -----------------------------------------------------------------------

def _pydantic_messages(exc: ValidationError) -> list[str]:
    out = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err["loc"])
        out.append(f"schema: {loc}: {err['msg']}")
    return out


def _check_ideal(texts, ring, what) -> list[str]:
    try:
        Ideal.parse(ring, texts)
        return []
    except Exception as exc:  # noqa: BLE001 - converted to a diagnostic
        return [f"ring mismatch in {what}: {exc}"]


def _connection_diagnostics(cm) -> list[str]:
    out = []
    vars = tuple(cm["base"]["vars"])
    if len(set(vars)) != len(vars):
        out.append("base variables repeat")
    out += _check_ideal(cm["base"].get("ideal", []), vars, "base ideal")
    mats = cm["matrices"]
    r = cm["rank"]
    if len(mats) != len(vars):
        out.append(f"{len(mats)} connection matrices for {len(vars)} base variables")
    for M in mats:
        if len(M) != r or any(len(row) != r for row in M):
            out.append("connection matrices must be rank x rank")
            break
        for row in M:
            for x in row:
                try:
                    _entry(x, vars)
                except ZeroDivisionError:
                    out.append(f"zero denominator in matrix entry {x!r}")
                except Exception as exc:  # noqa: BLE001
                    out.append(f"ring mismatch in matrix entry {x!r}: {exc}")
    return out


def _family_diagnostics(fm, space_ring, what) -> list[str]:
    out = []
    params = tuple(fm["params"])
    clash = set(params) & set(space_ring)
    if clash:
        out.append(f"{what}: parameter names {sorted(clash)} clash with space variables")
        return out
    out += _check_ideal(fm["ideal"], tuple(space_ring) + params, what)
    out += _check_ideal(fm.get("param_ideal", []), params, f"{what} parameter ideal")
    return out


def _torsor_diagnostics(p) -> tuple[list[str], tuple]:
    cm = p["connection"]
    out = _connection_diagnostics(cm)
    vars = tuple(cm["base"]["vars"])
    r = cm["rank"]
    for t in p.get("invariant_tensors", []):
        need = r ** (t["a"] + t["b"])
        if len(t["section"]) != need:
            out.append(f"tensor of type ({t['a']},{t['b']}) needs {need} components")
        for x in t["section"]:
            try:
                _entry(x, vars)
            except Exception as exc:  # noqa: BLE001
                out.append(f"ring mismatch in tensor entry {x!r}: {exc}")
    bp = p.get("base_point")
    if bp is not None and len(bp) != len(vars):
        out.append("base point has the wrong number of coordinates")
    return out, torsor_ring(vars, r)


def semantic_diagnostics(canon: dict) -> list[str]:
    kind, p = canon["kind"], canon["payload"]
    try:
        if kind == "flatness":
            return _connection_diagnostics(p["connection"])
        if kind in ("locus", "family-locus", "zpdrive"):
            out, ring = _torsor_diagnostics(p)
            if out:
                return out
            fams = p["families"] if kind == "zpdrive" else [p["family"]]
            for i, fm in enumerate(fams):
                out += _family_diagnostics(fm, ring, f"family {i}")
            base = tuple(p["connection"]["base"]["vars"])
            hs = p.get("weakly_special", []) if kind == "zpdrive" else ([p["h"]] if kind == "family-locus" else [])
            for i, fm in enumerate(hs):
                out += _family_diagnostics(fm, base, f"base family {i}")
                clash = set(fm["params"]) & set(ring)
                if clash:
                    out.append(f"base family {i}: parameter names {sorted(clash)} clash with torsor variables")
            if kind == "zpdrive" and not 0 <= p.get("e", 1) <= p["dim_S"]:
                out.append("need 0 <= e <= dim_S")
            return out
        if kind == "gaussmanin":
            fam = SuperellipticFamily(p["N"], tuple(p["exponents"]), tuple(p["points"]), tuple(p.get("params", [])))
            out = fam.diagnostics()
            for k in p.get("characters") or []:
                if not 1 <= k <= p["N"] - 1:
                    out.append(f"character {k} outside 1..N-1")
            if not out and fam.params:
                try:
                    for q in fam.point_polys():
                        q.to_ring(fam.params)
                except Exception as exc:  # noqa: BLE001
                    out.append(f"ring mismatch in points: {exc}")
            return out
        if kind == "degree-bound":
            if p.get("stages") is None and (p.get("kappa") is None or p.get("r") is None):
                return ["degree-bound needs kappa and r, or stages"]
            return []
        if kind == "atypical":
            try:
                atypicality_check(p["dim_U"], p["dim_V"], p["dim_P"], p["dim_L"], p["dim_H"])
            except ValueError as exc:
                return [str(exc)]
            return []
    except Exception as exc:  # noqa: BLE001 - validation never throws
        return [f"invalid spec: {exc}"]
    return []


def validate(data: Any, kind: str | None = None) -> list[str]:
    """Schema and semantic diagnostics; empty when the spec is runnable.  Never raises."""
    try:
        canon = canonicalize(data, kind)
    except ValidationError as exc:
        return _pydantic_messages(exc)
    except SpecError as exc:
        return list(exc.diagnostics)
    except Exception as exc:  # noqa: BLE001
        return [f"invalid spec: {exc}"]
    return semantic_diagnostics(canon)


__all__ = ["GuardExceeded", "Options", "SpecError", "canonical_json", "canonicalize", "input_hash", "run",
           "validate"]
