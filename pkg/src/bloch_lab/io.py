"""Wire formats: state/basis/tensor JSON, figure CSV/JSON, config files.

States travel as {"dims": [...], "matrix": [[re, im], ...]} with the matrix
flattened row-major; bases as {"dim", "cut", "elements": [{"sector", "k",
"l", "matrix"}]}.  CSV files open with a ``# generated <timestamp>`` line
unless deterministic output is requested.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from math import prod
from pathlib import Path

import numpy as np

from .basis import BasisElement, OperatorBasis
from .correlation import (BlochCoefficients, all_subset_norms, purity_from_tensor,
                          split_purity, split_sector_norms)
from .states import DensityMatrix, from_matrix


def _matrix_to_pairs(m: np.ndarray) -> list[list[float]]:
    flat = np.asarray(m, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _pairs_to_matrix(pairs, d: int, what: str) -> np.ndarray:
    if not isinstance(pairs, list) or len(pairs) != d * d:
        raise ValueError(f"malformed {what}: matrix needs {d * d} [re, im] pairs, "
                         f"got {len(pairs) if isinstance(pairs, list) else type(pairs).__name__}")
    out = np.empty(d * d, dtype=complex)
    for i, p in enumerate(pairs):
        if not (isinstance(p, list) and len(p) == 2
                and all(isinstance(x, (int, float)) for x in p)):
            raise ValueError(f"malformed {what}: matrix entry {i} is not a [re, im] pair")
        out[i] = complex(p[0], p[1])
    return out.reshape(d, d)


def state_to_jsonable(state: DensityMatrix) -> dict:
    return {"dims": list(state.dims), "matrix": _matrix_to_pairs(state.matrix)}


def state_from_jsonable(obj) -> DensityMatrix:
    if not isinstance(obj, dict):
        raise ValueError(f"malformed state: expected an object, got {type(obj).__name__}")
    if "dims" not in obj or "matrix" not in obj:
        missing = [k for k in ("dims", "matrix") if k not in obj]
        raise ValueError(f"malformed state: missing field(s) {', '.join(missing)}")
    dims = obj["dims"]
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and d >= 1 for d in dims)):
        raise ValueError(f"malformed state: dims must be a list of positive integers, got {dims!r}")
    d = prod(dims)
    matrix = _pairs_to_matrix(obj["matrix"], d, "state")
    return from_matrix(matrix, tuple(dims))


def load_state(path: str | Path) -> DensityMatrix:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValueError(f"cannot read state file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed state file {path}: invalid JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from exc
    return state_from_jsonable(obj)


def save_state(state: DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state_to_jsonable(state)))


def basis_to_jsonable(basis: OperatorBasis) -> dict:
    return {
        "dim": basis.dim,
        "cut": basis.cut,
        "elements": [
            {"sector": e.sector, "k": e.k, "l": e.l, "matrix": _matrix_to_pairs(e.matrix)}
            for e in basis.elements
        ],
    }


def basis_from_jsonable(obj) -> OperatorBasis:
    if not isinstance(obj, dict) or "dim" not in obj or "elements" not in obj:
        raise ValueError("malformed basis: need fields dim, cut, elements")
    d = obj["dim"]
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"malformed basis: dim must be an integer >= 2, got {d!r}")
    cut = obj.get("cut")
    elements = []
    for i, rec in enumerate(obj["elements"]):
        if not isinstance(rec, dict) or any(k not in rec for k in ("sector", "k", "l", "matrix")):
            raise ValueError(f"malformed basis: element {i} needs sector, k, l, matrix")
        m = _pairs_to_matrix(rec["matrix"], d, f"basis element {i}")
        norm = float(np.vdot(m, m).real)
        elements.append(BasisElement(rec["sector"], int(rec["k"]), int(rec["l"]), m, norm))
    return OperatorBasis(dim=d, cut=cut, elements=tuple(elements))


def tensor_to_jsonable(coeffs: BlochCoefficients) -> dict:
    """Subset norms plus purity; sector scalars only when a split site is present."""
    if any(b.is_split for b in coeffs.bases):
        sec = split_sector_norms(coeffs)
        split_site = next(j for j, b in enumerate(coeffs.bases) if b.is_split)
        canon_site = 1 - split_site
        subsets = [
            {"v": [canon_site], "sector": "low", "norm_sq": sec.low_canonical},
            {"v": [split_site], "sector": "low", "norm_sq": sec.low_split},
            {"v": [0, 1], "sector": "low", "norm_sq": sec.low_joint},
            {"v": [canon_site], "sector": "high", "norm_sq": sec.high_canonical},
            {"v": [split_site], "sector": "high", "norm_sq": sec.high_split},
            {"v": [0, 1], "sector": "high", "norm_sq": sec.high_joint},
        ]
        return {"dims": [b.dim for b in coeffs.bases], "subsets": subsets,
                "c0": sec.c0, "c0p": sec.c0p, "purity": split_purity(coeffs)}
    subsets = [{"v": list(v), "norm_sq": n} for v, n in sorted(all_subset_norms(coeffs).items())]
    return {"dims": [b.dim for b in coeffs.bases], "subsets": subsets,
            "c0": None, "c0p": None, "purity": purity_from_tensor(coeffs)}


def report_to_jsonable(report) -> dict:
    out = {
        "inequality": report.inequality,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "slack": report.slack,
        "holds": report.holds,
    }
    if report.extras:
        out["extras"] = report.extras
    return out


def monotone_to_jsonable(result) -> dict:
    return {
        "value": result.value,
        "g": result.g,
        "converged": result.converged,
        "restarts": result.restarts,
        "delta": result.delta,
        "heuristic_max": result.heuristic_max,
    }


# ---------------------------------------------------------------------------
# figure files


def _header_lines(deterministic: bool, notes: list[str]) -> list[str]:
    lines = []
    if not deterministic:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# generated {stamp}")
    lines.extend(notes)
    return lines


def write_fig1_csv(data, path: str | Path, deterministic: bool = False) -> None:
    notes = []
    clipped_ds = [d for d in data.d_values if data.clipped[d]]
    if clipped_ds:
        notes.append(f"# clipped: negative excess floored at 0 for d in {clipped_ds}")
    cols = ["t"] + [f"excess_d{d}" for d in data.d_values]
    lines = _header_lines(deterministic, notes)
    lines.append(",".join(cols))
    for i, t in enumerate(data.t):
        row = [repr(float(t))] + [repr(float(data.excess[d][i])) for d in data.d_values]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def fig1_to_jsonable(data) -> dict:
    return {
        "case": data.case,
        "t": [float(x) for x in data.t],
        "excess": {str(d): [float(x) for x in data.excess[d]] for d in data.d_values},
        "clipped": {str(d): data.clipped[d] for d in data.d_values},
    }


def write_figA_csv(data, path: str | Path, deterministic: bool = False) -> None:
    lines = _header_lines(deterministic, [])
    lines.append("s_a,s_b,max_sab_subadd,max_sab_genpseudo")
    for i, sa in enumerate(data.s_a):
        for j, sb in enumerate(data.s_b):
            lines.append(",".join((repr(float(sa)), repr(float(sb)),
                                   repr(float(data.subadd[i, j])),
                                   repr(float(data.gen_pseudo[i, j])))))
    Path(path).write_text("\n".join(lines) + "\n")


def figA_to_jsonable(data) -> dict:
    return {
        "dims": list(data.dims),
        "s_a": [float(x) for x in data.s_a],
        "s_b": [float(x) for x in data.s_b],
        "subadd": [[float(x) for x in row] for row in data.subadd],
        "gen_pseudo": [[float(x) for x in row] for row in data.gen_pseudo],
        "contour": [[a, b] for a, b in data.contour],
        "validation": {"subadd": data.subadd_validation, "gen_pseudo": data.gen_pseudo_validation},
    }


def write_figB_csv(data, path: str | Path, deterministic: bool = False) -> None:
    lines = _header_lines(deterministic, [])
    lines.append("s_a,s_b,s_c,subadd_ok,genpseudo_ok")
    for i, sa in enumerate(data.s_a):
        for j, sb in enumerate(data.s_b):
            for k, sc in enumerate(data.s_c):
                lines.append(",".join((repr(float(sa)), repr(float(sb)), repr(float(sc)),
                                       str(int(data.subadd_ok[i, j, k])),
                                       str(int(data.gen_pseudo_ok[i, j, k])))))
    Path(path).write_text("\n".join(lines) + "\n")


def figB_to_jsonable(data) -> dict:
    return {
        "dims": list(data.dims),
        "s_a": [float(x) for x in data.s_a],
        "s_b": [float(x) for x in data.s_b],
        "s_c": [float(x) for x in data.s_c],
        "subadd_ok": data.subadd_ok.astype(int).tolist(),
        "gen_pseudo_ok": data.gen_pseudo_ok.astype(int).tolist(),
        "counts": {"subadd": data.n_subadd, "both": data.n_both, "removed": data.n_removed},
    }


# ---------------------------------------------------------------------------
# config files


def load_config(path: str | Path) -> dict[str, str]:
    """key=value lines; '#' starts a comment; later keys win."""
    out: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config {path}: line {lineno} has no '='")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ValueError(f"malformed config {path}: line {lineno} has an empty key")
        out[key] = value.strip()
    return out
