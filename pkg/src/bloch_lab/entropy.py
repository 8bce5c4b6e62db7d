"""Linear, Tsallis and Renyi entropies with dimension-weighted inequalities.

Conventions: tsallis(rho, q) = (1 - Tr rho^q)/(q - 1), whose q -> 1 limit
is the von Neumann entropy in nats; renyi(rho, alpha) =
log2(Tr rho^alpha)/(1 - alpha), so Tr rho^2 = 2^(-S_2) and the alpha -> 1
limit is the von Neumann entropy in bits.  linear_entropy = tsallis at
q = 2 = 1 - Tr rho^2.

Multi-site checks group sites: check_dim_ssa uses A = site 1, B = site 2,
C = everything else; the bipartite checks use A = site 1 versus the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import prod

import numpy as np

from .reports import InequalityReport, report_from_sides
from .states import DensityMatrix, partial_trace

EIG_CLIP_TOL = 1e-9
RANGE_TOL = 1e-12


def _eigvals_clipped(state: DensityMatrix) -> np.ndarray:
    w = np.linalg.eigvalsh(state.matrix)
    if float(w.min()) < -EIG_CLIP_TOL:
        raise ValueError(f"invalid state: eigenvalue {w.min():.3e} below -{EIG_CLIP_TOL:g}")
    return np.clip(w, 0.0, None)


def _von_neumann_nats(state: DensityMatrix) -> float:
    w = _eigvals_clipped(state)
    w = w[w > 0.0]
    return float(-(w * np.log(w)).sum())


def _trace_power(state: DensityMatrix, q: float) -> float:
    if q == 2.0:
        return state.purity()
    if float(q).is_integer() and q >= 1:
        return float(np.trace(np.linalg.matrix_power(state.matrix, int(q))).real)
    w = _eigvals_clipped(state)
    w = w[w > 0.0]
    return float((w ** q).sum())


def linear_entropy(state: DensityMatrix) -> float:
    """1 - Tr(rho^2)."""
    return 1.0 - state.purity()


def tsallis(state: DensityMatrix, q: float) -> float:
    """(1 - Tr rho^q)/(q - 1); q = 1 returns the von Neumann entropy in nats."""
    q = float(q)
    if not q > 0.0:
        raise ValueError(f"invalid parameter q={q!r}: need q > 0")
    if q == 1.0:
        return _von_neumann_nats(state)
    return (1.0 - _trace_power(state, q)) / (q - 1.0)


def renyi(state: DensityMatrix, alpha: float) -> float:
    """log2(Tr rho^alpha)/(1 - alpha); alpha = 1 returns von Neumann in bits."""
    alpha = float(alpha)
    if not alpha > 0.0:
        raise ValueError(f"invalid parameter alpha={alpha!r}: need alpha > 0")
    if alpha == 1.0:
        return _von_neumann_nats(state) / np.log(2.0)
    return float(np.log2(_trace_power(state, alpha)) / (1.0 - alpha))


@dataclass
class EntropyVector:
    """Linear entropies of every non-empty marginal, keyed by site subset."""

    dims: tuple[int, ...]
    values: dict[tuple[int, ...], float]


def entropy_vector(state: DensityMatrix) -> EntropyVector:
    n = state.n_sites
    values: dict[tuple[int, ...], float] = {}
    for r in range(1, n + 1):
        for v in combinations(range(n), r):
            values[v] = linear_entropy(partial_trace(state, v))
    return EntropyVector(dims=state.dims, values=values)


def _sl(state: DensityMatrix, keep) -> float:
    return linear_entropy(partial_trace(state, keep))


def check_dim_ssa(state: DensityMatrix, state_ref: str | None = None) -> InequalityReport:
    """Dimension-weighted strong-subadditivity form of the linear entropy.

    S(ABC) + S(C)/(dA dB) <= S(AC)/dB + S(BC)/dA + (dA dB + 1 - dA - dB)/(dA dB)
    with A = site 1, B = site 2, C = the rest.  Tight at maximal mixedness.
    """
    if state.n_sites < 3:
        raise ValueError(f"unsupported shape: need at least 3 sites, got {state.n_sites}")
    da, db = state.dims[0], state.dims[1]
    c_sites = tuple(range(2, state.n_sites))
    const = (da * db + 1 - da - db) / (da * db)
    lhs = linear_entropy(state) + _sl(state, c_sites) / (da * db)
    rhs = _sl(state, (0,) + c_sites) / db + _sl(state, (1,) + c_sites) / da + const
    return report_from_sides("dim-ssa", lhs, rhs, state_ref=state_ref,
                             extras={"constant": const})


def dim_ssa_vs_subadd(state: DensityMatrix, state_ref: str | None = None) -> InequalityReport:
    """Is the dimension-weighted bound on S(ABC) sharper than padded subadditivity?

    Sharper exactly when (1 - 1/dB) S(AC) + S(B) - S(BC)/dA + S(C)/(dA dB)
    exceeds the constant (dA dB + 1 - dA - dB)/(dA dB); the report's slack
    is that margin (negative means padded subadditivity wins there).
    """
    if state.n_sites < 3:
        raise ValueError(f"unsupported shape: need at least 3 sites, got {state.n_sites}")
    da, db = state.dims[0], state.dims[1]
    c_sites = tuple(range(2, state.n_sites))
    const = (da * db + 1 - da - db) / (da * db)
    comparison = ((1.0 - 1.0 / db) * _sl(state, (0,) + c_sites) + _sl(state, (1,))
                  - _sl(state, (1,) + c_sites) / da + _sl(state, c_sites) / (da * db))
    return report_from_sides("dim-ssa-vs-subadd", const, comparison, state_ref=state_ref,
                             extras={"comparison": comparison, "constant": const})


def check_subadditivity(state: DensityMatrix, q: float = 2.0,
                        state_ref: str | None = None) -> InequalityReport:
    """S_q(A) + S_q(B) >= S_q(AB) for q >= 1, with A = site 1, B = the rest."""
    if state.n_sites < 2:
        raise ValueError(f"unsupported shape: need at least 2 sites, got {state.n_sites}")
    q = float(q)
    if q < 1.0:
        raise ValueError(f"invalid parameter q={q!r}: subadditivity needs q >= 1")
    rest = tuple(range(1, state.n_sites))
    lhs = tsallis(state, q)
    rhs = tsallis(partial_trace(state, (0,)), q) + tsallis(partial_trace(state, rest), q)
    return report_from_sides("subadd", lhs, rhs, state_ref=state_ref, extras={"q": q})


def check_gen_pseudo_additivity(state: DensityMatrix, state_ref: str | None = None) -> InequalityReport:
    """Correlated lower bound on S(A) + S(B) - S(A) S(B) from S(AB).

    1 - (dA dB / 4)(1 - S(AB) + 1/(dA dB))^2 <= S(A) + S(B) - S(A) S(B),
    tight at maximal mixedness; A = site 1, B = the rest.
    """
    if state.n_sites < 2:
        raise ValueError(f"unsupported shape: need at least 2 sites, got {state.n_sites}")
    m = state.dim
    rest = tuple(range(1, state.n_sites))
    s_ab = linear_entropy(state)
    s_a = _sl(state, (0,))
    s_b = _sl(state, rest)
    lhs = 1.0 - (m / 4.0) * (1.0 - s_ab + 1.0 / m) ** 2
    rhs = s_a + s_b - s_a * s_b
    return report_from_sides("gen-pseudo", lhs, rhs, state_ref=state_ref,
                             extras={"s_ab": s_ab, "s_a": s_a, "s_b": s_b})


def pseudo_additivity_residual(state_a: DensityMatrix, state_b: DensityMatrix, q: float) -> float:
    """S_q(A x B) - S_q(A) - S_q(B) - (1-q) S_q(A) S_q(B); identically 0 up to float."""
    from .states import tensor

    q = float(q)
    if not q > 0.0 or q == 1.0:
        raise ValueError(f"invalid parameter q={q!r}: need q > 0, q != 1")
    sa = tsallis(state_a, q)
    sb = tsallis(state_b, q)
    joint = tsallis(tensor(state_a, state_b), q)
    return float(joint - sa - sb - (1.0 - q) * sa * sb)


# ---------------------------------------------------------------------------
# attainable-region surfaces over marginal entropies


def _check_marginal_range(s: float, d: int, name: str) -> None:
    if not -RANGE_TOL <= s <= 1.0 - 1.0 / d + RANGE_TOL:
        raise ValueError(f"out-of-range marginal {name}={s!r}: need 0 <= {name} <= 1 - 1/{d}")


def max_sab_subadd(s_a: float, s_b: float, dims) -> float:
    """Largest S(AB) allowed by q = 2 subadditivity: min(sA + sB, physical cap)."""
    da, db = (int(d) for d in dims)
    _check_marginal_range(s_a, da, "s_a")
    _check_marginal_range(s_b, db, "s_b")
    m = da * db
    return float(min(s_a + s_b, 1.0 - 1.0 / m))


def max_sab_genpseudo(s_a: float, s_b: float, dims) -> float:
    """Largest S(AB) allowed by the correlated lower bound.

    1 + 1/m - 2 sqrt((1-sA)(1-sB)/m) capped at the physical maximum
    1 - 1/m, with m = dA dB.
    """
    da, db = (int(d) for d in dims)
    _check_marginal_range(s_a, da, "s_a")
    _check_marginal_range(s_b, db, "s_b")
    m = da * db
    root = 1.0 + 1.0 / m - 2.0 * np.sqrt((1.0 - s_a) * (1.0 - s_b) / m)
    return float(min(root, 1.0 - 1.0 / m))


def validate_surface(kind: str, dims, resolution: int = 101) -> float:
    """Max |closed form - bisection root| of the surface over a marginal grid.

    The closed forms above are only trusted once this agrees to tolerance;
    the acceptance suite runs it at resolution 101.
    """
    da, db = (int(d) for d in dims)
    if resolution < 2:
        raise ValueError(f"invalid resolution {resolution}: need >= 2")
    m = da * db
    cap = 1.0 - 1.0 / m
    sa = np.linspace(0.0, 1.0 - 1.0 / da, resolution)
    sb = np.linspace(0.0, 1.0 - 1.0 / db, resolution)
    SA, SB = np.meshgrid(sa, sb, indexing="ij")

    if kind == "subadd":
        def slack(S):
            return SA + SB - S

        closed = np.minimum(SA + SB, cap)
    elif kind == "gen-pseudo":
        def slack(S):
            return SA + SB - SA * SB - (1.0 - (m / 4.0) * (1.0 - S + 1.0 / m) ** 2)

        closed = np.minimum(1.0 + 1.0 / m - 2.0 * np.sqrt((1.0 - SA) * (1.0 - SB) / m), cap)
    else:
        raise ValueError(f"unknown surface kind {kind!r}")

    # slack is decreasing in S on [0, cap]; bisect for its root, capping
    # where the inequality still holds at the physical maximum
    lo = np.zeros_like(SA)
    hi = np.full_like(SA, cap)
    hold_at_cap = slack(hi) >= 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        ok = slack(mid) >= 0.0
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    root = np.where(hold_at_cap, cap, 0.5 * (lo + hi))
    return float(np.abs(root - closed).max())


@dataclass(frozen=True)
class TripleVerdict:
    """Which constraint families admit a marginal entropy triple."""

    subadd: bool
    gen_pseudo: bool


def classify_grid(s_a, s_b, s_c, dims):
    """Vectorized classification of triples under the globally-pure convention.

    The joint entropy of each pair is identified with the entropy of the
    complementary site (S(AB) = S(C) and cyclic); returns boolean arrays
    (subadd_ok, gen_pseudo_ok) broadcast over the inputs.
    """
    da, db, dc = (int(d) for d in dims)
    s_a, s_b, s_c = np.asarray(s_a, float), np.asarray(s_b, float), np.asarray(s_c, float)
    tol = RANGE_TOL
    subadd = ((s_c <= s_a + s_b + tol)
              & (s_a <= s_b + s_c + tol)
              & (s_b <= s_a + s_c + tol))

    def pair_ok(dx, dy, sx, sy, sz):
        mm = dx * dy
        lhs = 1.0 - (mm / 4.0) * (1.0 - sz + 1.0 / mm) ** 2
        return lhs <= sx + sy - sx * sy + tol

    genp = (pair_ok(da, db, s_a, s_b, s_c)
            & pair_ok(db, dc, s_b, s_c, s_a)
            & pair_ok(da, dc, s_a, s_c, s_b))
    return subadd, genp


def classify_triple(s_a: float, s_b: float, s_c: float, dims) -> TripleVerdict:
    """Scalar wrapper over classify_grid with marginal-range validation."""
    da, db, dc = (int(d) for d in dims)
    _check_marginal_range(s_a, da, "s_a")
    _check_marginal_range(s_b, db, "s_b")
    _check_marginal_range(s_c, dc, "s_c")
    subadd, genp = classify_grid(s_a, s_b, s_c, dims)
    return TripleVerdict(subadd=bool(subadd), gen_pseudo=bool(genp))
