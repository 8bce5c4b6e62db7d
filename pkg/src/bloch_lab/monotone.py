"""Correlation monotone over bipartitions, with monogamy-style checks.

For a bipartition Omega | Sigma of (a marginal of) a state, the raw
correlation mass is

* equal group dimensions, or a composite group on either side: the sum of
  ||T^v||^2 over all subsets v that meet both groups (unitarily invariant,
  so no maximization is needed);
* two single sites of unequal dimension: the maximum over basis changes on
  the larger site of the doubly-traceless block of coefficients against a
  split basis with cut equal to the smaller dimension.  The maximum is
  searched by random-restart coordinate ascent over complex Givens
  rotations of the larger site's unitary.

The reported value divides the raw mass by a normalization g chosen by a
``NormalizationPolicy``; by default g = d_min^2 - 1 between single sites
(unit range) and g = (d_Omega - 1)(d_Sigma - 1) when a group is composite
(separable bound).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .correlation import (bases_with_split, bloch_coefficients, cross_norm_sum,
                          split_sector_norms, tensor_norm_sq)
from .errors import NotPureError
from .reports import InequalityReport, report_from_sides
from .states import DensityMatrix, derive_seed, partial_trace

PURE_TOL = 1e-10


@dataclass(frozen=True)
class NormalizationPolicy:
    """How to pick the denominator g.

    rule "unit-range" gives d_min^2 - 1, "separable-bound" gives
    (d_Omega - 1)(d_Sigma - 1), "explicit" uses ``value`` directly.
    """

    rule: str = "unit-range"
    value: float | None = None

    def resolve(self, d_omega: int, d_sigma: int) -> float:
        if self.rule == "unit-range":
            m = min(d_omega, d_sigma)
            return float(m * m - 1)
        if self.rule == "separable-bound":
            return float((d_omega - 1) * (d_sigma - 1))
        if self.rule == "explicit":
            if self.value is None or self.value <= 0:
                raise ValueError(f"explicit normalization needs a positive value, got {self.value!r}")
            return float(self.value)
        raise ValueError(f"unknown normalization rule {self.rule!r}")


def default_policy(omega, sigma) -> NormalizationPolicy:
    """Unit range between single sites, separable bound for composite groups."""
    if len(omega) == 1 and len(sigma) == 1:
        return NormalizationPolicy("unit-range")
    return NormalizationPolicy("separable-bound")


@dataclass(frozen=True)
class OptimizerConfig:
    """Coordinate-ascent settings for the split-basis maximization."""

    restarts: int = 32
    max_sweeps: int = 500
    tol: float = 1e-10
    seed: int = 0


@dataclass
class MonotoneResult:
    """Monotone value plus how it was obtained.

    ``unitary`` is the basis change on the larger site whose first ``cut``
    columns span the selected subspace (None when no optimization ran).
    ``delta`` is the weighted coefficient mass discarded outside that
    subspace; it vanishes at the optimum for pure states.  ``heuristic_max``
    marks optimized values on mixed states, where coordinate ascent only
    certifies a lower bound on the true maximum.
    """

    value: float
    g: float
    raw: float
    converged: bool
    restarts: int
    delta: float
    heuristic_max: bool
    unitary: np.ndarray | None
    partition: tuple[tuple[int, ...], tuple[int, ...]]


def _check_partition(state: DensityMatrix, partition):
    try:
        omega, sigma = partition
    except (TypeError, ValueError) as exc:
        raise ValueError(f"invalid partition {partition!r}: need (omega, sigma)") from exc
    omega = tuple(sorted(int(s) for s in omega))
    sigma = tuple(sorted(int(s) for s in sigma))
    n = state.n_sites
    if not omega or not sigma:
        raise ValueError("invalid partition: both groups must be non-empty")
    allsites = omega + sigma
    if len(set(allsites)) != len(allsites):
        raise ValueError(f"invalid partition: groups {omega} and {sigma} overlap")
    if any(not 0 <= s < n for s in allsites):
        raise ValueError(f"invalid partition: site out of range for {n} sites")
    return omega, sigma


# ---------------------------------------------------------------------------
# split-basis objective and optimizer
#
# With P the rank-c projector onto the selected subspace of the larger site
# B, the doubly-traceless coefficient mass equals
#
#   Q(P) = c d_A Tr(rho (1xP) rho (1xP)) - d_A Tr(N^2) - c Tr(rho_B P rho_B P)
#          + Tr(rho_B P)^2,          N = Tr_B(rho (1xP)),
#
# which is quadratic in P, so a Givens move on two columns of U changes Q
# by a closed-form trigonometric polynomial in the move angles.

_GEN_K = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
_GEN_E1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_GEN_E2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


class _SplitObjective:
    def __init__(self, matrix: np.ndarray, d_small: int, d_large: int, small_first: bool):
        dA, dB = d_small, d_large
        shaped = (matrix.reshape(dA, dB, dA, dB).transpose(0, 2, 1, 3) if small_first
                  else matrix.reshape(dB, dA, dB, dA).transpose(1, 3, 0, 2))
        # R4[a, a', b, b'] = rho[(a b), (a' b')] with a on the small site
        self.R4 = np.ascontiguousarray(shaped)
        self.rho_B = np.einsum("aabc->bc", self.R4)
        self.dA = dA
        self.dB = dB
        self.c = dA

    def value(self, P: np.ndarray) -> float:
        R4, rho_B, c, dA = self.R4, self.rho_B, self.c, self.dA
        t1 = np.einsum("abmn,np,bapq,qm->", R4, P, R4, P).real
        N = np.einsum("abmn,nm->ab", R4, P)
        t2 = np.einsum("ab,ba->", N, N).real
        BP = rho_B @ P
        t3 = np.trace(BP @ BP).real
        t4 = np.trace(BP).real ** 2
        return float(c * dA * t1 - dA * t2 - c * t3 + t4)

    def gradient(self, P: np.ndarray) -> tuple[np.ndarray, float]:
        """Hermitian Phi with dQ = Tr(Phi dP); also returns Q(P) = Tr(Phi P)/2."""
        R4, rho_B, c, dA = self.R4, self.rho_B, self.c, self.dA
        phi1 = np.einsum("yxmp,pq,xyqn->mn", R4, P, R4)
        NP = np.einsum("abmn,nm->ab", R4, P)
        phi2 = np.einsum("yx,xymp->mp", NP, R4)
        phi3 = rho_B @ P @ rho_B
        phi4 = np.trace(rho_B @ P).real * rho_B
        phi = 2.0 * (c * dA * phi1 - dA * phi2 - c * phi3 + phi4)
        q0 = 0.5 * np.trace(phi @ P).real
        return phi, float(q0)

    def move_forms(self, phi: np.ndarray, u: np.ndarray, v: np.ndarray):
        """Linear and quadratic coefficients of a Givens move on columns (u, v)."""
        phi_uv = complex(u.conj() @ (phi @ v))
        a_k = float((v.conj() @ (phi @ v)).real - (u.conj() @ (phi @ u)).real)
        a_1 = 2.0 * phi_uv.real
        a_2 = -2.0 * phi_uv.imag

        W = np.stack([u, v], axis=1)
        Rt = np.einsum("xymn,mi,nj->xyij", self.R4, W.conj(), W)
        rho_t = W.conj().T @ self.rho_B @ W
        c, dA = self.c, self.dA

        def bil(X, Y) -> float:
            t1 = np.einsum("xyab,bc,yxcd,da->", Rt, X, Rt, Y).real
            NX = np.einsum("xyab,ba->xy", Rt, X)
            NY = np.einsum("xyab,ba->xy", Rt, Y)
            t2 = np.einsum("xy,yx->", NX, NY).real
            t3 = np.trace(rho_t @ X @ rho_t @ Y).real
            t4 = np.trace(rho_t @ X).real * np.trace(rho_t @ Y).real
            return float(c * dA * t1 - dA * t2 - c * t3 + t4)

        gens = (_GEN_K, _GEN_E1, _GEN_E2)
        b = np.empty((3, 3))
        for i in range(3):
            for j in range(i, 3):
                b[i, j] = b[j, i] = bil(gens[i], gens[j])
        return (a_k, a_1, a_2), b


_TH_GRID = np.linspace(0.0, np.pi, 49)
_PH_GRID = np.linspace(0.0, 2.0 * np.pi, 40, endpoint=False)


def _best_move(lin, quad) -> tuple[float, float, float]:
    """Maximize the move polynomial over (theta, phi); returns (gain, theta, phi)."""
    a_k, a_1, a_2 = lin
    th, ph = _TH_GRID, _PH_GRID
    th_span, ph_span = np.pi, 2.0 * np.pi
    best = (0.0, 0.0, 0.0)
    for _ in range(5):
        s = np.sin(th) ** 2
        t = np.sin(th) * np.cos(th)
        c_ph, s_ph = np.cos(ph), np.sin(ph)
        lin_ph = a_1 * c_ph + a_2 * s_ph
        cross_ph = quad[0, 1] * c_ph + quad[0, 2] * s_ph
        quad_ph = quad[1, 1] * c_ph ** 2 + 2.0 * quad[1, 2] * c_ph * s_ph + quad[2, 2] * s_ph ** 2
        gain = (a_k * s + quad[0, 0] * s ** 2)[:, None] \
            + t[:, None] * lin_ph[None, :] \
            + (2.0 * s * t)[:, None] * cross_ph[None, :] \
            + (t ** 2)[:, None] * quad_ph[None, :]
        flat = int(np.argmax(gain))
        i, j = divmod(flat, gain.shape[1])
        if gain[i, j] > best[0]:
            best = (float(gain[i, j]), float(th[i]), float(ph[j]))
        th_span /= 6.0
        ph_span /= 6.0
        th = np.linspace(best[1] - th_span / 2, best[1] + th_span / 2, 25)
        ph = np.linspace(best[2] - ph_span / 2, best[2] + ph_span / 2, 25)
    return best


def _ascend(obj: _SplitObjective, U0: np.ndarray, config: OptimizerConfig) -> tuple[float, np.ndarray, bool]:
    c, dB = obj.c, obj.dB
    U = U0.copy()
    P = U[:, :c] @ U[:, :c].conj().T
    prev = obj.value(P)
    converged = False
    for _ in range(config.max_sweeps):
        for p in range(c):
            for q in range(c, dB):
                phi, _ = obj.gradient(P)
                u, v = U[:, p], U[:, q]
                lin, quad = obj.move_forms(phi, u, v)
                gain, theta, ph = _best_move(lin, quad)
                if gain <= 0.0:
                    continue
                ct, st = np.cos(theta), np.sin(theta)
                e = np.exp(1j * ph)
                new_u = ct * u + e * st * v
                new_v = -np.conj(e) * st * u + ct * v
                U[:, p], U[:, q] = new_u, new_v
                P = U[:, :c] @ U[:, :c].conj().T
        cur = obj.value(P)
        if cur - prev < config.tol:
            converged = True
            prev = max(cur, prev)
            break
        prev = cur
    return float(prev), U, converged


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    ph = np.diag(r)
    return q * (ph / np.abs(ph))[None, :]


def _optimize_split(obj: _SplitObjective, config: OptimizerConfig) -> tuple[float, np.ndarray, bool, int]:
    w, vecs = np.linalg.eigh(obj.rho_B)
    # restart 0: columns ordered by descending eigenvalue of rho_B;
    # exact for pure states, where the top-c eigenvectors span the Schmidt subspace
    inits = [vecs[:, np.argsort(-w)]]
    best_q, best_u, best_conv = -np.inf, None, False
    restarts = max(1, int(config.restarts))
    for r in range(restarts):
        if r < len(inits):
            U0 = inits[r]
        else:
            rng = np.random.Generator(np.random.PCG64(derive_seed(config.seed, r)))
            U0 = _haar_unitary(obj.dB, rng)
        q, U, conv = _ascend(obj, U0, config)
        if q > best_q:
            best_q, best_u, best_conv = q, U, conv
    return best_q, best_u, best_conv, restarts


# ---------------------------------------------------------------------------
# the monotone itself


def correlation_monotone(state: DensityMatrix, partition, policy: NormalizationPolicy | None = None,
                         config: OptimizerConfig | None = None) -> MonotoneResult:
    """Normalized correlation mass across a bipartition of (some) sites.

    Sites outside the partition are traced out first.  See the module
    docstring for when the split-basis maximization runs.
    """
    omega, sigma = _check_partition(state, partition)
    considered = tuple(sorted(omega + sigma))
    if considered != tuple(range(state.n_sites)):
        state = partial_trace(state, considered)
        remap = {site: i for i, site in enumerate(considered)}
        omega = tuple(remap[s] for s in omega)
        sigma = tuple(remap[s] for s in sigma)
    dims = state.dims
    d_om = prod(dims[s] for s in omega)
    d_sg = prod(dims[s] for s in sigma)
    if policy is None:
        policy = default_policy(omega, sigma)
    g = policy.resolve(d_om, d_sg)

    if len(omega) > 1 or len(sigma) > 1 or d_om == d_sg:
        coeffs = bloch_coefficients(state)
        raw = cross_norm_sum(coeffs, omega, sigma)
        return MonotoneResult(value=raw / g, g=g, raw=raw, converged=True, restarts=0,
                              delta=0.0, heuristic_max=False, unitary=None,
                              partition=(omega, sigma))

    # single site vs single site, unequal dimensions: optimize the split
    small_site, large_site = (omega[0], sigma[0]) if d_om < d_sg else (sigma[0], omega[0])
    small_first = small_site < large_site
    d_small = dims[small_site]
    d_large = dims[large_site]
    obj = _SplitObjective(state.matrix, d_small, d_large, small_first)
    config = config or OptimizerConfig()
    _, U, converged, restarts = _optimize_split(obj, config)

    # evaluate the reported value from actual split coefficients at U
    rot = np.kron(U, np.eye(d_small)) if not small_first else np.kron(np.eye(d_small), U)
    rotated = DensityMatrix(dims, rot.conj().T @ state.matrix @ rot)
    bases = bases_with_split(dims, large_site, d_small)
    norms = split_sector_norms(bloch_coefficients(rotated, bases))
    raw = norms.low_joint
    high_mass = norms.c0p + norms.high_canonical + norms.high_split + norms.high_joint
    delta = (d_small / (d_large - d_small)) * high_mass
    return MonotoneResult(value=raw / g, g=g, raw=raw, converged=converged, restarts=restarts,
                          delta=float(delta), heuristic_max=not state.is_pure(),
                          unitary=U, partition=(omega, sigma))


def monotone_pure_exact(state: DensityMatrix, policy: NormalizationPolicy | None = None) -> float:
    """Closed-form monotone for a pure two-site state via its Schmidt spectrum.

    raw = m^2 + 1 - 2 m Tr(rho_A^2) with m the smaller dimension; the
    optimizer reproduces this and never exceeds it.
    """
    if state.n_sites != 2:
        raise ValueError(f"unsupported shape: need 2 sites, got {state.n_sites}")
    if not state.is_pure(PURE_TOL):
        raise NotPureError(f"state purity {state.purity():.12f} is below 1 - {PURE_TOL:g}")
    vec = np.linalg.eigh(state.matrix)[1][:, -1]
    sv = np.linalg.svd(vec.reshape(state.dims), compute_uv=False)
    p_red = float((sv ** 4).sum())
    m = min(state.dims)
    raw = m * m + 1.0 - 2.0 * m * p_red
    if policy is None:
        policy = default_policy((0,), (1,))
    g = policy.resolve(state.dims[0], state.dims[1])
    return raw / g


# ---------------------------------------------------------------------------
# inequality checks


def _require_three_sites(state: DensityMatrix, name: str, equal_first_pair: bool) -> None:
    if state.n_sites != 3:
        raise ValueError(f"unsupported shape for {name}: need 3 sites, got {state.n_sites}")
    if equal_first_pair and state.dims[0] != state.dims[1]:
        raise ValueError(f"unsupported shape for {name}: need equal first-pair dimensions, got {state.dims}")


def check_thm1_i(state: DensityMatrix, config: OptimizerConfig | None = None,
                 state_ref: str | None = None) -> InequalityReport:
    """Monogamy of the monotone: T(A|E) + T(B|E) <= (g_ABE/min(g_AE, g_BE)) T(AB|E)."""
    _require_three_sites(state, "monogamy check", equal_first_pair=True)
    t_ae = correlation_monotone(state, ((0,), (2,)), config=config)
    t_be = correlation_monotone(state, ((1,), (2,)), config=config)
    t_abe = correlation_monotone(state, ((0, 1), (2,)))
    coeff = t_abe.g / min(t_ae.g, t_be.g)
    lhs = t_ae.value + t_be.value
    rhs = coeff * t_abe.value
    return report_from_sides("thm1i", lhs, rhs, state_ref=state_ref,
                             extras={"t_ae": t_ae.value, "t_be": t_be.value,
                                     "t_abe": t_abe.value, "coefficient": coeff})


def eve_bound(state_ab: DensityMatrix, d_e: int) -> float:
    """Upper bound on T(AB|E) from the AB marginal alone (d_A = d_B = d).

    (d^4 - 1 - 2||T^A||^2 - 2||T^B||^2 - 2||T^AB||^2) / ((d^2-1)(d_E-1)).
    """
    if state_ab.n_sites != 2 or state_ab.dims[0] != state_ab.dims[1]:
        raise ValueError(f"unsupported shape for eve bound: need two equal sites, got {state_ab.dims}")
    if d_e < 2:
        raise ValueError(f"invalid environment dimension {d_e}: need d_E >= 2")
    d = state_ab.dims[0]
    coeffs = bloch_coefficients(state_ab)
    na = tensor_norm_sq(coeffs, (0,))
    nb = tensor_norm_sq(coeffs, (1,))
    nab = tensor_norm_sq(coeffs, (0, 1))
    g_abe = (d * d - 1) * (d_e - 1)
    return float((d ** 4 - 1 - 2.0 * (na + nb + nab)) / g_abe)


def check_thm1_ii(state: DensityMatrix, state_ref: str | None = None) -> InequalityReport:
    """T(AB|E) cannot exceed the bound computed from the AB marginal."""
    _require_three_sites(state, "marginal bound check", equal_first_pair=True)
    d_e = state.dims[2]
    t_abe = correlation_monotone(state, ((0, 1), (2,)))
    bound = eve_bound(partial_trace(state, (0, 1)), d_e)
    return report_from_sides("thm1ii", t_abe.value, bound, state_ref=state_ref,
                             extras={"t_abe": t_abe.value, "g": t_abe.g})


def excess(value: float, d: int) -> float:
    """Scaled exceedance d (value - 1) of the separable ceiling."""
    return float(d) * (float(value) - 1.0)


def check_lemma5(state: DensityMatrix, config: OptimizerConfig | None = None,
                 state_ref: str | None = None) -> InequalityReport:
    """Symmetry T(A|B) = T(B|A) and growth (g_AB/g_ABE) T(A|B) <= T(A|BE)."""
    if state.n_sites != 3:
        raise ValueError(f"unsupported shape: need 3 sites, got {state.n_sites}")
    t_ab = correlation_monotone(state, ((0,), (1,)), config=config)
    t_ba = correlation_monotone(state, ((1,), (0,)), config=config)
    t_abe = correlation_monotone(state, ((0,), (1, 2)))
    gap = abs(t_ab.value - t_ba.value)
    lhs = (t_ab.g / t_abe.g) * t_ab.value
    return report_from_sides("lemma5", lhs, t_abe.value, state_ref=state_ref,
                             extra_holds=gap <= 1e-9,
                             extras={"symmetry_gap": gap, "t_ab": t_ab.value,
                                     "t_a_be": t_abe.value})


def lemma6_bounds(d: int, d_e: int, t: float) -> tuple[float, float]:
    """Bounds on the local Bloch mass ||T^A||^2 + ||T^B||^2 given t = T(A|B).

    Returns (lower, upper) = (max(0, d^2/d_E - 1 - (d^2-1) t),
    min(2d - 2, (d^2-1)(1 - t))) for a d x d pair with a d_E-dimensional
    purifying environment.
    """
    if d < 2:
        raise ValueError(f"invalid dimension {d}: need d >= 2")
    if d_e < 1:
        raise ValueError(f"invalid environment dimension {d_e}: need d_E >= 1")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"monotone value {t!r} outside [0, 1]")
    g = d * d - 1
    upper = min(2.0 * d - 2.0, g * (1.0 - t))
    lower = max(0.0, d * d / d_e - 1.0 - g * t)
    return float(lower), float(upper)


def check_lemma6(state_ab: DensityMatrix, d_e: int | None = None,
                 state_ref: str | None = None) -> InequalityReport:
    """Sandwich ||T^A||^2 + ||T^B||^2 between the bounds set by T(A|B)."""
    if state_ab.n_sites != 2 or state_ab.dims[0] != state_ab.dims[1]:
        raise ValueError(f"unsupported shape for sandwich check: need two equal sites, got {state_ab.dims}")
    d = state_ab.dims[0]
    if d_e is None:
        d_e = d * d
    coeffs = bloch_coefficients(state_ab)
    local = tensor_norm_sq(coeffs, (0,)) + tensor_norm_sq(coeffs, (1,))
    t = correlation_monotone(state_ab, ((0,), (1,))).value
    lower, upper = lemma6_bounds(d, d_e, min(max(t, 0.0), 1.0))
    slack = min(local - lower, upper - local)
    return InequalityReport(
        inequality="lemma6",
        lhs=lower,
        rhs=upper,
        slack=float(slack),
        holds=bool(slack >= -1e-9),
        state_ref=state_ref,
        extras={"local_mass": float(local), "t": float(t), "d_e": int(d_e)},
    )
