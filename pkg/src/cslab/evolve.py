"""Time integration of the flow and its spectral diagnostics.

The modal ODE for u(x) = sum u_hat(n) e^{inx} is

    d/dt u_hat(n) = -i n^2 u_hat(n) +/- 2i [ (D Pi(|u|^2)) u ]_n,

(+ focusing, - defocusing).  The linear symbol -i n^2 is purely imaginary,
so the integrating-factor (Lawson) RK4 in the rotating frame e^{i n^2 t}
treats it exactly; only the nonlinearity is stepped.  The mean u_hat(0) is
conserved to the last bit by the scheme, since the nonlinearity has no
0-mode.

The evolving orthonormal basis g_n^t solves d/dt g = B_{u(t)} g with
g|0 = f_n, an eigenvector of the Lax operator of u(0); B is the
skew-adjoint half of the Lax pair.  Its matrix is never formed: B is
applied to the tracked columns by FFT convolutions, and u at the RK4 stage
times is re-derived from the stored trajectory (exact co-integration when
every step was recorded, cubic interpolation in the rotating frame
otherwise).  The resulting basis obeys explicit phase laws
(e.g. <u(t)|g_n^t> = <u0|f_n> e^{-i lambda_n^2 t}) that serve as
end-to-end integrator checks.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    BasisDrift,
    BlowupDetected,
    DimensionMismatch,
    InvalidParameter,
    NotATravelingWave,
    OutsideTheory,
    UnderResolved,
)
from .hardy import HardyCoeffs, _fft_convolve
from .lax import build_lax, spectral_decompose, _check_sign

__all__ = [
    "EvolveConfig",
    "Trajectory",
    "ConservationReport",
    "EvolvedBasis",
    "evolve",
    "conservation_report",
    "measure_speed",
    "evolve_basis",
    "phase_law_report",
]

logger = logging.getLogger(__name__)

_BLOWUP_DEFAULT = 1e6
_TAIL_REL_DEFAULT = 1e-8


@dataclass(frozen=True)
class EvolveConfig:
    """Integration parameters; scheme is fixed to integrating-factor RK4."""

    sign: str
    K: int
    T: float
    dt: float = 1e-4
    record_every: int = 1
    scheme: str = "lawson_rk4"
    blowup_threshold: float = _BLOWUP_DEFAULT
    tail_rel_tol: float = _TAIL_REL_DEFAULT

    def __post_init__(self) -> None:
        _check_sign(self.sign)
        if self.K < 2:
            raise InvalidParameter("K must be >= 2")
        if self.dt <= 0 or self.T < 0:
            raise InvalidParameter("need dt > 0 and T >= 0")
        if self.record_every < 1:
            raise InvalidParameter("record_every must be >= 1")
        if self.scheme != "lawson_rk4":
            raise InvalidParameter(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True)
class Trajectory:
    """Recorded snapshots with per-snapshot diagnostics."""

    cfg: EvolveConfig
    times: NDArray[np.float64]
    states: tuple
    l2: NDArray[np.float64]
    mean: NDArray[np.complex128]
    tail: NDArray[np.float64]

    def coeff_matrix(self) -> NDArray[np.complex128]:
        """Snapshots stacked as rows (n_snapshots, K)."""
        return np.vstack([s.coeffs for s in self.states])


def _nonlinear(c: NDArray[np.complex128], s2i: complex) -> NDArray[np.complex128]:
    """+/- 2i (D Pi(|u|^2)) u on a raw coefficient vector."""
    K = c.shape[0]
    w = _fft_convolve(c, np.conj(c[::-1]))[K - 1:]
    dw = np.arange(K) * w
    return s2i * _fft_convolve(dw, c)[:K]


def _tail_rel(c: NDArray[np.complex128], frac: int = 8) -> float:
    total = float(np.sum(np.abs(c) ** 2))
    if total == 0.0:
        return 0.0
    K = c.shape[0]
    return float(np.sum(np.abs(c[K - K // frac:]) ** 2)) / total


def evolve(u0: HardyCoeffs, cfg: EvolveConfig) -> Trajectory:
    """Integrate the flow from u0 over [0, T].

    The step count is round(T/dt) with the step adjusted to land exactly on
    T.  Snapshots (state + L2 norm, mean, top-K/8 tail energy) are recorded
    every ``record_every`` steps and always at the final time.  Raises
    BlowupDetected when any |u_hat| passes the blowup threshold and
    UnderResolved when the relative tail energy of a recorded state exceeds
    ``tail_rel_tol`` (or when u0 itself carries energy above mode K/2).
    """
    if u0.K != cfg.K:
        raise DimensionMismatch(f"u0 has K={u0.K}, config says {cfg.K}")
    c = u0.coeffs.astype(np.complex128).copy()
    K = cfg.K
    head = float(np.sum(np.abs(c[K // 2:]) ** 2))
    total = float(np.sum(np.abs(c) ** 2))
    if total > 0 and head / total > 1e-10:
        raise UnderResolved(
            f"u0 carries {head / total:.3e} of its energy above mode K/2; "
            "re-truncate with more headroom")
    if cfg.sign == "focusing" and np.sqrt(total) >= 1.0:
        warnings.warn(
            f"focusing norm {np.sqrt(total):.3f} >= 1: outside the "
            "global-well-posedness smallness condition",
            OutsideTheory, stacklevel=2)
    if cfg.dt * (K - 1) ** 2 > 2.0:
        logger.info("dt*(K-1)^2 = %.2f exceeds the dispersive-resolution "
                    "advisory bound 2 (linear part is exact regardless)",
                    cfg.dt * (K - 1) ** 2)

    n_steps = max(1, int(round(cfg.T / cfg.dt))) if cfg.T > 0 else 0
    h = cfg.T / n_steps if n_steps else cfg.dt
    s2i = 2j if cfg.sign == "focusing" else -2j
    n2 = np.arange(K, dtype=float) ** 2
    E1 = np.exp(-1j * n2 * (h / 2.0))
    E2 = E1 * E1

    times = [0.0]
    states = [HardyCoeffs(c.copy())]
    for i in range(n_steps):
        k1 = _nonlinear(c, s2i)
        u2 = E1 * (c + (h / 2.0) * k1)
        k2 = _nonlinear(u2, s2i)
        u3 = E1 * c + (h / 2.0) * k2
        k3 = _nonlinear(u3, s2i)
        u4 = E2 * c + h * E1 * k3
        k4 = _nonlinear(u4, s2i)
        c = E2 * c + (h / 6.0) * (E2 * k1 + 2.0 * E1 * (k2 + k3) + k4)
        if np.max(np.abs(c)) > cfg.blowup_threshold:
            raise BlowupDetected(f"|u_hat| exceeded {cfg.blowup_threshold:.1e} "
                                 f"at t = {(i + 1) * h:.6f}")
        if (i + 1) % cfg.record_every == 0 or i + 1 == n_steps:
            if _tail_rel(c) > cfg.tail_rel_tol:
                raise UnderResolved(
                    f"tail energy {_tail_rel(c):.3e} at t = {(i + 1) * h:.6f} "
                    f"exceeds {cfg.tail_rel_tol:.1e}; increase K")
            times.append((i + 1) * h)
            states.append(HardyCoeffs(c.copy()))

    mat = np.vstack([s.coeffs for s in states])
    l2 = np.linalg.norm(mat, axis=1)
    mean = mat[:, 0].copy()
    tail = np.array([_tail_rel(s.coeffs) for s in states])
    return Trajectory(cfg=cfg, times=np.array(times), states=tuple(states),
                      l2=l2, mean=mean, tail=tail)


@dataclass(frozen=True)
class ConservationReport:
    """Maximal drifts of the conserved quantities over a trajectory."""

    l2_drift: float
    mean_drift: float
    eig_drift: float
    n_eigs: int
    eig_snapshots: int


def conservation_report(traj: Trajectory, n_eigs: int = 10,
                        eig_snapshots: int = 9) -> ConservationReport:
    """Drift of ||u||^2, <u|1> and the low Lax spectrum along the flow.

    The norm and mean are read off every snapshot; eigenvalues (first
    ``n_eigs`` reliable ones) are computed on at most ``eig_snapshots``
    evenly spaced snapshots, endpoints included, since each requires a full
    Hermitian eigensolve.
    """
    l2_drift = float(np.max(np.abs(traj.l2 ** 2 - traj.l2[0] ** 2)))
    mean_drift = float(np.max(np.abs(traj.mean - traj.mean[0])))
    n_snap = len(traj.states)
    idx = np.unique(np.linspace(0, n_snap - 1, min(n_snap, eig_snapshots)).astype(int))
    ref = None
    eig_drift = 0.0
    for i in idx:
        dec = spectral_decompose(build_lax(traj.states[i], traj.cfg.sign))
        evs = dec.eigenvalues[:min(n_eigs, dec.reliable)]
        if ref is None:
            ref = evs
        else:
            eig_drift = max(eig_drift, float(np.max(np.abs(evs - ref))))
    return ConservationReport(l2_drift=l2_drift, mean_drift=mean_drift,
                              eig_drift=eig_drift, n_eigs=n_eigs,
                              eig_snapshots=len(idx))


def measure_speed(traj: Trajectory, base: HardyCoeffs) -> float:
    """Empirical wave speed from per-mode phase slopes.

    A traveling wave obeys u_hat(t, n) = u_hat(0, n) e^{-inct}, so each
    significant mode (|u_hat(0,n)| > 1e-6, n >= 1) yields an estimate
    c_n = -slope_n / n from a least-squares fit of the unwrapped phase;
    the return value averages them with weights n^2 |u_hat(0,n)|^2 (phase
    signal strength).  Raises NotATravelingWave when the per-mode estimates
    spread beyond 1e-3 relative to max(1, |c|).
    """
    if base.K != traj.cfg.K:
        raise DimensionMismatch("base truncation differs from the trajectory")
    if np.linalg.norm(traj.states[0].coeffs - base.coeffs) > 1e-12:
        raise InvalidParameter("trajectory was not generated from this base state")
    modes = np.nonzero(np.abs(base.coeffs) > 1e-6)[0]
    modes = modes[modes >= 1]
    if modes.size < 2:
        raise InvalidParameter(
            "need at least 2 significant oscillating modes to fit a speed")
    mat = traj.coeff_matrix()
    t = traj.times
    A = np.vstack([t, np.ones_like(t)]).T
    estimates = np.empty(modes.size)
    for k, n in enumerate(modes):
        phase = np.unwrap(np.angle(mat[:, n]))
        slope, _ = np.linalg.lstsq(A, phase, rcond=None)[0]
        estimates[k] = -slope / n
    weights = modes.astype(float) ** 2 * np.abs(base.coeffs[modes]) ** 2
    c = float(np.sum(weights * estimates) / np.sum(weights))
    spread = float(np.max(np.abs(estimates - c)))
    if spread > 1e-3 * max(1.0, abs(c)):
        raise NotATravelingWave(
            f"per-mode speeds spread {spread:.3e} around {c:.6f}")
    return c


def _conv_cols(kernel: NDArray[np.complex128],
               F: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Truncated analytic Toeplitz action T_kernel on each column of F."""
    K, m = F.shape
    L = 1
    while L < 2 * K - 1:
        L *= 2
    out = np.fft.ifft(np.fft.fft(kernel, L)[:, None] * np.fft.fft(F, L, axis=0), axis=0)
    return out[:K, :]


def _corr_cols(kernel: NDArray[np.complex128],
               F: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Anti-analytic action T_{conj(kernel)} on columns: correlation tail."""
    K, m = F.shape
    rev = np.conj(kernel[::-1])
    L = 1
    while L < 2 * K - 1:
        L *= 2
    out = np.fft.ifft(np.fft.fft(rev, L)[:, None] * np.fft.fft(F, L, axis=0), axis=0)
    return out[K - 1: 2 * K - 1, :]


def _apply_b_cols(u: NDArray[np.complex128], F: NDArray[np.complex128],
                  sign: str) -> NDArray[np.complex128]:
    """B_u applied to the columns of F without forming the matrix.

    B_u = T_u T_{dx conj u} - T_{dx u} T_{conj u} + i (T_u T_{conj u})^2
    in the focusing case; the first two terms swap signs in the defocusing
    one.  All four Toeplitz actions are exact truncated convolutions.
    """
    du = 1j * np.arange(u.shape[0]) * u
    first = _conv_cols(u, _corr_cols(du, F))
    second = _conv_cols(du, _corr_cols(u, F))
    P = lambda G: _conv_cols(u, _corr_cols(u, G))  # noqa: E731
    quad = 1j * P(P(F))
    if sign == "focusing":
        return first - second + quad
    return -first + second + quad


@dataclass(frozen=True)
class EvolvedBasis:
    """Tracked basis columns g_n^t with their phase records.

    ``columns[i]`` holds the (K, m) matrix at snapshot i; ``phases[i, j]``
    is the unwrapped phase of <u(t_i)|g_j^{t_i}> (zero where the initial
    pairing vanishes); eigenvalues are the t=0 Rayleigh quotients.
    """

    times: NDArray[np.float64]
    columns: NDArray[np.complex128]
    eigenvalues: NDArray[np.float64]
    phases: NDArray[np.float64]
    sign: str = "defocusing"


def _stage_states(c: NDArray[np.complex128], h: float, s2i: complex,
                  E1: NDArray[np.complex128], E2: NDArray[np.complex128]):
    """Lawson stage values (U1..U4, at t, t+h/2, t+h/2, t+h) for one step."""
    k1 = _nonlinear(c, s2i)
    u2 = E1 * (c + (h / 2.0) * k1)
    k2 = _nonlinear(u2, s2i)
    u3 = E1 * c + (h / 2.0) * k2
    k3 = _nonlinear(u3, s2i)
    u4 = E2 * c + h * E1 * k3
    return c, u2, u3, u4


def _interp_state(mat_rot: NDArray[np.complex128], times: NDArray[np.float64],
                  t: float, n2: NDArray[np.float64]) -> NDArray[np.complex128]:
    """Cubic Lagrange interpolation of the rotating-frame trajectory at t."""
    n = times.shape[0]
    j = int(np.searchsorted(times, t))
    lo = min(max(j - 2, 0), max(n - 4, 0))
    idx = np.arange(lo, min(lo + 4, n))
    ts = times[idx]
    out = np.zeros(mat_rot.shape[1], dtype=np.complex128)
    for a, ia in enumerate(idx):
        w = 1.0
        for b, ib in enumerate(idx):
            if a != b:
                w *= (t - ts[b]) / (ts[a] - ts[b])
        out += w * mat_rot[ia]
    return np.exp(-1j * n2 * t) * out


def evolve_basis(traj: Trajectory, f_init: NDArray[np.complex128]) -> EvolvedBasis:
    """Integrate d/dt g = B_{u(t)} g for the columns of f_init along traj.

    When the trajectory was recorded every step, the RK4 stages of g reuse
    the exact Lawson stage states of u (true co-integration, preserving the
    scheme's fourth order); for sparser recordings u is interpolated at
    stage times by rotating-frame cubic Lagrange.  B is skew-adjoint, so
    the column norms are conserved; a deviation beyond 1e-5 raises
    BasisDrift.
    """
    F = np.asarray(f_init, dtype=np.complex128)
    if F.ndim == 1:
        F = F[:, None]
    K = traj.cfg.K
    if F.shape[0] != K:
        raise DimensionMismatch("f_init rows must match the truncation K")
    cfg = traj.cfg
    sign = cfg.sign
    s2i = 2j if sign == "focusing" else -2j
    n2 = np.arange(K, dtype=float) ** 2

    L0 = build_lax(traj.states[0], sign).matrix
    lams = np.real(np.einsum("km,km->m", np.conj(F), L0 @ F)
                   / np.einsum("km,km->m", np.conj(F), F))

    times = traj.times
    n_span = len(times) - 1
    cols = np.empty((len(times), K, F.shape[1]), dtype=np.complex128)
    cols[0] = F
    G = F.copy()
    u_mat = traj.coeff_matrix()
    exact = cfg.record_every == 1
    rot = u_mat * np.exp(1j * n2[None, :] * times[:, None]) if not exact else None

    for i in range(n_span):
        t0, t1 = float(times[i]), float(times[i + 1])
        h = t1 - t0
        E1 = np.exp(-1j * n2 * (h / 2.0))
        E2 = E1 * E1
        if exact:
            u1, u2, u3, u4 = _stage_states(u_mat[i], h, s2i, E1, E2)
        else:
            u1 = u_mat[i]
            u2 = _interp_state(rot, times, t0 + h / 2.0, n2)
            u3 = u2
            u4 = u_mat[i + 1]
        l1 = _apply_b_cols(u1, G, sign)
        l2 = _apply_b_cols(u2, G + (h / 2.0) * l1, sign)
        l3 = _apply_b_cols(u3, G + (h / 2.0) * l2, sign)
        l4 = _apply_b_cols(u4, G + h * l3, sign)
        G = G + (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4)
        dev = float(np.max(np.abs(np.linalg.norm(G, axis=0) - 1.0)))
        if dev > 1e-5:
            raise BasisDrift(f"basis norm drifted by {dev:.3e} at t = {t1:.6f}")
        cols[i + 1] = G

    pair0 = np.einsum("km,k->m", np.conj(F), u_mat[0])
    phases = np.zeros((len(times), F.shape[1]))
    for j in range(F.shape[1]):
        if abs(pair0[j]) > 1e-12:
            overlap = np.einsum("tkm,tk->tm", np.conj(cols[:, :, j: j + 1]),
                                u_mat)[:, 0]
            phases[:, j] = np.unwrap(np.angle(overlap))
    return EvolvedBasis(times=times, columns=cols, eigenvalues=lams,
                        phases=phases, sign=sign)


def phase_law_report(traj: Trajectory, basis: EvolvedBasis) -> dict:
    """Max residuals of the three exact phase laws along the trajectory.

    potential_law:  <u(t)|g_n^t> = <u0|f_n> e^{-i lam_n^2 t}
    mean_law:       <1|g_n^t>    = <1|f_n>  e^{-i lam_n^2 t}
    shift_law:      <S g_p^t|g_n^t> = <S f_p|f_n> e^{i((lam_p+1)^2 - lam_n^2) t}
    """
    u_mat = traj.coeff_matrix()
    t = basis.times
    lam = basis.eigenvalues
    cols = basis.columns
    m = cols.shape[2]

    pot = 0.0
    mean = 0.0
    for j in range(m):
        overlap = np.einsum("tk,tk->t", u_mat, np.conj(cols[:, :, j]))
        expected = overlap[0] * np.exp(-1j * lam[j] ** 2 * t)
        pot = max(pot, float(np.max(np.abs(overlap - expected))))
        ones = np.conj(cols[:, 0, j])
        expected1 = ones[0] * np.exp(-1j * lam[j] ** 2 * t)
        mean = max(mean, float(np.max(np.abs(ones - expected1))))

    shift = 0.0
    for p in range(m):
        Sg = np.zeros_like(cols[:, :, p])
        Sg[:, 1:] = cols[:, :-1, p]
        for n in range(m):
            overlap = np.einsum("tk,tk->t", Sg, np.conj(cols[:, :, n]))
            expected = overlap[0] * np.exp(1j * ((lam[p] + 1.0) ** 2 - lam[n] ** 2) * t)
            shift = max(shift, float(np.max(np.abs(overlap - expected))))
    return {"potential_law": pot, "mean_law": mean, "shift_law": shift}
