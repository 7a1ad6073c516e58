"""Closed-form traveling-wave families and the PDE residual.

The flow under study is

    i u_t + u_xx +/- 2 D Pi(|u|^2) u = 0,        D = -i d/dx,

restricted to the Hardy space (+ focusing, - defocusing).  Four explicit
families of traveling waves u(t, x) = u0(x - ct) are provided:

  plane       u = C e^{iN(x - Nt)}                                  (both signs, c = N)
  pole        u = e^{i theta} (alpha + beta / (1 - p e^{iN(x-ct)}))
              with  alpha beta + beta^2/(1-|p|^2) = -N (defocusing)
                                                  = +N (focusing)
              and   c = -N (1 + 2 alpha / beta)
  modulated   u = e^{i theta} e^{im(x-ct)} (alpha + beta/(1 - p e^{i(x-ct)}))
              with  alpha beta + beta^2/(1-|p|^2) = 1,  beta (m-1) = 2 alpha,
              c = m                                                 (focusing only)
  stationary  pole family with beta = -2 alpha,
              alpha = sqrt(N (1-|p|^2) / (2 (1+|p|^2))),  c = 0     (focusing only)

alpha and beta are real with alpha*beta < 0 in the defocusing pole family;
beta is treated as the free parameter and alpha is solved from the
constraint.  There are no defocusing stationary waves (the defocusing
speed always exceeds N), and no exhaustiveness is claimed for the
focusing list.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintViolation,
    DimensionMismatch,
    FamilyUnavailable,
    InvalidParameter,
    PoleOnCircle,
    TruncationOverflow,
)
from .hardy import HardyCoeffs, derivative, hardy_product, projected_modulus_squared

__all__ = [
    "WaveParams",
    "WaveSampler",
    "solve_wave_constraint",
    "solve_constraint_for_beta",
    "make_wave",
    "wave_speed",
    "wave_l2",
    "sample_wave",
    "pde_residual",
    "nonlinear_term",
    "validate_wave",
]

PLANE = "plane"
POLE = "pole"
MODULATED = "modulated"
STATIONARY = "stationary"

_CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class WaveParams:
    """Parameters of one traveling wave.

    ``N`` is the base frequency for plane/pole/stationary waves and the
    modulation index m for the modulated family.  Plane waves store the
    amplitude as beta = |C| with theta = arg C and p = 0.
    """

    sign: str
    family: str
    N: int
    p: complex
    alpha: float
    beta: float
    theta: float
    c: float


def _check_pole(p: complex) -> complex:
    p = complex(p)
    if abs(p) >= 1.0:
        raise PoleOnCircle(f"pole parameter |p| = {abs(p):.6f} >= 1")
    if p == 0:
        raise InvalidParameter("pole parameter p must be nonzero (use the plane family)")
    return p


def solve_wave_constraint(sign: str, N: int, p: complex, beta: float) -> float:
    """Solve the pole-family constraint for alpha at given beta.

    alpha = -/+ N / beta - beta / (1 - |p|^2)   (- defocusing, + focusing)
    """
    p = _check_pole(p)
    if N < 1:
        raise InvalidParameter("base frequency N must be a positive integer")
    if beta == 0.0:
        raise InvalidParameter("beta must be nonzero")
    q = 1.0 / (1.0 - abs(p) ** 2)
    if sign == "defocusing":
        return -N / beta - beta * q
    if sign == "focusing":
        return N / beta - beta * q
    raise InvalidParameter(f"unknown sign {sign!r}")


def solve_constraint_for_beta(sign: str, N: int, p: complex, alpha: float):
    """Inverse solve: both real roots beta of the pole-family constraint.

    The constraint is quadratic in beta,
        beta^2/(1-|p|^2) + alpha beta +/- N = 0   (+ defocusing, - focusing);
    the focusing discriminant is always positive, the defocusing one
    requires alpha^2 >= 4N/(1-|p|^2) (ConstraintViolation otherwise).
    """
    p = _check_pole(p)
    q = 1.0 / (1.0 - abs(p) ** 2)
    cconst = float(N) if sign == "defocusing" else -float(N)
    disc = alpha * alpha - 4.0 * q * cconst
    if disc < 0.0:
        raise ConstraintViolation(
            f"no real beta: discriminant {disc:.3e} < 0 for alpha={alpha!r}")
    root = math.sqrt(disc)
    return ((-alpha + root) / (2.0 * q), (-alpha - root) / (2.0 * q))


def make_wave(sign: str, family: str, *, N: int = 1, p: complex = 0.0,
              beta: float | None = None, C: complex | None = None,
              theta: float = 0.0, branch: int = 1) -> WaveParams:
    """Construct validated WaveParams for one family.

    plane:      needs N and C (complex amplitude).
    pole:       needs N, p, beta; alpha is solved from the constraint.
    modulated:  focusing only; N plays the role of the modulation index m,
                needs p; beta = branch / sqrt((m-1)/2 + 1/(1-|p|^2)).
    stationary: focusing only; needs N and p.
    """
    if sign not in ("focusing", "defocusing"):
        raise InvalidParameter(f"unknown sign {sign!r}")
    if family == PLANE:
        if C is None:
            raise InvalidParameter("plane family needs the amplitude C")
        if N < 1:
            raise InvalidParameter("plane-wave frequency N must be >= 1")
        return WaveParams(sign=sign, family=PLANE, N=N, p=0.0, alpha=0.0,
                          beta=abs(C), theta=float(np.angle(C)), c=float(N))
    if family == POLE:
        if beta is None:
            raise InvalidParameter("pole family needs beta (alpha is solved)")
        alpha = solve_wave_constraint(sign, N, p, beta)
        c = -N * (1.0 + 2.0 * alpha / beta)
        return WaveParams(sign=sign, family=POLE, N=N, p=complex(p),
                          alpha=alpha, beta=float(beta), theta=theta, c=c)
    if family == MODULATED:
        if sign != "focusing":
            raise FamilyUnavailable("the modulated family exists only in the focusing case")
        m = N
        if m < 1:
            raise InvalidParameter("modulation index m must be >= 1")
        p = _check_pole(p)
        q = 1.0 / (1.0 - abs(p) ** 2)
        denom = 0.5 * (m - 1) + q
        if denom <= 0.0:  # cannot happen for valid p, m; guard anyway
            raise ConstraintViolation("modulated constraint has no real solution")
        beta = (1 if branch >= 0 else -1) / math.sqrt(denom)
        alpha = 0.5 * beta * (m - 1)
        return WaveParams(sign=sign, family=MODULATED, N=m, p=p,
                          alpha=alpha, beta=beta, theta=theta, c=float(m))
    if family == STATIONARY:
        if sign != "focusing":
            raise FamilyUnavailable(
                "no defocusing stationary waves: the defocusing speed always exceeds N")
        p = _check_pole(p)
        if N < 1:
            raise InvalidParameter("base frequency N must be >= 1")
        alpha = math.sqrt(N * (1.0 - abs(p) ** 2) / (2.0 * (1.0 + abs(p) ** 2)))
        return WaveParams(sign=sign, family=STATIONARY, N=N, p=p,
                          alpha=alpha, beta=-2.0 * alpha, theta=theta, c=0.0)
    raise InvalidParameter(f"unknown family {family!r}")


def validate_wave(w: WaveParams) -> dict:
    """Constraint residuals of a WaveParams; raises on violation > 1e-12."""
    res: dict[str, float] = {}
    if w.family == PLANE:
        if w.p != 0:
            raise InvalidParameter("plane waves have no pole parameter")
        res["speed"] = abs(w.c - w.N)
        worst = max(res.values())
        if worst > _CONSTRAINT_TOL:
            raise ConstraintViolation(f"wave constraints violated: {res}")
        return res
    if abs(w.p) >= 1.0:
        raise PoleOnCircle(f"pole parameter |p| = {abs(w.p):.6f} >= 1")
    if w.p == 0:
        raise InvalidParameter(f"the {w.family} family needs a nonzero pole")
    q = 1.0 / (1.0 - abs(w.p) ** 2)
    if w.family in (POLE, STATIONARY):
        target = -float(w.N) if w.sign == "defocusing" else float(w.N)
        res["constraint"] = abs(w.alpha * w.beta + w.beta ** 2 * q - target)
        res["speed"] = abs(w.c - (-w.N * (1.0 + 2.0 * w.alpha / w.beta)))
        if w.family == STATIONARY:
            res["stationary"] = abs(w.c)
    elif w.family == MODULATED:
        res["constraint"] = abs(w.alpha * w.beta + w.beta ** 2 * q - 1.0)
        res["modulation"] = abs(w.beta * (w.N - 1) - 2.0 * w.alpha)
        res["speed"] = abs(w.c - w.N)
    else:
        raise InvalidParameter(f"unknown family {w.family!r}")
    worst = max(res.values())
    if worst > _CONSTRAINT_TOL:
        raise ConstraintViolation(f"wave constraints violated: {res}")
    return res


def wave_speed(w: WaveParams) -> float:
    """Wave speed c, cross-checked against the second closed form.

    For the pole family the speed is printed in two ways,
        c = -N (1 + 2 alpha/beta)
        c = N (1+|p|^2)/(1-|p|^2) +/- 2N^2/beta^2   (+ defocusing, - focusing),
    which must agree to 1e-12; the defocusing speed additionally satisfies
    c > N.
    """
    validate_wave(w)
    if w.family == PLANE:
        return float(w.N)
    if w.family == MODULATED:
        return float(w.N)
    ratio = (1.0 + abs(w.p) ** 2) / (1.0 - abs(w.p) ** 2)
    if w.sign == "defocusing":
        c2 = w.N * (ratio + 2.0 * w.N / w.beta ** 2)
        if c2 <= w.N:
            raise ConstraintViolation("defocusing speed must exceed N")
    else:
        c2 = w.N * (ratio - 2.0 * w.N / w.beta ** 2)
    if abs(c2 - w.c) > 1e-12 * max(1.0, abs(w.c)):
        raise ConstraintViolation(
            f"speed cross-check failed: {w.c!r} vs {c2!r}")
    return float(w.c)


def wave_l2(w: WaveParams) -> float:
    """Squared L2 norm of the profile (mean of |u|^2 over the circle).

    pole:      alpha^2 + alpha beta -/+ N  (- defocusing, + focusing)
    modulated: alpha^2 + alpha beta + 1
    plane:     |C|^2
    """
    validate_wave(w)
    if w.family == PLANE:
        return float(w.beta ** 2)
    if w.family == MODULATED:
        return float(w.alpha ** 2 + w.alpha * w.beta + 1.0)
    nn = -float(w.N) if w.sign == "defocusing" else float(w.N)
    return float(w.alpha ** 2 + w.alpha * w.beta + nn)


def sample_wave(w: WaveParams, t: float, K: int) -> HardyCoeffs:
    """Fourier coefficients of the wave at time t, truncated to K modes.

    Every family obeys the traveling-wave modal law
    u_hat(n, t) = u_hat(n, 0) e^{-i n c t}.
    """
    if K < 1:
        raise DimensionMismatch("K must be >= 1")
    validate_wave(w)
    c0 = np.zeros(K, dtype=np.complex128)
    ph = np.exp(1j * w.theta)
    if w.family == PLANE:
        if w.N >= K:
            raise DimensionMismatch(f"plane frequency N={w.N} does not fit K={K}")
        c0[w.N] = w.beta * ph
    elif w.family in (POLE, STATIONARY):
        kmax = (K - 1) // w.N
        c0[0] = ph * (w.alpha + w.beta)
        pk = w.p ** np.arange(1, kmax + 1)
        c0[w.N * np.arange(1, kmax + 1)] = ph * w.beta * pk
        tail = abs(w.beta) * abs(w.p) ** (kmax + 1)
        if tail > 1e-12:
            warnings.warn(
                f"pole-family tail {tail:.3e} truncated at K={K}",
                TruncationOverflow, stacklevel=2)
    else:  # modulated
        m = w.N
        if m >= K:
            raise DimensionMismatch(f"modulation index m={m} does not fit K={K}")
        kmax = K - 1 - m
        c0[m] = ph * (w.alpha + w.beta)
        pk = w.p ** np.arange(1, kmax + 1)
        c0[m + np.arange(1, kmax + 1)] = ph * w.beta * pk
        tail = abs(w.beta) * abs(w.p) ** (kmax + 1)
        if tail > 1e-12:
            warnings.warn(
                f"modulated-family tail {tail:.3e} truncated at K={K}",
                TruncationOverflow, stacklevel=2)
    n = np.arange(K)
    return HardyCoeffs(c0 * np.exp(-1j * n * w.c * t))


class WaveSampler:
    """Time sampler for a WaveParams with an analytic time derivative."""

    def __init__(self, w: WaveParams):
        self.wave = w

    def __call__(self, t: float, K: int) -> HardyCoeffs:
        return sample_wave(self.wave, t, K)

    def dt_coeffs(self, t: float, K: int) -> HardyCoeffs:
        """Exact d/dt of the coefficients: -i n c u_hat(n, t)."""
        u = sample_wave(self.wave, t, K)
        n = np.arange(K)
        return HardyCoeffs(-1j * n * self.wave.c * u.coeffs)


def nonlinear_term(u: HardyCoeffs) -> HardyCoeffs:
    """(D Pi(|u|^2)) * u in coefficient space, truncated to K.

    D multiplies the projected modulus coefficients by n; the product with
    u is one more exact zero-padded convolution.
    """
    w = projected_modulus_squared(u)
    dw = derivative(w)  # i n w(n); D w has coefficients n w(n) = -i * (i n w(n))
    dwc = HardyCoeffs(-1j * dw.coeffs)
    return hardy_product(dwc, u)


def pde_residual(u_of_t, sign: str, t: float = 0.0, dt: float = 1e-5,
                 K: int = 256) -> float:
    """Relative residual of i u_t + u_xx +/- 2 D Pi(|u|^2) u at time t.

    ``u_of_t`` is a callable (t, K) -> HardyCoeffs; when it also provides
    ``dt_coeffs(t, K)`` (e.g. WaveSampler) the analytic time derivative is
    used, otherwise a centered difference with step ``dt``.  Returns
    ||residual||_2 / max(1, ||u||_2); a non-solution sampler yields O(1).
    """
    if sign not in ("focusing", "defocusing"):
        raise InvalidParameter(f"unknown sign {sign!r}")
    u = u_of_t(t, K)
    if hasattr(u_of_t, "dt_coeffs"):
        ut = u_of_t.dt_coeffs(t, K).coeffs
    else:
        up = u_of_t(t + dt, K).coeffs
        um = u_of_t(t - dt, K).coeffs
        ut = (up - um) / (2.0 * dt)
    n = np.arange(K)
    s = 1.0 if sign == "focusing" else -1.0
    resid = 1j * ut - n ** 2 * u.coeffs + s * 2.0 * nonlinear_term(u).coeffs
    return float(np.linalg.norm(resid) / max(1.0, np.linalg.norm(u.coeffs)))
