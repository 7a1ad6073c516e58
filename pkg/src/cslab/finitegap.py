"""Finite-gap potentials: residue system, ladder checks, classification, inversion.

A potential is finite gap when the eigenvalues of its Lax operator satisfy
nu_n = nu_{n-1} + 1 from some rank m on.  Such potentials are exactly the
rational functions

    u(x) = e^{i m0 x} prod_j B_j(e^{ix})^{m_j - 1} (a + sum_j c_j / (1 - p_j e^{ix}))

with B_j(z) = (z - conj(p_j))/(1 - p_j z), distinct poles p_j in the
punctured disc, multiplicities m_j >= 1, N = m0 + sum m_j, and residue
conditions

    conj(a) c_j + sum_k c_j conj(c_k) / (1 - p_j conj(p_k)) = m_j   (focusing)
                                                            = -m_j  (defocusing),

plus the plane waves C e^{iNx}.  The associated Blaschke product
psi = z^{m0} prod_j B_j^{m_j} generates a shift ladder of eigenfunctions
L S^k psi = (nu_u + k) S^k psi, and the potential is recovered from
spectral data by u(z) = <(Id - z M)^{-1} X | Y>, which collapses to an
(N+1) x (N+1) solve in a ladder-adapted basis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    BasisDrift,
    ConstraintViolation,
    Inconclusive,
    InfeasibleSign,
    InvalidParameter,
    NewtonDivergence,
    NumericalAliasing,
    PoleOnCircle,
    SingularSystem,
    AliasWarning,
)
from .hardy import (
    BlaschkeProduct,
    HardyCoeffs,
    blaschke_to_coeffs,
    grid_transform,
)
from .lax import SpectralDecomposition, build_lax, _check_sign

__all__ = [
    "FiniteGapPotential",
    "ClassifyResult",
    "InversionData",
    "gram_matrix",
    "residue_residuals",
    "solve_residue_system",
    "potential_coeffs",
    "predicted_l2",
    "ladder_blaschke",
    "blaschke_eigen_check",
    "classify",
    "inversion_data",
    "reconstruct",
]

_NEWTON_TOL = 1e-13
_ZERO_TOL = 1e-10
_WALK_TOL = 1e-5
_NORM_DROP_TOL = 1e-6
_UNIMODULAR_TOL = 1e-4


@dataclass(frozen=True)
class FiniteGapPotential:
    """Pole data (p_j, m_j), constant a and residue coefficients c_j.

    ``r = 0`` encodes the plane-wave branch u = a e^{i m0 x}.
    """

    sign: str
    m0: int
    poles: tuple
    mults: tuple
    a: complex
    residues: tuple

    def __post_init__(self) -> None:
        _check_sign(self.sign)
        if self.m0 < 0:
            raise InvalidParameter("m0 must be >= 0")
        poles = tuple(complex(p) for p in self.poles)
        mults = tuple(int(m) for m in self.mults)
        res = tuple(complex(c) for c in self.residues)
        if not (len(poles) == len(mults) == len(res)):
            raise InvalidParameter("poles, mults and residues must have equal length")
        for p in poles:
            if abs(p) >= 1.0:
                raise PoleOnCircle(f"pole {p} not inside the unit disc")
            if p == 0:
                raise InvalidParameter("poles must be nonzero (D*)")
        for j, p in enumerate(poles):
            for q in poles[j + 1:]:
                if abs(p - q) < 1e-12:
                    raise InvalidParameter("poles must be pairwise distinct")
        if any(m < 1 for m in mults):
            raise InvalidParameter("multiplicities must be >= 1")
        if self.m0 >= 1 and abs(self.a) < _ZERO_TOL:
            raise ConstraintViolation("a must be nonzero when m0 >= 1")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "mults", mults)
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "a", complex(self.a))

    @property
    def r(self) -> int:
        return len(self.poles)

    @property
    def N(self) -> int:
        return self.m0 + sum(self.mults)

    @property
    def predicted_eig(self) -> float:
        """Ladder base eigenvalue: nu_u (focusing) or lambda_u (defocusing).

        nu_u = m0 - |a|^2 - sum_j a conj(c_j);  lambda_u flips both signs of
        the potential-dependent part.  The residue conditions make the sum
        real; a residual imaginary part above 1e-8 is a ConstraintViolation.
        """
        s = np.sum(self.a * np.conj(np.asarray(self.residues))) if self.r else 0.0
        val = abs(self.a) ** 2 + s
        if abs(np.imag(val)) > 1e-8:
            raise ConstraintViolation(
                f"eigenvalue formula not real (imag {np.imag(val):.3e}); "
                "residue conditions are violated")
        if self.sign == "focusing":
            return float(self.m0 - np.real(val))
        return float(self.m0 + np.real(val))


def gram_matrix(poles) -> NDArray[np.complex128]:
    """Hermitian Gram matrix G_jk = 1/(1 - p_j conj(p_k)) of Cauchy kernels."""
    p = np.asarray(poles, dtype=np.complex128)
    return 1.0 / (1.0 - np.outer(p, np.conj(p)))


def residue_residuals(sign: str, a: complex, residues, poles, mults) -> NDArray[np.complex128]:
    """Per-pole residual of the residue conditions (zero at a solution)."""
    s = 1.0 if sign == "focusing" else -1.0
    c = np.asarray(residues, dtype=np.complex128)
    m = np.asarray(mults, dtype=float)
    G = gram_matrix(poles)
    return np.conj(a) * c + c * (G @ np.conj(c)) - s * m


def _newton_jacobian(a: complex, c: NDArray[np.complex128],
                     G: NDArray[np.complex128], pin_a: bool) -> NDArray[np.float64]:
    """Real 2r x 2(r+1) Jacobian of the residue map, Wirtinger-assembled.

    With F_j = conj(a) c_j + c_j sum_k conj(c_k) G_jk - s m_j and complex
    variables v = (a, c), the holomorphic block is A = dF/dv and the
    anti-holomorphic one B = dF/dconj(v); the real Jacobian acting on
    (Re dv, Im dv) is [[Re(A+B), -Im(A-B)], [Im(A+B), Re(A-B)]].
    """
    r = c.shape[0]
    A = np.zeros((r, r + 1), dtype=np.complex128)
    B = np.zeros((r, r + 1), dtype=np.complex128)
    diag = np.conj(a) + G @ np.conj(c)
    A[:, 1:] = np.diag(diag)
    B[:, 0] = c
    B[:, 1:] = c[:, None] * G
    if pin_a:
        A = A[:, 1:]
        B = B[:, 1:]
    return np.block([
        [np.real(A + B), -np.imag(A - B)],
        [np.imag(A + B), np.real(A - B)],
    ])


def solve_residue_system(sign: str, m0: int, poles, mults, init=None, *,
                         pin_a: complex | None = None, max_iter: int = 100,
                         tol: float = _NEWTON_TOL) -> FiniteGapPotential:
    """Newton-solve the residue conditions for (a, c_1, ..., c_r).

    The system is underdetermined (2r real equations, 2(r+1) unknowns:
    a global phase plus a one-parameter family), so steps are taken as
    minimum-norm least-squares solutions, with halving damping whenever a
    full step fails to reduce the residual.  Default initialization is the
    decoupled single-pole solution c_j = sqrt(m_j (1 - |p_j|^2)) with a = 0
    for m0 = 0 and a = 1 otherwise; ``init = (a0, [c0...])`` overrides it,
    and ``pin_a`` freezes a at the given value (removing it from the
    unknowns).  Raises InfeasibleSign for the defocusing system with a
    pinned to 0: summing the conditions would force the positive-definite
    Gram form sum c_j conj(c_k) G_jk to equal -sum m_j < 0.
    """
    _check_sign(sign)
    poles = tuple(complex(p) for p in poles)
    mults = tuple(int(m) for m in mults)
    r = len(poles)
    if len(mults) != r:
        raise InvalidParameter("poles and mults must have equal length")
    if r == 0:
        # Plane-wave branch: nothing to solve, the amplitude is free.
        amp = pin_a if pin_a is not None else (init[0] if init else 1.0)
        return FiniteGapPotential(sign=sign, m0=m0, poles=(), mults=(),
                                  a=amp, residues=())
    if pin_a is not None and abs(pin_a) < _ZERO_TOL:
        if sign == "defocusing":
            raise InfeasibleSign(
                "defocusing residue conditions with a = 0 are impossible: "
                "the Gram form sum_jk c_j conj(c_k)/(1 - p_j conj(p_k)) is "
                "nonnegative and would have to equal -sum m_j < 0")
        if m0 >= 1:
            raise ConstraintViolation("a must be nonzero when m0 >= 1")

    if init is not None:
        a = complex(init[0])
        c = np.asarray(init[1], dtype=np.complex128).copy()
        if c.shape[0] != r:
            raise InvalidParameter("init residues must match the pole count")
    else:
        c = np.array([np.sqrt(m * (1.0 - abs(p) ** 2))
                      for p, m in zip(poles, mults)], dtype=np.complex128)
        a = 0.0 + 0.0j if m0 == 0 else 1.0 + 0.0j
    if pin_a is not None:
        a = complex(pin_a)
    pinned = pin_a is not None

    G = gram_matrix(poles)
    F = residue_residuals(sign, a, c, poles, mults)
    res = float(np.linalg.norm(F))
    for _ in range(max_iter):
        if res < tol:
            break
        J = _newton_jacobian(a, c, G, pinned)
        rhs = -np.concatenate([np.real(F), np.imag(F)])
        step, *_ = np.linalg.lstsq(J, rhs, rcond=None)
        n_var = r if pinned else r + 1
        dz = step[:n_var] + 1j * step[n_var:]
        t = 1.0
        for _halving in range(40):
            a_try = a if pinned else a + t * dz[0]
            c_try = c + t * (dz if pinned else dz[1:])
            F_try = residue_residuals(sign, a_try, c_try, poles, mults)
            res_try = float(np.linalg.norm(F_try))
            if res_try < res:
                a, c, F, res = a_try, c_try, F_try, res_try
                break
            t *= 0.5
        else:
            raise NewtonDivergence(
                f"line search stalled at residual {res:.3e}")
    else:
        raise NewtonDivergence(
            f"no convergence after {max_iter} iterations; residual {res:.3e}")
    if np.any(np.abs(c) < _ZERO_TOL):
        raise ConstraintViolation(
            "a residue coefficient collapsed to 0: the conditions would "
            "read 0 = m_j for that pole")
    return FiniteGapPotential(sign=sign, m0=m0, poles=poles, mults=mults,
                              a=a, residues=tuple(c))


def potential_coeffs(fg: FiniteGapPotential, K: int) -> HardyCoeffs:
    """First K Fourier coefficients of the rational potential.

    Samples on a 2K grid and analyzes by FFT.  The function is analytic in
    the disc, so the upper half of the spectrum holds only the fold-back of
    the |p|^n tail: relative energy above 1e-12 is warned about, above 1e-8
    it raises NumericalAliasing (the poles are too close to the circle for
    this K).
    """
    if K < 1:
        raise InvalidParameter("K must be >= 1")
    M = 2 * K
    z = np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.full(M, fg.a, dtype=np.complex128)
    for p, c in zip(fg.poles, fg.residues):
        vals += c / (1.0 - p * z)
    for p, m in zip(fg.poles, fg.mults):
        if m > 1:
            vals *= ((z - np.conj(p)) / (1.0 - p * z)) ** (m - 1)
    vals *= z ** fg.m0
    full = np.fft.fft(vals) / M
    total = float(np.sum(np.abs(full) ** 2))
    tail = float(np.sum(np.abs(full[K:]) ** 2))
    if total > 0:
        rel = tail / total
        if rel > 1e-8:
            raise NumericalAliasing(
                f"tail energy {rel:.3e} beyond mode {K - 1}; increase K")
        if rel > 1e-12:
            warnings.warn(f"tail energy {rel:.3e} folded back", AliasWarning,
                          stacklevel=2)
    return HardyCoeffs(full[:K].copy())


def predicted_l2(fg: FiniteGapPotential) -> float:
    """Squared L2 norm from the ladder eigenvalue: N - nu_u, resp. lambda_u - N."""
    if fg.sign == "focusing":
        return float(fg.N - fg.predicted_eig)
    return float(fg.predicted_eig - fg.N)


def ladder_blaschke(fg: FiniteGapPotential) -> BlaschkeProduct:
    """The Blaschke product psi_u = z^{m0} prod_j ((z - conj(p_j))/(1 - p_j z))^{m_j}."""
    zeros: list[complex] = []
    for p, m in zip(fg.poles, fg.mults):
        zeros.extend([np.conj(p)] * m)
    return BlaschkeProduct(zeros=tuple(zeros), power=fg.m0)


def blaschke_eigen_check(u: HardyCoeffs, psi: BlaschkeProduct, sign: str,
                         kmax: int):
    """Residuals of the ladder relation L_u S^k psi = (nu + k) S^k psi.

    nu is estimated once by the Rayleigh quotient <L psi | psi>; the
    residual norms are measured on the truncation-reliable rows
    [0, K - K/4) and returned for k = 0..kmax together with nu.
    """
    K = u.K
    if kmax < 0:
        raise InvalidParameter("kmax must be >= 0")
    if kmax > K // 8:
        raise InvalidParameter(f"kmax={kmax} too deep for K={K} (limit K/8)")
    L = build_lax(u, sign).matrix
    rows = K - K // 4
    v = blaschke_to_coeffs(psi, K).coeffs
    v = v / np.linalg.norm(v)
    nu = float(np.real(np.vdot(v, L @ v)))
    residuals = np.empty(kmax + 1)
    for k in range(kmax + 1):
        Lv = L @ v
        residuals[k] = np.linalg.norm(Lv[:rows] - (nu + k) * v[:rows])
        # shift up by one slot for the next rung
        v = np.concatenate([[0.0], v[:-1]])
    return nu, residuals


@dataclass(frozen=True)
class ClassifyResult:
    """Outcome of the finite-gap test: rank m and ladder degree estimate."""

    is_finite_gap: bool
    m: int
    N_estimate: int


def _ladder_walk(L: NDArray[np.complex128], dec: SpectralDecomposition,
                 walk_tol: float = _WALK_TOL):
    """Walk the shift ladder downward from a high reliable eigenvector.

    Starting from the eigenvector f at sorted index n_seed (top of the
    identity-reliable range), repeatedly apply S*.  On the ladder,
    S* S^k psi = S^{k-1} psi stays a unit eigenvector with eigenvalue
    dropping by exactly 1; the walk breaks at the ladder base psi, either
    by norm drop (S* psi loses |psi_hat(0)|^2 when m0 = 0) or by
    eigen-residual blow-up (L S* psi picks up the <psi|u> S* u term).
    Returns (n_seed, members, base) with ``members`` the number of ladder
    vectors found (seed included) and ``base`` the deepest accepted vector.
    """
    K = dec.K
    n_seed = min(dec.reliable, K - K // 4) - 1
    if n_seed < 1:
        raise Inconclusive("truncation too small to seed a ladder walk")
    rows = K - K // 4
    w = dec.vectors[:, n_seed].copy()
    nu_seed = float(dec.eigenvalues[n_seed])
    seed_res = np.linalg.norm((L @ w)[:rows] - nu_seed * w[:rows])
    if seed_res > walk_tol:
        raise Inconclusive(
            f"seed eigenvector residual {seed_res:.3e} exceeds walk tolerance")
    members = 1
    base = w
    for step in range(1, n_seed + 2):
        wn = np.concatenate([w[1:], [0.0]])
        nrm = float(np.linalg.norm(wn))
        if nrm < 1.0 - _NORM_DROP_TOL:
            break
        wn = wn / nrm
        expected = nu_seed - step
        resid = np.linalg.norm((L @ wn)[:rows] - expected * wn[:rows])
        if resid > walk_tol:
            break
        w = wn
        base = wn
        members += 1
    return n_seed, members, base


def classify(dec: SpectralDecomposition, u: HardyCoeffs,
             tol: float = 1e-7) -> ClassifyResult:
    """Decide whether u is finite gap; report the rank m and degree N.

    m is the least index with nu_n = nu_{n-1} + 1 for all n >= m over the
    reliable range (gaps compared to 1 within ``tol``); raises Inconclusive
    when off-by-one gaps persist into the edge of the reliable range.  The
    degree N_estimate counts the eigenvectors below the ladder seed that do
    not belong to the shift ladder (the dimension of the model space), and
    the walk's break vector is accepted as a Blaschke candidate only if it
    is unimodular on the circle within 1e-4.

    The verdict is resolution-limited: a potential whose trailing gaps
    close within ``tol`` at this truncation is indistinguishable from the
    finite-gap potential of the detected degree, and is reported as such.
    Generic data betrays itself through decay instead — slowly decaying
    coefficients leave unresolved gaps at the reliability edge, which is
    the Inconclusive path, not a clean "false".
    """
    if u.K != dec.K:
        raise InvalidParameter("decomposition and potential truncations differ")
    ev = dec.eigenvalues[:dec.reliable]
    gaps = ev[1:] - ev[:-1] - 1.0
    bad = np.nonzero(np.abs(gaps) > tol)[0]
    edge = max(2, gaps.shape[0] // 16)
    if bad.size and bad[-1] >= gaps.shape[0] - edge:
        raise Inconclusive(
            f"gap {gaps[bad[-1]]:.3e} at index {bad[-1] + 1} persists to the "
            "reliability edge; increase K or lower the tolerance")
    m = int(bad[-1]) + 2 if bad.size else 1

    L = build_lax(u, dec.sign).matrix
    n_seed, members, base = _ladder_walk(L, dec)
    n_estimate = (n_seed + 1) - members

    grid = grid_transform(HardyCoeffs(base), 4 * dec.K, "to_grid")
    unimod_dev = float(np.max(np.abs(np.abs(grid) - 1.0)))
    is_fg = unimod_dev < _UNIMODULAR_TOL
    return ClassifyResult(is_finite_gap=is_fg, m=m, N_estimate=n_estimate)


@dataclass(frozen=True)
class InversionData:
    """Spectral inversion data u(z) = <(Id - zM)^{-1} X | Y>.

    X_n = <u|f_n>, Y_n = <1|f_n> and M_np = <f_p|S f_n> in the full
    eigenbasis (any orthonormal basis reproduces u; completeness gives
    ||X|| = ||u|| and ||Y|| = 1 exactly at truncation).  When the
    potential classifies as finite gap of degree N, the ladder-adapted
    (N+1) x (N+1) reduction is attached: in the basis (model space sorted
    by eigenvalue, then psi_u), the solution xi of (Id - zM) xi = X
    vanishes from slot N+1 on, so the leading block reproduces u exactly.
    """

    X: NDArray[np.complex128]
    Y: NDArray[np.complex128]
    M: NDArray[np.complex128]
    reduced_dim: int | None = None
    X_red: NDArray[np.complex128] | None = None
    Y_red: NDArray[np.complex128] | None = None
    M_red: NDArray[np.complex128] | None = None


def _matrices_in_basis(u_vec: NDArray[np.complex128], F: NDArray[np.complex128]):
    """(X, Y, M) for the columns of F as basis: M[n, p] = <f_p | S f_n>."""
    SaF = np.vstack([F[1:, :], np.zeros((1, F.shape[1]), dtype=np.complex128)])
    X = F.conj().T @ u_vec
    Y = np.conj(F[0, :])
    M = F.conj().T @ SaF
    return X, Y, M


def inversion_data(u: HardyCoeffs, dec: SpectralDecomposition,
                   tol: float = 1e-7) -> InversionData:
    """Assemble X, Y, M in the eigenbasis, with finite-gap reduction if possible.

    The reduction needs the model space (psi_u L^2_+)^perp: the ladder
    vectors from the downward walk are projected out of the low spectral
    window and the remaining rank-N span is orthonormalized (SVD) and
    diagonalized by Rayleigh-Ritz, which untangles eigenvalue collisions
    between model space and ladder (they do occur: degenerate eigenvalues
    mix the eigenvectors).  A failed or inconclusive classification simply
    yields data without reduction.
    """
    if u.K != dec.K:
        raise InvalidParameter("decomposition and potential truncations differ")
    X, Y, M = _matrices_in_basis(u.coeffs, dec.vectors)
    try:
        result = classify(dec, u, tol)
    except Inconclusive:
        return InversionData(X=X, Y=Y, M=M)
    if not result.is_finite_gap:
        return InversionData(X=X, Y=Y, M=M)

    L = build_lax(u, dec.sign).matrix
    n_seed, members, base = _ladder_walk(L, dec)
    n_model = (n_seed + 1) - members
    # Rebuild the ladder span exactly by shifting the base upward.
    W = np.empty((dec.K, members), dtype=np.complex128)
    W[:, 0] = base
    for k in range(1, members):
        W[:, k] = np.concatenate([[0.0], W[:-1, k - 1]])
    if n_model == 0:
        F_red = W[:, :1]
    else:
        V_low = dec.vectors[:, : n_seed + 1]
        B = V_low - W @ (W.conj().T @ V_low)
        U_svd, s, _ = np.linalg.svd(B, full_matrices=False)
        if s[n_model - 1] < 0.5 or (s.shape[0] > n_model and s[n_model] > 1e-6):
            raise BasisDrift(
                f"model-space extraction is rank-ambiguous: singular values "
                f"{s[max(0, n_model - 1):n_model + 1]}")
        model = U_svd[:, :n_model]
        Lm = model.conj().T @ L @ model
        ritz, rot = np.linalg.eigh((Lm + Lm.conj().T) / 2.0)
        model = model @ rot
        F_red = np.hstack([model, W[:, :1]])
    X_red, Y_red, M_red = _matrices_in_basis(u.coeffs, F_red)
    return InversionData(X=X, Y=Y, M=M, reduced_dim=F_red.shape[1],
                         X_red=X_red, Y_red=Y_red, M_red=M_red)


def reconstruct(data: InversionData, z: complex,
                use_reduced: bool | None = None) -> complex:
    """Evaluate u(z) = <(Id - zM)^{-1} X | Y> at a point of the open disc.

    Uses the reduced block when present (or as forced by ``use_reduced``).
    The full system is provably nonsingular for |z| < 1 (the shift adjoint
    is a contraction), so the determinant guard applies to the reduced
    block, whose determinant is an honest degree-N polynomial in z.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise InvalidParameter(f"|z| = {abs(z):.3f} is outside the open disc")
    if use_reduced is None:
        use_reduced = data.reduced_dim is not None
    if use_reduced:
        if data.reduced_dim is None:
            raise InvalidParameter("no reduced data available")
        X, Y, M = data.X_red, data.Y_red, data.M_red
        A = np.eye(M.shape[0], dtype=np.complex128) - z * M
        if abs(np.linalg.det(A)) < 1e-14:
            raise SingularSystem(f"Id - zM singular at z = {z}")
    else:
        X, Y, M = data.X, data.Y, data.M
        A = np.eye(M.shape[0], dtype=np.complex128) - z * M
    xi = np.linalg.solve(A, X)
    return complex(np.vdot(Y, xi))
