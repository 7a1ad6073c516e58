"""Named reference potentials with closed-form data, plus seeded random draws.

Two exactly solvable examples anchor most oracle tests:

  appendix1   u = sqrt(1-|p|^2)/(1 - p z), default p = 0.5 (focusing).
              Spectrum {-1, 0, 1, 2, ...}: the potential itself is the
              eigenvector at -1, and psi = (z - conj p)/(1 - p z) heads the
              integer ladder.  A 0-gap potential whose f_1 != S f_0.
  appendix2   u = sqrt(2(1-|p|^4)) z/(1 - p^2 z^2), default p = 0.6
              (focusing).  Spectrum {-1, 0, 0, 1, 2, ...} with a double
              eigenvalue 0 shared by the constant 1 and the degree-2
              Blaschke ladder head; <u|f_n> = 0 for every n >= 1 even
              though the gap nu_2 - nu_1 - 1 = -1 does not vanish.

The traveling-wave fixtures (pole, modulated, stationary, plane) are
re-exported here as finite-gap records too: the wave constraint
alpha beta + beta^2/(1-|p|^2) = +/-N is literally the residue condition of
the single-pole system, and the modulated wave is the m0 = m case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .finitegap import FiniteGapPotential, ladder_blaschke
from .hardy import BlaschkeProduct, HardyCoeffs
from .waves import WaveParams, make_wave, sample_wave

__all__ = [
    "Fixture",
    "make_fixture",
    "appendix1",
    "appendix2",
    "random_decaying",
    "random_pole_config",
    "RATIONAL_FIXTURES",
    "WAVE_SPEED_FIXTURES",
]

#: Fixture names with rational (finite-gap) profiles, used by the identity
#: and inversion acceptance sweeps.
RATIONAL_FIXTURES = (
    "appendix1",
    "appendix2",
    "wave:defocusing:1:0.5:1",
    "wave:focusing:1:0.5:1",
    "stationary:1:0.5",
    "modulated:3:0.5",
)

#: (fixture name, exact speed) pairs for the speed-measurement sweep.
WAVE_SPEED_FIXTURES = (
    ("wave:defocusing:1:0.5:1", 11.0 / 3.0),
    ("wave:focusing:1:0.5:1", -1.0 / 3.0),
    ("stationary:1:0.5", 0.0),
)


@dataclass(frozen=True)
class Fixture:
    """A named potential with whatever exact data is known for it."""

    name: str
    kind: str
    sign: str
    p: complex = 0.0
    wave: WaveParams | None = None
    finite_gap: FiniteGapPotential | None = None

    def coeffs(self, K: int) -> HardyCoeffs:
        """Exact Fourier coefficients (closed form, not via grid sampling)."""
        if self.wave is not None:
            return sample_wave(self.wave, 0.0, K)
        c = np.zeros(K, dtype=np.complex128)
        p = self.p
        if self.kind == "appendix1":
            amp = np.sqrt(1.0 - abs(p) ** 2)
            c[:] = amp * p ** np.arange(K)
        elif self.kind == "appendix2":
            amp = np.sqrt(2.0 * (1.0 - abs(p) ** 4))
            odd = np.arange(1, K, 2)
            c[odd] = amp * p ** (odd - 1)
        else:
            raise InvalidParameter(f"no closed-form coefficients for {self.kind}")
        return HardyCoeffs(c)

    def blaschke(self) -> BlaschkeProduct | None:
        """Ladder-generating Blaschke product, when the fixture has one."""
        if self.finite_gap is not None:
            return ladder_blaschke(self.finite_gap)
        return None

    def spectrum_head(self, count: int):
        """Leading exact eigenvalues, or None when not certified."""
        if self.kind == "appendix1":
            return np.array([-1.0] + list(range(count - 1)), dtype=float)[:count]
        if self.kind == "appendix2":
            return np.array([-1.0, 0.0] + list(range(count - 2)), dtype=float)[:count]
        if (self.kind == "wave" and self.sign == "defocusing"
                and self.wave is not None and self.wave.N == 1):
            # One model eigenvalue lam_0 = (c - N)/2, then the unit ladder
            # from lam_u = N + ||u||^2.
            lam0 = (self.wave.c - 1.0) / 2.0
            lam_u = 1.0 + (self.wave.alpha ** 2 + self.wave.alpha * self.wave.beta - 1.0)
            return np.array([lam0] + [lam_u + k for k in range(count - 1)])[:count]
        return None


def appendix1(p: complex = 0.5) -> Fixture:
    fg = FiniteGapPotential(sign="focusing", m0=0, poles=(p,), mults=(1,),
                            a=0.0, residues=(np.sqrt(1.0 - abs(p) ** 2),))
    return Fixture(name="appendix1", kind="appendix1", sign="focusing", p=p,
                   finite_gap=fg)


def appendix2(p: complex = 0.6) -> Fixture:
    c1 = np.sqrt(2.0 * (1.0 - abs(p) ** 4)) / (2.0 * p)
    fg = FiniteGapPotential(sign="focusing", m0=0, poles=(p, -p), mults=(1, 1),
                            a=0.0, residues=(c1, -c1))
    return Fixture(name="appendix2", kind="appendix2", sign="focusing", p=p,
                   finite_gap=fg)


def _wave_to_finite_gap(w: WaveParams) -> FiniteGapPotential:
    """Wave parameters as a residue-system record (same constraint).

    For the pole family at base frequency N the denominator factors as
    1 - p e^{iNx} = prod_j (1 - p_j e^{ix}) over the N-th roots
    p_j = p^{1/N} omega^j, with equal partial-fraction residues beta/N;
    the per-pole residue condition then reads (alpha beta + beta^2 q)/N
    = +/-1, i.e. exactly the wave constraint divided by N.
    """
    ph = np.exp(1j * w.theta)
    if w.family == "plane":
        return FiniteGapPotential(sign=w.sign, m0=w.N, poles=(), mults=(),
                                  a=w.beta * ph, residues=())
    if w.family == "modulated":
        return FiniteGapPotential(sign=w.sign, m0=w.N, poles=(w.p,), mults=(1,),
                                  a=w.alpha * ph, residues=(w.beta * ph,))
    N = w.N
    root = abs(w.p) ** (1.0 / N) * np.exp(1j * np.angle(w.p) / N)
    omega = np.exp(2j * np.pi / N)
    poles = tuple(root * omega ** j for j in range(N))
    residues = (w.beta * ph / N,) * N
    return FiniteGapPotential(sign=w.sign, m0=0, poles=poles, mults=(1,) * N,
                              a=w.alpha * ph, residues=residues)


def make_fixture(name: str, p: complex | None = None,
                 sign: str | None = None) -> Fixture:
    """Build a fixture from its name.

    Recognized forms: ``appendix1``, ``appendix2`` (optional p override),
    ``wave:SIGN:N:P:BETA``, ``plane:N:C``, ``modulated:M:P``,
    ``stationary:N:P``.  ``sign`` overrides the default for sign-agnostic
    fixtures (plane waves).
    """
    parts = name.split(":")
    head = parts[0]
    if head == "appendix1":
        return appendix1(0.5 if p is None else p)
    if head == "appendix2":
        return appendix2(0.6 if p is None else p)
    if head == "wave":
        if len(parts) != 5:
            raise InvalidParameter("expected wave:SIGN:N:P:BETA")
        wsign, N, pw, beta = parts[1], int(parts[2]), complex(parts[3]), float(parts[4])
        w = make_wave(wsign, "pole", N=N, p=pw, beta=beta)
        return Fixture(name=name, kind="wave", sign=wsign, p=pw, wave=w,
                       finite_gap=_wave_to_finite_gap(w))
    if head == "plane":
        if len(parts) != 3:
            raise InvalidParameter("expected plane:N:C")
        N, C = int(parts[1]), complex(parts[2])
        w = make_wave(sign or "focusing", "plane", N=N, C=C)
        return Fixture(name=name, kind="plane", sign=sign or "focusing",
                       wave=w, finite_gap=_wave_to_finite_gap(w))
    if head == "modulated":
        if len(parts) != 3:
            raise InvalidParameter("expected modulated:M:P")
        m, pw = int(parts[1]), complex(parts[2])
        w = make_wave("focusing", "modulated", N=m, p=pw)
        return Fixture(name=name, kind="modulated", sign="focusing", p=pw,
                       wave=w, finite_gap=_wave_to_finite_gap(w))
    if head == "stationary":
        if len(parts) != 3:
            raise InvalidParameter("expected stationary:N:P")
        N, pw = int(parts[1]), complex(parts[2])
        w = make_wave("focusing", "stationary", N=N, p=pw)
        return Fixture(name=name, kind="stationary", sign="focusing", p=pw,
                       wave=w, finite_gap=_wave_to_finite_gap(w))
    raise InvalidParameter(f"unknown fixture {name!r}")


def random_decaying(seed, K: int, rho: float = 0.8) -> HardyCoeffs:
    """Seeded draw with |u_hat(n)| <= rho^n: uniform disc amplitudes times rho^n."""
    rng = np.random.default_rng(seed)
    radii = np.sqrt(rng.uniform(0.0, 1.0, K))
    angles = rng.uniform(0.0, 2.0 * np.pi, K)
    return HardyCoeffs(radii * np.exp(1j * angles) * rho ** np.arange(K))


def random_pole_config(seed):
    """Seeded pole configuration: r <= 3 distinct poles, |p| in [0.25, 0.65],
    pairwise separation >= 0.2, multiplicities in {1, 2}, m0 in {0, 1}."""
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, 4))
    poles: list[complex] = []
    while len(poles) < r:
        cand = rng.uniform(0.25, 0.65) * np.exp(2j * np.pi * rng.uniform())
        if all(abs(cand - q) >= 0.2 for q in poles):
            poles.append(complex(cand))
    mults = tuple(int(m) for m in rng.integers(1, 3, size=r))
    m0 = int(rng.integers(0, 2))
    return m0, tuple(poles), mults
