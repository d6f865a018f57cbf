"""Thermal-bath spectral functions and the two-atom Kossakowski matrix.

Physical conventions (natural units, hbar = c = k_B = 1):
  - omega : level splitting of each atom, > 0 (units 1/time)
  - beta  : inverse bath temperature, > 0; math.inf encodes the
            zero-temperature bath exactly (no large-float stand-in)
  - ell   : spatial separation of the atoms, >= 0 (units time since c = 1)
  - n     : real unit 3-vector; each free atom Hamiltonian is (omega/2) n.sigma

The bath enters the reduced dynamics only through two real spectra,

    g11(z) = z / (2 pi (1 - exp(-beta z)))        (same-atom)
    g12(z) = g11(z) * sin(ell z) / (ell z)        (cross-atom)

evaluated at z in {+omega, -omega, 0}, and through the geometric psi
tensors built from n.  The resulting coefficient matrix has the 2x2 block
structure [[C11, C12], [C12, C11]] with 3x3 Hermitian blocks; it must be
positive semidefinite for the generated semigroup to be completely
positive.  Two independent constructions are provided: the frequency-sum
(`build_kossakowski_spectral`) and the closed form in terms of the six
coefficients A, B, C, A', B', C' (`build_kossakowski_closed`).  They agree
to ~1e-14 and cross-validate each other in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

# Levi-Civita symbol, epsilon[i, j, k]
_EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPSILON[_i, _j, _k] = 1.0
    _EPSILON[_j, _i, _k] = -1.0

_UNIT_TOL = 1e-12


def _unit_vector(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"axis must be a real 3-vector, got shape {n.shape}")
    if abs(np.linalg.norm(n) - 1.0) > _UNIT_TOL:
        raise ValueError(f"axis must be a unit vector, |n| = {np.linalg.norm(n)!r}")
    return n


@dataclass(frozen=True)
class ModelParams:
    """Physical knobs of the two-atom / thermal-field model.

    beta = math.inf selects the zero-temperature bath branch everywhere.
    """

    omega: float
    beta: float
    ell: float
    n: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be finite and > 0, got {self.omega}")
        if not (self.beta > 0):  # inf allowed
            raise ValueError(f"beta must be > 0 (or inf), got {self.beta}")
        if not (math.isfinite(self.ell) and self.ell >= 0):
            raise ValueError(f"ell must be finite and >= 0, got {self.ell}")
        object.__setattr__(self, "n", _unit_vector(self.n))

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)


@dataclass(frozen=True)
class SpectralValues:
    """Bath spectra at one frequency: g11 same-atom, g12 cross-atom."""

    g11: float
    g12: float
    z: float


@dataclass(frozen=True)
class KossakowskiCoefficients:
    """Closed-form coefficients of the block Kossakowski matrix.

    Unprimed values parametrize the same-atom block C11 = A 1 - iB eps.n
    + C nn^T; primed values the cross-atom block C12.  Units 1/time.
    """

    A: float
    B: float
    C: float
    Ap: float
    Bp: float
    Cp: float


@dataclass(frozen=True)
class PsiTensors:
    """Geometric projectors onto the 0, +, - frequency sectors of n."""

    psi0: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray


@dataclass(frozen=True)
class KossakowskiMatrix:
    """Block Kossakowski matrix; c22 = c11 and c21 = c12 by symmetry."""

    c11: np.ndarray
    c12: np.ndarray
    n: np.ndarray

    @property
    def c22(self) -> np.ndarray:
        return self.c11

    @property
    def c21(self) -> np.ndarray:
        return self.c12

    @property
    def matrix(self) -> np.ndarray:
        """6x6 Hermitian form, indexed by (atom, direction)."""
        return np.block([[self.c11, self.c12], [self.c12, self.c11]])


def _sinc(x: float) -> float:
    """sin(x)/x with the exact value 1 at x = 0."""
    return float(np.sinc(x / np.pi))


def _bose_weighted(beta: float, z: float) -> float:
    """z / (1 - exp(-beta z)) for finite beta, stable for all real z.

    A series branch handles |beta z| < 1e-6 (the expression is 0/0 at
    z = 0); the two-sided exponential form avoids overflow for large
    |beta z| of either sign.
    """
    x = beta * z
    if abs(x) < 1e-6:
        # x/(1 - e^-x) = 1 + x/2 + x^2/12 - x^4/720 + O(x^6)
        return (1.0 + x / 2.0 + x * x / 12.0 - x**4 / 720.0) / beta
    if x > 0:
        return z / -math.expm1(-x)
    return z * math.exp(x) / math.expm1(x)


def spectral_density(params: ModelParams, z: float) -> SpectralValues:
    """Evaluate the thermal spectra g11 and g12 at frequency z.

    Zero temperature gives g11(z) = z/2pi for z > 0 and 0 for z <= 0.
    The cross spectrum carries the sinc(ell z) suppression factor.
    """
    if not math.isfinite(z):
        raise ValueError(f"frequency must be finite, got {z}")
    if params.zero_temperature:
        g11 = z / TWO_PI if z > 0 else 0.0
    else:
        g11 = _bose_weighted(params.beta, z) / TWO_PI
    g12 = g11 * _sinc(params.ell * z)
    return SpectralValues(g11=g11, g12=g12, z=z)


def kossakowski_coefficients(params: ModelParams) -> KossakowskiCoefficients:
    """Closed-form A, B, C (same-atom) and primed variants (cross-atom).

    B = omega/4pi exactly; A carries the coth(beta omega / 2) thermal
    enhancement; A + C equals the zero-frequency spectrum 1/(2 pi beta).
    Primed values differ by the sinc(omega ell) factor, except Cp whose
    zero-frequency part has ell -> 0 built in (sinc(0) = 1).
    """
    w = params.omega
    B = w / (4.0 * math.pi)
    if params.zero_temperature:
        A = B
        g0 = 0.0
    else:
        A = B / math.tanh(params.beta * w / 2.0)
        g0 = 1.0 / (TWO_PI * params.beta)
    C = g0 - A
    s = _sinc(w * params.ell)
    return KossakowskiCoefficients(A=A, B=B, C=C, Ap=A * s, Bp=B * s, Cp=g0 - A * s)


def temperature_ratio(params: ModelParams) -> float:
    """R = B/A = tanh(beta omega / 2); equals 1 at zero temperature."""
    if params.zero_temperature:
        return 1.0
    return math.tanh(params.beta * params.omega / 2.0)


def psi_tensors(n) -> PsiTensors:
    """psi0 = n n^T and psi+- = (1 - n n^T +- i eps.n)/2 for unit n."""
    n = _unit_vector(n)
    p0 = np.outer(n, n).astype(complex)
    eps_n = np.einsum("ijk,k->ij", _EPSILON, n)
    perp = np.eye(3) - np.outer(n, n)
    return PsiTensors(
        psi0=p0,
        psi_plus=0.5 * (perp + 1j * eps_n),
        psi_minus=0.5 * (perp - 1j * eps_n),
    )


def build_kossakowski_spectral(params: ModelParams) -> KossakowskiMatrix:
    """Assemble the Kossakowski blocks from the frequency sum.

    C^(ab)_ij = sum_{xi in {+,-,0}} g_ab(xi omega) sum_k psi^(xi)_ki psi^(-xi)_kj
    """
    psi = psi_tensors(params.n)
    pairs = (
        (psi.psi_plus, psi.psi_minus, +params.omega),
        (psi.psi_minus, psi.psi_plus, -params.omega),
        (psi.psi0, psi.psi0, 0.0),
    )
    c11 = np.zeros((3, 3), dtype=complex)
    c12 = np.zeros((3, 3), dtype=complex)
    for psi_xi, psi_mxi, z in pairs:
        weight = np.einsum("ki,kj->ij", psi_xi, psi_mxi)
        sv = spectral_density(params, z)
        c11 += sv.g11 * weight
        c12 += sv.g12 * weight
    return KossakowskiMatrix(c11=c11, c12=c12, n=params.n)


def kossakowski_from_coefficients(coeffs: KossakowskiCoefficients, n) -> KossakowskiMatrix:
    """Blocks A 1 - iB eps.n + C nn^T (and primed analogue) for given coefficients."""
    n = _unit_vector(n)
    eps_n = np.einsum("ijk,k->ij", _EPSILON, n)
    nn = np.outer(n, n)
    eye = np.eye(3)
    c11 = coeffs.A * eye - 1j * coeffs.B * eps_n + coeffs.C * nn
    c12 = coeffs.Ap * eye - 1j * coeffs.Bp * eps_n + coeffs.Cp * nn
    return KossakowskiMatrix(c11=c11, c12=c12, n=n)


def build_kossakowski_closed(params: ModelParams) -> KossakowskiMatrix:
    """Assemble the Kossakowski blocks from the closed-form coefficients."""
    return kossakowski_from_coefficients(kossakowski_coefficients(params), params.n)


def psd_check(K) -> float:
    """Minimum eigenvalue of the 6x6 Hermitian Kossakowski form.

    Accepts a KossakowskiMatrix or a raw 6x6 array; a non-Hermitian array
    is rejected.  Complete positivity of the generated semigroup requires
    the returned value >= -1e-12 times the spectral norm.
    """
    m = K.matrix if isinstance(K, KossakowskiMatrix) else np.asarray(K, dtype=complex)
    if m.shape != (6, 6):
        raise ValueError(f"expected a 6x6 matrix, got shape {m.shape}")
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.conj().T).max() > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian")
    return float(np.linalg.eigvalsh(m).min())
