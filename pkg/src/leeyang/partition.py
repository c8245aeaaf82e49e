"""Log-domain construction of the zero-field partition polynomial.

Each builder returns the coefficients p_n of Z(beta, h) / e^{beta*N*s*h} as a
polynomial in z = exp(-beta*h), with p_n the zero-field partition function of
the sector where the total projection equals N*s - n.  Coefficients are kept
as natural logs because the Boltzmann weights span hundreds of orders of
magnitude at low temperature.
"""

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.special import logsumexp

from .spins import HalfInt, projections

ENUMERATION_CAP = 2_000_000


@dataclass(frozen=True)
class PartitionPolynomial:
    """Degree-2Ns polynomial in z with positive coefficients, stored in logs."""

    two_ns: int
    beta: float
    log_coeffs: np.ndarray = field(repr=False)
    model_tag: dict = field(default_factory=dict)

    def __post_init__(self):
        lc = np.asarray(self.log_coeffs, dtype=float)
        if lc.shape != (self.two_ns + 1,):
            raise ValueError(f"expected {self.two_ns + 1} coefficients, got {lc.shape}")
        if not np.all(np.isfinite(lc)):
            raise ValueError("non-finite log coefficient encountered")
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        object.__setattr__(self, "log_coeffs", lc)

    @property
    def degree(self):
        return self.two_ns

    def coeffs(self) -> np.ndarray:
        """Max-normalized linear coefficients c_n = exp(log p_n - max log p)."""
        return np.exp(self.log_coeffs - self.log_coeffs.max())


def _validate_ferromagnetic(J, name="J"):
    if J < 0:
        raise ValueError(f"{name} must be non-negative (ferromagnetic), got {J}")


def _validate_beta(beta):
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")


def build_exact(spins, couplings, beta) -> PartitionPolynomial:
    """Exact enumeration over all projection configurations.

    ``couplings[i][j]`` is the pair coupling J_ij (units J, zero diagonal);
    the configuration weight is exp(beta * sum_{i<j} J_ij m_i m_j).
    """
    _validate_beta(beta)
    spins = list(spins)
    if not spins:
        raise ValueError("need at least one bath spin")
    n = len(spins)
    J = np.asarray(couplings, dtype=float)
    if J.shape != (n, n):
        raise ValueError(f"couplings must be {n}x{n}, got {J.shape}")
    if not np.allclose(J, J.T, rtol=0, atol=1e-12):
        raise ValueError("couplings matrix must be symmetric")
    if np.any(np.abs(np.diag(J)) > 0):
        raise ValueError("couplings matrix must have zero diagonal")
    if np.any(J < 0):
        raise ValueError("couplings must be non-negative (ferromagnetic)")

    count = 1
    for s in spins:
        count *= s.doubled + 1
    if count > ENUMERATION_CAP:
        raise ValueError(
            f"{count} configurations exceed the enumeration cap {ENUMERATION_CAP}"
        )

    projs = [np.array([float(m) for m in projections(s)]) for s in spins]
    grids = np.meshgrid(*projs, indexing="ij")
    M = np.stack([g.ravel() for g in grids], axis=1)  # (count, n)
    # zero diagonal makes the full quadratic form twice the i<j pair sum
    expo = 0.5 * beta * np.einsum("ci,ij,cj->c", M, J, M)
    s_total = sum(s.doubled for s in spins) / 2
    n_idx = np.rint(s_total - M.sum(axis=1)).astype(int)
    two_ns = sum(s.doubled for s in spins)
    log_c = np.array([logsumexp(expo[n_idx == k]) for k in range(two_ns + 1)])
    tag = {
        "kind": "exact",
        "n_spins": n,
        "two_spins": [s.doubled for s in spins],
        "beta": beta,
    }
    return PartitionPolynomial(two_ns, beta, log_c, tag)


def _log_convolve(a, b):
    out = np.empty(len(a) + len(b) - 1)
    for k in range(len(out)):
        lo = max(0, k - len(b) + 1)
        hi = min(len(a) - 1, k)
        i = np.arange(lo, hi + 1)
        out[k] = logsumexp(a[i] + b[k - i])
    return out


def build_long_range(N: int, s: HalfInt, J: float, beta: float) -> PartitionPolynomial:
    """All-pairs coupling J/N: energy -(J/2N)[(sum m_i)^2 - sum m_i^2].

    The sector weights are an N-fold convolution of single-site factors
    exp(-(beta*J/2N) m^2), multiplied by the prefactor
    exp((beta*J/2N)(Ns - n)^2).
    """
    if not isinstance(N, int) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    _validate_ferromagnetic(J)
    _validate_beta(beta)
    a = beta * J / (2 * N)
    site = np.array([-a * float(m) ** 2 for m in projections(s)])
    log_w = reduce(_log_convolve, [site] * N)
    two_ns = N * s.doubled
    ns = two_ns / 2
    pref = a * (ns - np.arange(two_ns + 1)) ** 2
    tag = {"kind": "long_range", "n_spins": N, "two_s": s.doubled, "J": J, "beta": beta}
    return PartitionPolynomial(two_ns, beta, pref + log_w, tag)


def long_range_integral_oracle(N: int, s: HalfInt, J: float, beta: float, n: int) -> float:
    """Independent quadrature route to a single long-range coefficient p_n.

    Projects the N-th power of the single-site characteristic sum onto the
    sector Ns - n with uniform trapezoid quadrature over one period, doubling
    the node count until two successive values agree to 1e-12 relative.
    """
    if not isinstance(N, int) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    _validate_ferromagnetic(J)
    _validate_beta(beta)
    two_ns = N * s.doubled
    if not 0 <= n <= two_ns:
        raise ValueError(f"n={n} out of range [0, {two_ns}]")
    a = beta * J / (2 * N)
    ms = np.array([float(m) for m in projections(s)])
    target = two_ns / 2 - n
    weights = np.exp(-a * ms**2)
    nodes = 8 * (two_ns + 1)
    prev = None
    while True:
        phi = 2 * np.pi * np.arange(nodes) / nodes
        char = (weights[:, None] * np.cos(np.outer(ms, phi))).sum(axis=0)
        integral = np.mean(np.exp(-1j * phi * target) * char**N)
        if abs(integral.imag) > 1e-10 * max(abs(integral.real), 1e-300):
            raise RuntimeError(
                f"quadrature imaginary residue {integral.imag} too large"
            )
        val = integral.real
        if prev is not None and abs(val - prev) <= 1e-12 * abs(val):
            break
        if nodes > 2**22:
            break
        prev = val
        nodes *= 2
    return math.exp(a * target**2) * val


def _polymat_mul(A, B):
    """Product of two matrix-valued polynomials, exact in the degree index."""
    da, db = A.shape[0] - 1, B.shape[0] - 1
    D = A.shape[1]
    C = np.zeros((da + db + 1, D, D))
    for i in range(da + 1):
        for j in range(db + 1):
            C[i + j] += A[i] @ B[j]
    return C


def build_ring(N: int, s: HalfInt, J: float, beta: float) -> PartitionPolynomial:
    """Nearest-neighbor ring via a transfer matrix with polynomial entries.

    V[m, m'] = exp(beta*J*m*m') z^{s-m}; the coefficients of Tr[V^N] are the
    p_n.  Matrix entries are rescaled after every multiplication and the log
    scale accumulated, so arbitrary beta*J stays representable.
    """
    if not isinstance(N, int) or N < 3:
        raise ValueError(f"ring needs N >= 3 spins, got {N!r}")
    _validate_ferromagnetic(J)
    _validate_beta(beta)
    ms = np.array([float(m) for m in projections(s)])
    D = s.doubled + 1
    bond = np.exp(beta * J * np.outer(ms, ms) - beta * J * float(s) ** 2)
    log_scale = N * beta * J * float(s) ** 2
    V = np.zeros((s.doubled + 1, D, D))
    for row, m in enumerate(projections(s)):
        k = (s.doubled - m.doubled) // 2  # z-power carried by this row
        V[k, row, :] = bond[row, :]
    acc = V
    for _ in range(N - 1):
        acc = _polymat_mul(acc, V)
        peak = acc.max()
        acc /= peak
        log_scale += math.log(peak)
    coeff = np.trace(acc, axis1=1, axis2=2)
    if np.any(coeff <= 0):
        raise RuntimeError("transfer-matrix coefficient underflowed to zero")
    two_ns = N * s.doubled
    tag = {"kind": "ring", "n_spins": N, "two_s": s.doubled, "J": J, "beta": beta}
    return PartitionPolynomial(two_ns, beta, np.log(coeff) + log_scale, tag)


def eval_ratio(poly: PartitionPolynomial, z: complex) -> complex:
    """Z(beta, h_complex) / Z(beta, 0) at z = exp(-beta*h_complex).

    Evaluated on max-normalized coefficients; for |z| = 1 the modulus is
    bounded by 1 up to rounding.
    """
    c = poly.coeffs()
    return np.polynomial.polynomial.polyval(z, c) / c.sum()
