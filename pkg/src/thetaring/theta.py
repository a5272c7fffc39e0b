"""Theta constants ``f_{a,q}`` and their Fourier-Jacobi coefficients.

``f_{a,q}(Z) = sum_n exp(pi i q Z[n + a/q])`` is summed over a ball chosen
from the smallest eigenvalue of ``Im Z`` so that the neglected Gaussian tail
is below the requested tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

RANK_RTOL = 1e-6
TAIL_MARGIN = 10.0
MAX_POINTS = 5_000_000


@dataclass(frozen=True)
class ThetaChar:
    """Characteristic ``a`` mod ``q``, stored as the smaller of ``+-a`` mod ``q``."""

    a: tuple[int, ...]
    q: int

    def __post_init__(self):
        if self.q <= 0 or self.q % 2:
            raise ValueError("q must be a positive even integer")
        a = tuple(int(x) % self.q for x in self.a)
        neg = tuple((-x) % self.q for x in a)
        object.__setattr__(self, "a", min(a, neg))

    @property
    def g(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class PeriodPoint:
    """A point of the Siegel half space, split as ``[[tau, z'], [z, W]]``."""

    Z: np.ndarray

    def __post_init__(self):
        Z = np.atleast_2d(np.asarray(self.Z, dtype=complex))
        if Z.shape[0] != Z.shape[1] or not np.allclose(Z, Z.T):
            raise ValueError("Z must be square and symmetric")
        if np.linalg.eigvalsh(Z.imag).min() <= 0:
            raise ValueError("Im Z must be positive definite")
        object.__setattr__(self, "Z", Z)

    def split(self, g1: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return ``(tau, z, W)`` with ``z`` of shape ``(g2, g1)``."""
        Z = self.Z
        return Z[:g1, :g1], Z[g1:, :g1], Z[g1:, g1:]

    @classmethod
    def from_blocks(cls, tau, z, W) -> "PeriodPoint":
        tau, W = np.atleast_2d(tau), np.atleast_2d(W)
        z = np.asarray(z, dtype=complex).reshape(W.shape[0], tau.shape[0])
        return cls(np.block([[tau, z.T], [z, W]]))


def _radius(mu: float, q: float, tol: float) -> float:
    """Radius with ``pi q mu R^2 >= -log(tol) + margin``."""
    return math.sqrt((-math.log(tol) + TAIL_MARGIN) / (math.pi * q * mu))


def _ball(center: np.ndarray, R: float) -> np.ndarray:
    """Integer vectors ``n`` with ``|n + center| <= R``, in a fixed order."""
    g = center.size
    ranges = [np.arange(math.floor(-R - c), math.ceil(R - c) + 1) for c in center]
    size = math.prod(len(r) for r in ranges)
    if size > MAX_POINTS:
        raise ValueError(f"summation box has {size} points; Im Z too degenerate")
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, g)
    x = grid + center
    return grid[np.einsum("ni,ni->n", x, x) <= R * R]


def _min_eig(Y: np.ndarray) -> float:
    mu = float(np.linalg.eigvalsh(Y).min())
    if mu <= 1e-8 * max(1.0, float(np.abs(Y).max())):
        raise ValueError("Im is numerically singular; tail bound unusable")
    return mu


def theta_constant(ch: ThetaChar, Z, tol: float = 1e-12) -> complex:
    """``sum_n exp(pi i q Z[n + a/q])`` with discarded tail below ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    Z = Z.Z if isinstance(Z, PeriodPoint) else np.atleast_2d(np.asarray(Z, dtype=complex))
    if Z.shape != (ch.g, ch.g):
        raise ValueError("Z does not match the characteristic")
    q = ch.q
    mu = _min_eig(Z.imag)
    c = np.array(ch.a, dtype=float) / q
    x = _ball(c, _radius(mu, q, tol)) + c
    expo = np.pi * 1j * q * np.einsum("ni,ij,nj->n", x, Z, x)
    return complex(np.exp(expo).sum())


def fourier_jacobi(
    a: Sequence[int], q: int, g1: int, tau, z, tol: float = 1e-12
) -> complex:
    """Coefficient of ``exp(pi i tr(T W) / q)``, ``T = a2 a2'``, for the branch ``a2``.

    ``sum_{n1} exp(pi i / q (tau[q n1 + a1] + 2 a2' z (q n1 + a1)))`` with
    ``a = (a1, a2)``; ``z`` has shape ``(g2, g1)``.  The lower block ``a2``
    is used as given, not reduced mod ``q``.
    """
    a = [int(x) for x in a]
    a1, a2 = np.array(a[:g1], dtype=float), np.array(a[g1:], dtype=float)
    if math.gcd(*a[g1:]) != 1:
        raise ValueError("lower block a2 must be primitive")
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    z = np.asarray(z, dtype=complex).reshape(len(a2), g1)
    if tau.shape != (g1, g1):
        raise ValueError("tau has the wrong shape")
    # linear term 2 a2' z m1 shifts the Gaussian; widen the ball by its pull
    lin = a2 @ z
    mu = _min_eig(tau.imag)
    shift = np.abs(np.linalg.solve(tau.imag, lin.imag)).max() if g1 else 0.0
    R = _radius(mu, q, tol) + shift / q
    m = q * _ball(a1 / q, R) + a1
    expo = np.pi * 1j / q * (np.einsum("ni,ij,nj->n", m, tau, m) + 2 * m @ lin)
    return complex(np.exp(expo).sum())


def fj_coefficient(a: Sequence[int], q: int, g1: int, tau, z, tol: float = 1e-12) -> complex:
    """Full coefficient of frequency ``T = a2 a2'``: both branches ``+-a2`` that are ``= a2`` mod ``q``."""
    a = [int(x) for x in a]
    a1, a2 = a[:g1], a[g1:]
    total = fourier_jacobi(a, q, g1, tau, z, tol)
    if all((x + x) % q == 0 for x in a2):
        # -a2 is congruent to a2; substituting m1 -> -m1 gives the a1 -> -a1 series
        total += fourier_jacobi([-x for x in a1] + a2, q, g1, tau, z, tol)
    return total


def fj_consistency(
    ch: ThetaChar,
    g1: int,
    tau,
    z,
    imW: float = 6.0,
    N: int = 64,
    W0: float = 0.0,
    tol: float = 1e-13,
) -> float:
    """Compare a DFT in ``Re W`` of ``f_{a,q}`` with the Fourier-Jacobi formula.

    Needs ``g2 = 1``.  Samples ``W = W0 + 2q j / N + i imW`` over one period;
    the frequency ``T = a2^2`` lands in bin ``T mod N`` and aliases are damped
    by ``exp(-pi imW N / q)``.
    """
    g2 = ch.g - g1
    if g2 != 1:
        raise ValueError("consistency check needs g2 = 1")
    if N < 16 or N & (N - 1):
        raise ValueError("N must be a power of two >= 16")
    T = ch.a[-1] ** 2
    if T >= N:
        raise ValueError("N too small for the frequency")
    q = ch.q
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    z = np.asarray(z, dtype=complex).reshape(1, g1)
    xs = W0 + 2 * q * np.arange(N) / N
    vals = np.array(
        [theta_constant(ch, PeriodPoint.from_blocks(tau, z, x + 1j * imW), tol) for x in xs]
    )
    # coefficient of exp(pi i T x / q) on a period of length 2q
    phase = np.exp(-np.pi * 1j * T * xs / q)
    extracted = (vals * phase).mean()
    expected = fj_coefficient(ch.a, q, g1, tau, z, tol) * math.exp(-math.pi * imW * T / q)
    return float(abs(extracted - expected))


def numerical_rank(M: np.ndarray, rtol: float = RANK_RTOL, normalize: bool = True) -> int:
    """Singular values above ``rtol`` times the largest, rows scaled to unit norm first."""
    M = np.asarray(M, dtype=complex)
    if normalize:
        norms = np.linalg.norm(M, axis=1, keepdims=True)
        M = M / np.where(norms == 0, 1, norms)
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int((s >= rtol * s[0]).sum())


def fj_rank(
    q: int,
    a2,
    tau0,
    samples: int = 16,
    seed: int = 0,
    g1: int = 1,
    rtol: float = RANK_RTOL,
    extra_rows: Optional[int] = None,
) -> int:
    """Rank of ``f^T`` over ``a1`` in ``(Z/q)^g1`` evaluated at random ``z``.

    ``extra_rows`` appends a copy of that row, which must not change the rank.
    """
    a2 = [int(x) for x in np.atleast_1d(a2)]
    if math.gcd(*a2) != 1:
        raise ValueError("a2 must be primitive")
    if samples < 2 * q:
        raise ValueError("need at least 2q samples")
    tau0 = np.atleast_2d(np.asarray(tau0, dtype=complex))
    rng = np.random.default_rng(seed)
    g2 = len(a2)
    zs = rng.uniform(0, q, (samples, g2, g1)) + 1j * rng.uniform(-0.5, 0.5, (samples, g2, g1))
    reps = list(itertools.product(range(q), repeat=g1))
    rows = [
        [fourier_jacobi(list(a1) + a2, q, g1, tau0, z) for z in zs] for a1 in reps
    ]
    if extra_rows is not None:
        rows.append(rows[extra_rows])
    return numerical_rank(np.array(rows), rtol)
