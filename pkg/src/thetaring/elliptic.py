"""Weierstrass functions on ``C / (Z + Z tau)`` and rational functions on ``E x E``.

``wp`` uses the q-expansion in ``u = exp(2 pi i z)`` after moving ``z`` into
the strip ``|Im z| <= Im tau / 2``.  Derivatives beyond the first come from
``wp'' = 6 wp^2 - g2/2`` and its consequences, never from finite differences.
"""

from __future__ import annotations

import cmath
import itertools
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

from . import intmat
from .theta import RANK_RTOL, numerical_rank

POLE_GUARD = 1e-6
DIVISOR_RADIUS = 0.05
OVERSAMPLE = 2


# -- lattice data -------------------------------------------------------------


def _divisor_sums(n: int, k: int) -> np.ndarray:
    s = np.zeros(n + 1)
    for d in range(1, n + 1):
        s[d::d] += float(d) ** k
    return s


@dataclass(frozen=True)
class Tau:
    """A point of the upper half plane with its invariants ``g2, g3``."""

    tau: complex

    def __post_init__(self):
        t = complex(self.tau)
        if t.imag <= 0:
            raise ValueError("Im tau must be positive")
        object.__setattr__(self, "tau", t)

    @property
    def nome(self) -> complex:
        """``exp(pi i tau)``."""
        return cmath.exp(1j * math.pi * self.tau)

    @property
    def invariants(self) -> tuple[complex, complex]:
        return g2g3(self.tau)

    @property
    def discriminant(self) -> complex:
        g2, g3 = self.invariants
        return g2**3 - 27 * g3**2


def _as_tau(tau) -> complex:
    t = tau.tau if isinstance(tau, Tau) else complex(tau)
    if t.imag <= 0:
        raise ValueError("Im tau must be positive")
    return t


def _n_terms(tau: complex) -> int:
    """Number of q-powers needed for double precision."""
    r = abs(cmath.exp(2j * math.pi * tau))
    return max(4, int(math.ceil(40 / -math.log(r))) + 2)


@lru_cache(maxsize=256)
def g2g3(tau) -> tuple[complex, complex]:
    """Invariants with ``wp'^2 = 4 wp^3 - g2 wp - g3`` for the lattice ``Z + Z tau``."""
    tau = _as_tau(tau)
    n = _n_terms(tau)
    qq = np.exp(2j * np.pi * tau * np.arange(n + 1))
    e4 = 1 + 240 * np.dot(_divisor_sums(n, 3)[1:], qq[1:])
    e6 = 1 - 504 * np.dot(_divisor_sums(n, 5)[1:], qq[1:])
    return complex(4 * math.pi**4 / 3 * e4), complex(8 * math.pi**6 / 27 * e6)


def reduce_argument(tau, z) -> np.ndarray:
    """Translate ``z`` by lattice vectors into ``|Im z| <= Im tau / 2``, ``|Re z| <= 1/2``."""
    tau = _as_tau(tau)
    z = np.asarray(z, dtype=complex)
    k = np.round(z.imag / tau.imag)
    z = z - k * tau
    return z - np.round(z.real)


def lattice_distance(tau, z) -> np.ndarray:
    """Distance from ``z`` to the nearest point of ``Z + Z tau``."""
    tau = _as_tau(tau)
    z = reduce_argument(tau, z)
    best = np.abs(z)
    for m, n in itertools.product((-1, 0, 1), repeat=2):
        best = np.minimum(best, np.abs(z - m - n * tau))
    return best


def _wp01(tau: complex, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``wp`` and ``wp'`` for reduced, pole-free arguments."""
    n = _n_terms(tau)
    qn = np.exp(2j * np.pi * tau * np.arange(1, n + 1))
    u = np.exp(2j * np.pi * z)[..., None]
    const = 1 / 12 - 2 * np.sum(qn / (1 - qn) ** 2)
    v = qn * u
    w = qn / u
    u0 = u[..., 0]
    p = u0 / (1 - u0) ** 2 + np.sum(v / (1 - v) ** 2 + w / (1 - w) ** 2, axis=-1) + const
    dp = u0 * (1 + u0) / (1 - u0) ** 3 + np.sum(
        v * (1 + v) / (1 - v) ** 3 - w * (1 + w) / (1 - w) ** 3, axis=-1
    )
    c = 2j * np.pi
    return c**2 * p, c**3 * dp


def wp_derivs(tau, z, kmax: int = 2) -> list[np.ndarray]:
    """``[wp, wp', ..., wp^(kmax)]`` at ``z`` (scalar or array)."""
    tau = _as_tau(tau)
    z = reduce_argument(tau, z)
    if np.any(lattice_distance(tau, z) < POLE_GUARD):
        raise ValueError("argument too close to a lattice point")
    p, dp = _wp01(tau, z)
    g2, _ = g2g3(tau)
    out = [p, dp]
    for k in range(0, kmax - 1):
        # wp^(k+2) = 6 sum_j C(k, j) wp^(j) wp^(k-j), plus -g2/2 when k = 0
        nxt = 6 * sum(comb(k, j) * out[j] * out[k - j] for j in range(k + 1))
        if k == 0:
            nxt = nxt - g2 / 2
        out.append(nxt)
    return out[: kmax + 1]


def wp(tau, z, k: int = 0):
    """The ``k``-th derivative of the Weierstrass function, ``0 <= k <= 5``."""
    if not 0 <= k <= 5:
        raise ValueError("derivative order must be in 0..5")
    val = wp_derivs(tau, z, max(k, 1))[k]
    return complex(val) if np.ndim(val) == 0 else val


# -- functions of (z, w) ------------------------------------------------------


class _Rows:
    """Cached ``wp, wp', wp''`` at ``z``, ``w`` and ``z - w``."""

    def __init__(self, tau, z, w):
        self.tau = _as_tau(tau)
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        self.z = wp_derivs(self.tau, z, 2)
        self.w = wp_derivs(self.tau, w, 2)
        self.d = wp_derivs(self.tau, z - w, 2)
        self.g2, self.g3 = g2g3(self.tau)


def phi(tau, z, w):
    """``(wp'(z) + wp'(w)) / (wp(z) - wp(w))``."""
    R = _Rows(tau, z, w)
    den = R.z[0] - R.w[0]
    if np.any(np.abs(den) < 1e-12 * (1 + np.abs(R.z[0]))):
        raise ValueError("wp(z) = wp(w): indeterminate point")
    return _scalar((R.z[1] + R.w[1]) / den)


def _f_all(R: _Rows) -> list[np.ndarray]:
    (p, p1, p2), (q, q1, q2), (r, r1, r2) = R.z, R.w, R.d
    f1 = p1 - q1 - r1
    f2 = p * q1 - p1 * q + q1 * r + q * r1 - p1 * r + p * r1
    f3 = p2 * q1 - p1 * q2 + q1 * r2 + q2 * r1 - p1 * r2 + p2 * r1
    f4 = p * q * r1 - p1 * q * r + p * q1 * r
    f5 = p * q2 * r1 + p2 * q * r1 - p1 * q2 * r - p1 * q * r2 + p2 * q1 * r + p * q1 * r2
    f6 = p2 * q2 * r1 - p1 * q2 * r2 + p2 * q1 * r2
    f7 = p1 * q1 * r1
    return [f1, f2, f3, f4, f5, f6, f7]


def f_basis(tau, z, w, i: int):
    """The ``i``-th of the seven odd, sign-character combinations, ``1 <= i <= 7``."""
    if not 1 <= i <= 7:
        raise ValueError("i must be in 1..7")
    return _scalar(_f_all(_Rows(tau, z, w))[i - 1])


# Coefficients of F1 = f3 + c4 f4 + c1 g2 f1 and
# F2 = 2 f5 + c7 f7 + c2 g2 f2 + c1' g3 f1; see ``fit_F2_coefficients``.
F1_COEFFS = {"f3": 1.0, "f4": -30.0, "g2*f1": -2.5}
F2_COEFFS = {"f5": 2.0, "f7": -9.0, "g2*f2": -5.0, "g3*f1": 15.0}
# the same with a bare 15 f1, which leaves a pole of order three
F2_COEFFS_BARE = {"f5": 2.0, "f7": -9.0, "g2*f2": -5.0, "f1": 15.0}


def _combine(coeffs: dict, f: list, g2: complex, g3: complex):
    scal = {"": 1.0, "g2": g2, "g3": g3, "g2^2": g2 * g2}
    total = 0
    for key, c in coeffs.items():
        pre, _, name = key.rpartition("*")
        total = total + c * scal[pre] * f[int(name[1:]) - 1]
    return total


def F1F2(tau, z, w, f2_coeffs: Optional[dict] = None):
    """The pair ``(F1, F2)`` of odd functions with simple poles on the three divisors."""
    R = _Rows(tau, z, w)
    f = _f_all(R)
    F1 = _combine(F1_COEFFS, f, R.g2, R.g3)
    F2 = _combine(f2_coeffs or F2_COEFFS, f, R.g2, R.g3)
    return _scalar(F1), _scalar(F2)


def _scalar(x):
    return complex(x) if np.ndim(x) == 0 else x


# -- limits and the phi relation ----------------------------------------------


def richardson_limit(fun, h0: complex, levels: int = 7, ratio: float = 2.0) -> tuple[complex, float]:
    """Extrapolate ``fun(h)`` to ``h = 0`` from ``h0 / ratio^k``; returns ``(value, error estimate)``."""
    hs = [h0 / ratio**k for k in range(levels)]
    table = [[complex(fun(h))] for h in hs]
    for j in range(1, levels):
        for i in range(j, levels):
            prev, cur = table[i - 1][j - 1], table[i][j - 1]
            table[i].append(cur + (cur - prev) / (ratio**j - 1))
    best = table[-1][-1]
    return best, abs(best - table[-2][-2])


def laurent_coefficients(fun, radius: float = 0.05, n: int = 256, orders=range(-4, 1)) -> dict:
    """Coefficients of ``z^k`` of ``fun(z)`` at 0 by the trapezoid rule on a circle."""
    z = radius * np.exp(2j * np.pi * np.arange(n) / n)
    v = fun(z)
    return {k: complex(np.mean(v * z ** (-k))) for k in orders}


def residue_limits(tau, w, h0: complex = 0.125 * (1 + 0.3j)) -> dict:
    """``lim z -> 0`` of ``z phi``, ``z F1`` and ``z F2`` next to their closed forms."""
    g2, g3 = g2g3(_as_tau(tau))
    pw = wp(tau, w)
    out = {}
    targets = {
        "phi": (lambda z: z * phi(tau, z, w), -2.0),
        "F1": (lambda z: z * F1F2(tau, z, w)[0], -36 * g2 * pw - 54 * g3),
        "F2": (lambda z: z * F1F2(tau, z, w)[1], 108 * g3 * pw + 6 * g2**2),
    }
    for name, (fun, expected) in targets.items():
        val, est = richardson_limit(fun, h0)
        out[name] = {
            "value": val,
            "expected": complex(expected),
            "rel_error": abs(val - expected) / max(1.0, abs(expected)),
            "extrapolation_error": est,
        }
    return out


def fit_F2_coefficients(tau, ws: Sequence[complex] = (0.31 + 0.17j, 0.12 + 0.4j, -0.27 + 0.21j)) -> dict:
    """Fit ``F2 = 2 f5 + x7 f7 + x2 f2 + x1 f1`` so the poles of order 3 and 2 at ``z = 0`` cancel.

    Returns the raw complex coefficients and their ratios to ``g2`` and ``g3``.
    """
    tau = _as_tau(tau)
    g2, g3 = g2g3(tau)
    rows, rhs = [], []
    for w in ws:
        coeffs = [
            laurent_coefficients(lambda z, i=i: _f_all(_Rows(tau, z, w))[i], orders=(-3, -2))
            for i in (4, 6, 1, 0)
        ]
        for k in (-3, -2):
            rows.append([coeffs[j][k] for j in (1, 2, 3)])
            rhs.append(-2 * coeffs[0][k])
    x, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    x7, x2, x1 = (complex(v) for v in x)
    return {
        "f7": x7,
        "f2": x2,
        "f1": x1,
        "f2/g2": x2 / g2,
        "f1/g3": x1 / g3 if abs(g3) > 1e-9 else None,
        "f1/1": x1,
        "residual": float(np.linalg.norm(np.array(rows) @ x - np.array(rhs))),
    }


def phi_relation_residual(tau, z, w, sign: int = -1, f2_coeffs: Optional[dict] = None) -> np.ndarray:
    """Relative residual of ``3 (g2^3 - 27 g3^2) phi + g2 F2 - 3 sign g3 F1``."""
    g2, g3 = g2g3(_as_tau(tau))
    F1, F2 = F1F2(tau, z, w, f2_coeffs)
    ph = phi(tau, z, w)
    D = g2**3 - 27 * g3**2
    a, b, c = 3 * D * ph, g2 * F2, 3 * sign * g3 * F1
    return np.abs(a + b - c) / (np.abs(a) + np.abs(b) + np.abs(c))


# -- expressions and evaluation ranks ------------------------------------------

Orders = tuple[int, ...]


@dataclass(frozen=True)
class Prod:
    """``prod wp^(k)(z) * prod wp^(k)(w) * prod wp^(k)(z - w)`` over the given orders.

    Orders are sorted; an empty tuple stands for the constant factor 1.
    """

    z: Orders = ()
    w: Orders = ()
    d: Orders = ()

    def __post_init__(self):
        for part in (self.z, self.w, self.d):
            if any(k not in (0, 1, 2) for k in part):
                raise ValueError("factor orders must be 0, 1 or 2")
        object.__setattr__(self, "z", tuple(sorted(self.z)))
        object.__setattr__(self, "w", tuple(sorted(self.w)))
        object.__setattr__(self, "d", tuple(sorted(self.d)))

    def pole_orders(self) -> tuple[int, int, int]:
        return tuple(sum(k + 2 for k in part) for part in (self.z, self.w, self.d))

    def __str__(self) -> str:
        names = {0: "P", 1: "P'", 2: "P''"}
        bits = [
            f"{names[k]}({v})" for v, part in (("z", self.z), ("w", self.w), ("z-w", self.d)) for k in part
        ]
        return "*".join(bits) or "1"


@dataclass(frozen=True)
class Named:
    """One of ``one``, ``phi``, ``f1`` ... ``f7``, ``F1``, ``F2``."""

    name: str

    def __post_init__(self):
        ok = {"one", "phi", "F1", "F2"} | {f"f{i}" for i in range(1, 8)}
        if self.name not in ok:
            raise ValueError(f"unknown function {self.name!r}")

    def __str__(self) -> str:
        return self.name


FuncExpr = Union[Prod, Named]


def _multisets(size: int, orders: Sequence[int]) -> list[Orders]:
    """Products of ``size`` factors from ``{1} + orders``, as sorted non-constant orders."""
    out = []
    for combo in itertools.combinations_with_replacement((-1,) + tuple(orders), size):
        out.append(tuple(k for k in combo if k >= 0))
    return out


def product_basis(a: int, b: int, c: int, orders: Sequence[int] = (0, 1, 2)) -> list[Prod]:
    """Products with ``a`` factors in ``z``, ``b`` in ``w`` and ``c`` in ``z - w``.

    Each factor is 1 or ``wp^(k)`` for ``k`` in ``orders`` of that variable.
    """
    if min(a, b, c) < 0 or a + b + c == 0:
        raise ValueError("need a, b, c >= 0, not all zero")
    return [
        Prod(x, y, t)
        for x in _multisets(a, orders)
        for y in _multisets(b, orders)
        for t in _multisets(c, orders)
    ]


def evaluate(exprs: Sequence[FuncExpr], tau, z, w) -> np.ndarray:
    """Matrix of values, one row per expression, one column per point."""
    R = _Rows(tau, z, w)
    f = None
    F = None
    rows = []
    for e in exprs:
        if isinstance(e, Prod):
            v = np.ones_like(R.z[0])
            for k in e.z:
                v = v * R.z[k]
            for k in e.w:
                v = v * R.w[k]
            for k in e.d:
                v = v * R.d[k]
        elif e.name == "one":
            v = np.ones_like(R.z[0])
        elif e.name == "phi":
            v = (R.z[1] + R.w[1]) / (R.z[0] - R.w[0])
        else:
            if f is None:
                f = _f_all(R)
                F = (_combine(F1_COEFFS, f, R.g2, R.g3), _combine(F2_COEFFS, f, R.g2, R.g3))
            v = F[int(e.name[1]) - 1] if e.name[0] == "F" else f[int(e.name[1]) - 1]
        rows.append(v)
    return np.array(rows)


def sample_points(tau, n: int, seed: int, radius: float = DIVISOR_RADIUS) -> tuple[np.ndarray, np.ndarray]:
    """Seeded ``(z, w)`` in the period cell, at least ``radius`` from ``z=0``, ``w=0`` and ``z=w``."""
    tau = _as_tau(tau)
    rng = np.random.default_rng(seed)
    zs, ws = [], []
    while len(zs) < n:
        m = 2 * (n - len(zs)) + 8
        x = rng.uniform(0, 1, (m, 4))
        z = x[:, 0] + tau * x[:, 1]
        w = x[:, 2] + tau * x[:, 3]
        keep = (
            (lattice_distance(tau, z) >= radius)
            & (lattice_distance(tau, w) >= radius)
            & (lattice_distance(tau, z - w) >= radius)
        )
        zs.extend(z[keep])
        ws.extend(w[keep])
    return np.array(zs[:n]), np.array(ws[:n])


def _balanced(M: np.ndarray, sweeps: int = 3) -> np.ndarray:
    """Alternately scale rows and columns to unit norm; rank is unchanged."""
    for _ in range(sweeps):
        M = M / np.linalg.norm(M, axis=1, keepdims=True)
        M = M / np.linalg.norm(M, axis=0, keepdims=True)
    return M


def span_rank(
    exprs: Sequence[FuncExpr],
    tau,
    samples: Optional[int] = None,
    seed: int = 0,
    tol: float = RANK_RTOL,
    radius: float = DIVISOR_RADIUS,
    check: bool = True,
) -> int:
    """Numerical rank of the evaluation matrix of ``exprs`` at seeded points.

    With ``check`` a second, disjoint sample set is drawn and a warning is
    issued if the two ranks differ.
    """
    n = samples if samples is not None else OVERSAMPLE * len(exprs)
    if n < 2 * len(exprs):
        raise ValueError("need at least twice as many samples as expressions")
    z, w = sample_points(tau, n, seed, radius)
    r = numerical_rank(_balanced(evaluate(exprs, tau, z, w)), tol, normalize=False)
    if check:
        z2, w2 = sample_points(tau, n, seed + 7919, radius)
        r2 = numerical_rank(_balanced(evaluate(exprs, tau, z2, w2)), tol, normalize=False)
        if r2 != r:
            warnings.warn(f"rank unstable across sample sets: {r} vs {r2}", RuntimeWarning)
    return r


def singular_values(exprs: Sequence[FuncExpr], tau, samples: Optional[int] = None, seed: int = 0) -> np.ndarray:
    n = samples if samples is not None else OVERSAMPLE * len(exprs)
    z, w = sample_points(tau, n, seed)
    s = np.linalg.svd(_balanced(evaluate(exprs, tau, z, w)), compute_uv=False)
    return s / s[0]


# -- expected dimensions -------------------------------------------------------


def riemann_form(a: int, b: int, c: int) -> tuple[tuple[int, ...], ...]:
    """Integer alternating form of the divisor ``4a (z=0) + 4b (w=0) + 4c (z=w)``.

    Lattice basis ``(1,0), (tau,0), (0,1), (0,tau)``; each divisor is the pullback
    of a point of ``E`` under ``z``, ``w`` or ``z - w``.
    """
    maps = {"z": ((1, 0, 0, 0), (0, 1, 0, 0)), "w": ((0, 0, 1, 0), (0, 0, 0, 1)),
            "d": ((1, 0, -1, 0), (0, 1, 0, -1))}
    E = [[0] * 4 for _ in range(4)]
    for coef, key in ((4 * a, "z"), (4 * b, "w"), (4 * c, "d")):
        p, t = maps[key]
        for i in range(4):
            for j in range(4):
                # E0(x, y) = x_1 y_tau - x_tau y_1 on the image
                E[i][j] += coef * (p[i] * t[j] - t[i] * p[j])
    return tuple(map(tuple, E))


def expected_dimension(a: int, b: int, c: int) -> int:
    """Number of sections: Pfaffian of the Riemann form on the quotient by its kernel.

    The product of the nonzero invariant factors of an alternating integer
    matrix is the square of that Pfaffian and equals the gcd of its maximal
    nonvanishing minors.
    """
    E = riemann_form(a, b, c)
    r = intmat.rank(E)
    if r == 0:
        return 1
    g = 0
    for rows in itertools.combinations(range(4), r):
        for cols in itertools.combinations(range(4), r):
            g = math.gcd(g, intmat.det(tuple(tuple(E[i][j] for j in cols) for i in rows)))
    pf = math.isqrt(g)
    assert pf * pf == g
    return pf


def closed_dimension(a: int, b: int, c: int) -> int:
    """``16(ab + bc + ca)``, or ``4 max(a, b, c)`` when only one is nonzero."""
    if sum(x > 0 for x in (a, b, c)) == 1:
        return 4 * max(a, b, c)
    return 16 * (a * b + b * c + c * a)


def saturation_ranks(exprs: Sequence[FuncExpr], tau, seed: int = 0, steps: int = 3) -> list[tuple[int, int]]:
    """``(samples, rank)`` as the sample count doubles from ``2 |exprs|``."""
    n = OVERSAMPLE * len(exprs)
    return [
        (n * 2**k, span_rank(exprs, tau, n * 2**k, seed + k, check=False)) for k in range(steps)
    ]


def surjectivity_check(a: int, b: int, c: int, tau=1.3j, seed: int = 0, tol: float = RANK_RTOL) -> dict:
    """Compare the rank of the product basis with the expected number of sections."""
    if a + b + c > 5:
        raise ValueError("keep a + b + c <= 5")
    expected = expected_dimension(a, b, c)
    basis = product_basis(a, b, c)
    rank = span_rank(basis, tau, seed=seed, tol=tol)
    return {
        "abc": [a, b, c],
        "expected": expected,
        "closed_form": closed_dimension(a, b, c),
        "generators": len(basis),
        "rank": rank,
        "samples": OVERSAMPLE * len(basis),
        "ok": rank == expected,
    }


def factor4_check(tau=1.3j, seed: int = 0, tol: float = RANK_RTOL) -> dict:
    """Appending ``phi`` to the products with pole orders at most 3 raises the rank by one,
    while appending ``F1`` to the order-4 products does not."""
    m3 = product_basis(1, 1, 1, orders=(0, 1))
    m4 = product_basis(1, 1, 1)
    r3 = span_rank(m3, tau, seed=seed, tol=tol)
    r3phi = span_rank(m3 + [Named("phi")], tau, seed=seed, tol=tol)
    r4 = span_rank(m4, tau, seed=seed, tol=tol)
    r4F = span_rank(m4 + [Named("F1")], tau, seed=seed, tol=tol)
    return {
        "rank_M333": r3,
        "rank_M333_phi": r3phi,
        "rank_M444": r4,
        "rank_M444_F1": r4F,
        "ok": r3phi == r3 + 1 and r4F == r4,
    }


# -- symmetry group ------------------------------------------------------------

G_GENERATORS = (((0, 1), (1, 0)), ((1, -1), (0, -1)))


def group_elements() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Closure of :data:`G_GENERATORS` under multiplication (six matrices)."""
    elems = {((1, 0), (0, 1))}
    frontier = list(elems)
    while frontier:
        new = []
        for A in frontier:
            for B in G_GENERATORS:
                C = tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))
                if C not in elems:
                    elems.add(C)
                    new.append(C)
        frontier = new
    return sorted(elems)


def equivariance_residual(tau, z, w, name: str) -> float:
    """Max relative deviation of ``f(g (z, w)) - det(g) f(z, w)`` over the group."""
    def value(zz, ww):
        return evaluate([Named(name)], tau, np.atleast_1d(zz), np.atleast_1d(ww))[0]

    base = value(z, w)
    worst = 0.0
    for (a, b), (c, d) in group_elements():
        moved = value(a * np.asarray(z) + b * np.asarray(w), c * np.asarray(z) + d * np.asarray(w))
        err = np.abs(moved - (a * d - b * c) * base) / np.maximum(np.abs(base), 1e-300)
        worst = max(worst, float(err.max()))
    return worst
