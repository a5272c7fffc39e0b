"""Exact integer arithmetic on symmetric forms.

Forms are stored as tuples of tuples of Python ints, so every operation is
exact.  The decomposition length ``lambda(T)`` is the largest ``k`` such
that ``T`` is a sum of ``k`` nonzero integral semipositive forms; it is
computed here both by closed formulas on reduced forms (genus 2 and 3) and
by an exhaustive memoized search that makes no use of those formulas.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

Form = tuple[tuple[int, ...], ...]

DEFAULT_ORACLE_BOUND = 12

# int64 headroom for the vectorized transform T[V] with |V_ij| <= 1 (g <= 3).
_INT64_SAFE = 2**58


class OracleBoundError(RuntimeError):
    """The exhaustive search was asked to run on a form that is too large."""


class NotReducedError(ValueError):
    """A closed formula was applied outside the reduced domain it is valid on."""


def as_form(T) -> Form:
    """Validate ``T`` as a square symmetric integer matrix and freeze it."""
    rows = [list(r) for r in T]
    g = len(rows)
    out = []
    for r in rows:
        if len(r) != g:
            raise ValueError("form must be square")
        row = []
        for x in r:
            if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
                raise ValueError(f"form entries must be integers, got {x!r}")
            row.append(int(x))
        out.append(tuple(row))
    for i in range(g):
        for j in range(i):
            if out[i][j] != out[j][i]:
                raise ValueError("form must be symmetric")
    return tuple(out)


def zero(g: int) -> Form:
    return tuple((0,) * g for _ in range(g))


def identity(g: int) -> Form:
    return tuple(tuple(int(i == j) for j in range(g)) for i in range(g))


def dyad(a: Sequence[int]) -> Form:
    """The rank-one form ``a a'``."""
    a = [int(x) for x in a]
    return tuple(tuple(x * y for y in a) for x in a)


def add(*forms: Form) -> Form:
    g = len(forms[0])
    return tuple(
        tuple(sum(F[i][j] for F in forms) for j in range(g)) for i in range(g)
    )


def scale(c: int, T: Form) -> Form:
    return tuple(tuple(c * x for x in r) for r in T)


def sub(S: Form, T: Form) -> Form:
    return tuple(tuple(x - y for x, y in zip(rs, rt)) for rs, rt in zip(S, T))


def matmul(A, B) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
        for i in range(len(A))
    )


def transpose(A) -> tuple[tuple[int, ...], ...]:
    return tuple(zip(*A))


def transform(T: Form, U) -> Form:
    """``T[U] = U' T U``."""
    return matmul(matmul(transpose(U), T), U)


def trace(T: Form) -> int:
    return sum(T[i][i] for i in range(len(T)))


def pad(T: Form, extra: int = 1) -> Form:
    """Border ``T`` with ``extra`` zero rows and columns."""
    g = len(T)
    return tuple(
        tuple(T[i][j] if i < g and j < g else 0 for j in range(g + extra))
        for i in range(g + extra)
    )


def det(A) -> int:
    """Exact determinant (Bareiss fraction-free elimination)."""
    n = len(A)
    if n == 0:
        return 1
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if n == 3:
        return (
            A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
        )
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_semipositive(T) -> bool:
    """Exact test of ``x'Tx >= 0`` for all real ``x`` via principal minors."""
    T = as_form(T)
    return _psd(T)


def _psd(T: Form) -> bool:
    g = len(T)
    if g == 0:
        return True
    if g == 1:
        return T[0][0] >= 0
    if g == 2:
        a, b, c = T[0][0], T[0][1], T[1][1]
        return a >= 0 and c >= 0 and a * c >= b * b
    if g == 3:
        a, b, c = T[0][0], T[1][1], T[2][2]
        d, e, f = T[0][1], T[1][2], T[0][2]
        if a < 0 or b < 0 or c < 0:
            return False
        if a * b < d * d or b * c < e * e or a * c < f * f:
            return False
        return a * (b * c - e * e) - d * (d * c - e * f) + f * (d * e - b * f) >= 0
    for size in range(1, g + 1):
        for idx in itertools.combinations(range(g), size):
            if det([[T[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def is_positive_definite(T) -> bool:
    T = as_form(T)
    return all(
        det([r[:k] for r in T[:k]]) > 0 for k in range(1, len(T) + 1)
    )


def rank(T) -> int:
    """Rank over the rationals."""
    M = [[Fraction(x) for x in r] for r in T]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def content(T) -> int:
    """gcd of all entries (0 for the zero matrix)."""
    return math.gcd(*(x for r in T for x in r))


def is_primitive(T) -> bool:
    return content(T) == 1


def primitive_column(a: Sequence[int]) -> tuple[int, ...]:
    """Normalize a coprime integer vector so its first nonzero entry is positive."""
    a = tuple(int(x) for x in a)
    if math.gcd(*a) != 1:
        raise ValueError(f"column {a} is not primitive")
    first = next(x for x in a if x != 0)
    return a if first > 0 else tuple(-x for x in a)


def rank_one_column(T) -> tuple[int, tuple[int, ...]]:
    """Write a semipositive rank-one form as ``c * a a'`` with ``a`` primitive."""
    T = as_form(T)
    if not _psd(T) or rank(T) != 1:
        raise ValueError("expected a semipositive form of rank one")
    i = next(k for k in range(len(T)) if T[k][k] != 0)
    row = T[i]
    h = math.gcd(*row)
    a = primitive_column(x // h for x in row)
    c = T[i][i] // (a[i] * a[i])
    if dyad(a) != tuple(tuple(x // c for x in r) for r in T) or content(T) != c:
        raise ValueError("form is not an integral multiple of a primitive dyad")
    return c, a


# -- nullspace splitting ------------------------------------------------------


def _column_echelon(T: Form) -> tuple[list[list[int]], list[list[int]], int]:
    """Unimodular column operations ``T V = [H | 0]``; returns (H, V, rank)."""
    g = len(T)
    M = [list(r) for r in T]
    V = [list(r) for r in identity(g)]
    col = 0
    for i in range(g):
        if col == g:
            break
        for j in range(col + 1, g):
            b = M[i][j]
            if b == 0:
                continue
            a = M[i][col]
            d, x, y = _xgcd(a, b)
            p, s = -b // d, a // d
            for R in (M, V):
                for row in R:
                    u, v = row[col], row[j]
                    row[col], row[j] = x * u + y * v, p * u + s * v
        if M[i][col] != 0:
            col += 1
    return M, V, col


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def split_nullspace(T) -> tuple[Form, Form]:
    """Return ``(A, V)`` with ``V`` unimodular and ``T[V] = A (+) 0``.

    ``A`` is positive definite of size ``rank(T)``; ``T`` must be semipositive.
    """
    T = as_form(T)
    if not _psd(T):
        raise ValueError("form is not semipositive")
    _, V, r = _column_echelon(T)
    V = tuple(tuple(row) for row in V)
    full = transform(T, V)
    assert all(full[i][j] == 0 for i in range(len(T)) for j in range(r, len(T)))
    A = tuple(row[:r] for row in full[:r])
    return A, V


# -- reduction ----------------------------------------------------------------


def is_reduced(T, strict: bool = True) -> bool:
    """Reduction inequalities for positive definite forms of size 2 or 3.

    Size 2: ``0 <= 2 t12 <= t11 <= t22``.  Size 3: ``t11 <= t22 <= t33``,
    ``0 <= 2 t12 <= t11``, ``0 <= 2 t23 <= t22``, ``2|t13| <= t11`` and
    ``2 (t12 + t23 + |t13|) <= t11 + t22``.

    With ``strict=False`` the last 3x3 inequality is replaced by the usual
    Minkowski condition ``|e1 + s e2 + r e3|^2 >= t33`` for all signs, which
    every positive definite orbit meets.  The strict list is stronger when
    ``t13 > 0`` and some orbits have no representative satisfying it.
    """
    T = as_form(T)
    if len(T) not in (2, 3):
        raise ValueError("reduction is only defined for g in (2, 3)")
    C = np.array([T], dtype=object)
    return bool(_reduced_mask(C, strict)[0]) and is_positive_definite(T)


@lru_cache(maxsize=None)
def _small_unimodular(g: int) -> np.ndarray:
    """All g x g matrices with entries in {-1, 0, 1} and determinant +-1."""
    mats = np.array(list(itertools.product((-1, 0, 1), repeat=g * g)), dtype=np.int64)
    mats = mats.reshape(-1, g, g)
    d = np.rint(np.linalg.det(mats.astype(float))).astype(np.int64)
    return mats[np.abs(d) == 1]


def _add_column(G: list[list[int]], U: list[list[int]], j: int, i: int, r: int) -> None:
    """Column ``j`` += ``r`` * column ``i``, applied to the basis and the Gram matrix."""
    g = len(G)
    gjj = G[j][j] + 2 * r * G[i][j] + r * r * G[i][i]
    for k in range(g):
        G[k][j] += r * G[k][i]
    for k in range(g):
        G[j][k] = G[k][j]
    G[j][j] = gjj
    for row in U:
        row[j] += r * row[i]


def _greedy_descent(T: Form) -> tuple[Form, Form]:
    """Lower the diagonal by elementary moves until no move helps."""
    g = len(T)
    G = [list(r) for r in T]
    U = [list(r) for r in identity(g)]
    combos = [c for c in itertools.product((-1, 0, 1), repeat=g - 1) if any(c)]
    moved = True
    while moved:
        moved = False
        order = sorted(range(g), key=lambda i: (G[i][i], i))
        if order != list(range(g)):
            G = [[G[a][b] for b in order] for a in order]
            U = [[row[b] for b in order] for row in U]
        for j in range(g):
            for i in range(g):
                if i == j or G[i][i] == 0:
                    continue
                r = -round(Fraction(G[i][j], G[i][i]))
                if r and 2 * r * G[i][j] + r * r * G[i][i] < 0:
                    _add_column(G, U, j, i, r)
                    moved = True
        for j in range(g):
            others = [i for i in range(g) if i != j]
            for coeffs in combos:
                # norm of e_j + sum c_i e_i
                v = [0] * g
                v[j] = 1
                for i, c in zip(others, coeffs):
                    v[i] = c
                n = sum(v[a] * G[a][b] * v[b] for a in range(g) for b in range(g))
                if n < G[j][j]:
                    for i, c in zip(others, coeffs):
                        if c:
                            _add_column(G, U, j, i, c)
                    moved = True
    return tuple(map(tuple, G)), tuple(map(tuple, U))


def _reduce_key_order(C: np.ndarray) -> np.ndarray:
    g = C.shape[1]
    diag = [C[:, i, i] for i in range(g)]
    offsum = sum(np.abs(C[:, i, j]) for i in range(g) for j in range(i + 1, g))
    flat = [C[:, i, j] for i in range(g) for j in range(g)]
    # np.lexsort sorts by the last key first
    return np.lexsort(tuple(reversed(diag + [offsum] + flat)))


def _reduced_mask(C: np.ndarray, strict: bool = True) -> np.ndarray:
    if C.shape[1] == 2:
        t11, t12, t22 = C[:, 0, 0], C[:, 0, 1], C[:, 1, 1]
        return (0 <= 2 * t12) & (2 * t12 <= t11) & (t11 <= t22)
    t11, t22, t33 = C[:, 0, 0], C[:, 1, 1], C[:, 2, 2]
    t12, t23, t13 = C[:, 0, 1], C[:, 1, 2], C[:, 0, 2]
    mask = (
        (t11 <= t22) & (t22 <= t33)
        & (0 <= 2 * t12) & (2 * t12 <= t11)
        & (0 <= 2 * t23) & (2 * t23 <= t22)
        & (2 * np.abs(t13) <= t11)
    )
    if strict:
        return mask & (2 * (t12 + t23 + np.abs(t13)) <= t11 + t22)
    for e, d in ((1, -1), (-1, 1), (-1, -1)):
        mask = mask & (t11 + t22 + 2 * (e * t12 + d * t13 + e * d * t23) >= 0)
    return mask


def minkowski_reduce(T) -> tuple[Form, Form]:
    """Reduce a positive definite 2x2 or 3x3 form.

    Returns ``(R, U)`` with ``U`` unimodular and ``R = T[U]``.  ``R`` satisfies
    the strict inequalities of :func:`is_reduced` whenever some form in the
    orbit does, and the plain Minkowski ones otherwise.  Candidates are the
    forms one {-1, 0, 1} move away from a greedy descent; the one with the
    smallest ``(t11, t22, t33, sum |t_ij|, entries)`` wins, so equivalent
    inputs map to the same output.
    """
    T = as_form(T)
    g = len(T)
    if g not in (2, 3):
        raise ValueError("reduction is only implemented for g in (2, 3)")
    if not is_positive_definite(T):
        raise ValueError("form is not positive definite")
    G, U = _greedy_descent(T)
    V = _small_unimodular(g)
    for _ in range(8):
        if max(abs(x) for r in G for x in r) > _INT64_SAFE // 16:
            raise OverflowError("reduced entries exceed the int64-safe range")
        Gm = np.array(G, dtype=np.int64)
        C = V.transpose(0, 2, 1) @ Gm @ V
        for strict in (True, False):
            ok = np.flatnonzero(_reduced_mask(C, strict))
            if ok.size:
                best = ok[_reduce_key_order(C[ok])[0]]
                U = matmul(U, tuple(tuple(int(x) for x in row) for row in V[best]))
                R = transform(T, U)
                assert abs(det(U)) == 1
                if R == T:
                    U = identity(g)
                return R, U
        # the greedy stopped short; restart it from the best nearby form
        best = _reduce_key_order(C)[0]
        W = tuple(tuple(int(x) for x in row) for row in V[best])
        G2, U2 = _greedy_descent(transform(G, W))
        U, G = matmul(matmul(U, W), U2), G2
    raise RuntimeError(f"no reduced representative found near {G}")


# -- decomposition length -----------------------------------------------------


def lambda_closed(T) -> int:
    """Closed formula for ``lambda`` on reduced forms.

    g = 2 needs ``0 <= t12 <= t11, t22``.  g = 3 needs the plain Minkowski
    inequalities (``is_reduced(T, strict=False)``); on forms outside the
    strict list the formula is backed by the oracle sweep, not by a proof.
    """
    T = as_form(T)
    g = len(T)
    if g == 2:
        t0, t1, t2 = T[0][0], T[0][1], T[1][1]
        if not (0 <= t1 <= t0 and t1 <= t2 and _psd(T)):
            raise NotReducedError("need 0 <= t12 <= t11, t22 and T semipositive")
        return t0 + t2 - t1
    if g == 3:
        if not is_reduced(T, strict=False):
            raise NotReducedError("3x3 form is not reduced")
        t11, t22, t33 = T[0][0], T[1][1], T[2][2]
        t12, t23, t13 = T[0][1], T[1][2], T[0][2]
        if t13 <= 0:
            return t11 + t22 + t33 - t12 - t23 + t13
        return t11 + t22 + t33 - t12 - t23 - t13 + min(t12, t13, t23)
    raise ValueError("closed formula only for g in (2, 3)")


def _canonical(T: Form) -> Form:
    """Unimodular normal form used as memo key: split kernel, reduce if small."""
    if all(x == 0 for r in T for x in r):
        return ()
    if is_positive_definite(T):
        A = T
    else:
        A, _ = split_nullspace(T)
    if len(A) in (2, 3):
        A, _ = minkowski_reduce(A)
    return A


def _candidates(T: Form) -> Iterator[tuple[int, Form]]:
    """Nonzero semipositive integral ``S`` with ``T - S`` semipositive, by trace."""
    g = len(T)
    diag = [T[i][i] for i in range(g)]
    pairs = [(i, j) for i in range(g) for j in range(i + 1, g)]
    for s in range(1, sum(diag) + 1):
        for d in _compositions(s, diag):
            ranges = []
            for i, j in pairs:
                lim = math.isqrt(d[i] * d[j])
                rest = math.isqrt((diag[i] - d[i]) * (diag[j] - d[j]))
                lo = max(-lim, T[i][j] - rest)
                hi = min(lim, T[i][j] + rest)
                if lo > hi:
                    break
                ranges.append(range(lo, hi + 1))
            else:
                for off in itertools.product(*ranges):
                    S = [[0] * g for _ in range(g)]
                    for k in range(g):
                        S[k][k] = d[k]
                    for (i, j), v in zip(pairs, off):
                        S[i][j] = S[j][i] = v
                    S = tuple(tuple(r) for r in S)
                    if _psd(S):
                        R = sub(T, S)
                        if _psd(R):
                            yield s, R


def _compositions(s: int, caps: list[int]) -> Iterator[tuple[int, ...]]:
    if len(caps) == 1:
        if s <= caps[0]:
            yield (s,)
        return
    for x in range(min(s, caps[0]), -1, -1):
        for rest in _compositions(s - x, caps[1:]):
            yield (x,) + rest


@lru_cache(maxsize=None)
def _oracle(T: Form) -> int:
    if not T:
        return 0
    total = trace(T)
    best = 0
    for s, R in _candidates(T):
        # lambda(R) <= trace(R), so no larger S can beat ``best``.
        if 1 + total - s <= best:
            break
        best = max(best, 1 + _oracle(_canonical(R)))
    return best


def lambda_oracle(T, max_entry: int = DEFAULT_ORACLE_BOUND) -> int:
    """``lambda(T)`` by exhaustive memoized search over one-step splittings."""
    T = as_form(T)
    if not _psd(T):
        raise ValueError("form is not semipositive")
    if any(abs(x) > max_entry for r in T for x in r):
        raise OracleBoundError(f"entries exceed the oracle bound {max_entry}")
    return _oracle(_canonical(T))


def lambda_with_method(T, max_entry: int = DEFAULT_ORACLE_BOUND) -> tuple[int, str]:
    T = as_form(T)
    if not _psd(T):
        raise ValueError("form is not semipositive")
    A = _canonical(T)
    if len(A) == 0:
        return 0, "zero"
    if len(A) == 1:
        return A[0][0], "rank-one-block"
    if len(A) <= 3:
        return lambda_closed(A), "closed"
    return lambda_oracle(A, max_entry), "oracle"


def _sign_normalize(G: Form) -> Form:
    """Flip basis signs so that ``t12 >= 0`` and ``t23 >= 0``."""
    g = len(G)
    s = [1] * g
    for i in range(1, g):
        if G[i - 1][i] * s[i - 1] < 0:
            s[i] = -1
    return tuple(tuple(s[i] * s[j] * G[i][j] for j in range(g)) for i in range(g))


def _quick_lambda(T: Form) -> int:
    """``lambda`` via a greedy reduction, without the canonical window search.

    The closed formulas only need some reduced representative, so the
    canonical choice is skipped when the greedy form already qualifies.
    """
    if all(x == 0 for r in T for x in r):
        return 0
    A = T if is_positive_definite(T) else split_nullspace(T)[0]
    if len(A) == 1:
        return A[0][0]
    if len(A) in (2, 3):
        G = _sign_normalize(_greedy_descent(A)[0])
        if is_reduced(G, strict=False):
            return lambda_closed(G)
    return lambda_value(A)


def lambda_value(T, max_entry: int = DEFAULT_ORACLE_BOUND) -> int:
    """``lambda(T)`` for any semipositive integral ``T``.

    The kernel is split off, blocks of size 2 or 3 are reduced and handed to
    :func:`lambda_closed`; larger blocks go to :func:`lambda_oracle`.
    """
    return lambda_with_method(T, max_entry)[0]


# -- congruence subgroups -----------------------------------------------------


def congruent_mod_q(S, T, q: int) -> bool:
    S, T = as_form(S), as_form(T)
    if len(S) != len(T):
        raise ValueError("forms have different sizes")
    if q <= 0 or q % 2:
        raise ValueError("q must be a positive even integer")
    return all((x - y) % q == 0 for rs, rt in zip(S, T) for x, y in zip(rs, rt))


def rank1_orbit_equiv(S, T, q: int) -> bool:
    """Orbit equivalence of primitive rank-one forms under ``GL(g, Z)[q]``.

    For q in (2, 4) the orbit of a primitive dyad is exactly its residue
    class mod q, so this is a congruence test on the validated inputs.
    """
    if q not in (2, 4):
        raise ValueError("only q = 2 and q = 4 are supported")
    for F in (S, T):
        F = as_form(F)
        if not (_psd(F) and rank(F) == 1 and is_primitive(F)):
            raise ValueError("expected primitive semipositive forms of rank one")
    return congruent_mod_q(S, T, q)


def _columns_near(j: int, g: int, q: int, bound: int) -> list[tuple[int, ...]]:
    cols = []
    for x in itertools.product(range(-bound, bound + 1), repeat=g):
        off = sum(abs(v) for k, v in enumerate(x) if k != j)
        cols.append((sum(map(abs, x)), off, x))
    cols.sort()
    return [
        tuple(int(k == j) + q * v for k, v in enumerate(x)) for _, _, x in cols
    ]


def glq_equiv_bounded(S, T, q: int, bound: int) -> Optional[Form]:
    """Search ``U = E + qX`` with ``|X_ij| <= bound`` and ``T[U] = S``.

    Returns the first witness found (candidates closest to the identity
    first), or ``None`` when the bounded search is exhausted.  ``None``
    means "unknown", never "inequivalent".
    """
    S, T = as_form(S), as_form(T)
    g = len(T)
    if len(S) != g:
        raise ValueError("forms have different sizes")
    if bound < 1:
        raise ValueError("bound must be >= 1")

    def qf(u, v):
        return sum(u[a] * T[a][b] * v[b] for a in range(g) for b in range(g))

    options = [
        [u for u in _columns_near(j, g, q, bound) if qf(u, u) == S[j][j]]
        for j in range(g)
    ]
    chosen: list[tuple[int, ...]] = []

    def search(j: int) -> Optional[Form]:
        if j == g:
            U = transpose(chosen)
            return U if abs(det(U)) == 1 else None
        for u in options[j]:
            if all(qf(chosen[i], u) == S[i][j] for i in range(j)):
                chosen.append(u)
                found = search(j + 1)
                chosen.pop()
                if found is not None:
                    return found
        return None

    return search(0)
