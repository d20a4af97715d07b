"""Exact rational vectors and small dense linear algebra."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction
Vec = tuple  # tuple[Fraction, ...]

_MINUS_SIGNS = ("−", "–")


class DimensionError(ValueError):
    """Raised when vectors or rows of incompatible dimension are combined."""


def to_rat(value) -> Fraction:
    """Convert an int, Fraction or rational string ("-3/4") to Fraction.

    Floats are rejected on purpose: every quantity in this package is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        for minus in _MINUS_SIGNS:
            text = text.replace(minus, "-")
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def as_vec(values: Iterable) -> Vec:
    return tuple(to_rat(v) for v in values)


def zeros(n: int) -> Vec:
    return (Fraction(0),) * n


def unit(n: int, k: int) -> Vec:
    return tuple(Fraction(1 if i == k else 0) for i in range(n))


def check_dims(*vecs: Sequence) -> int:
    dims = {len(v) for v in vecs}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def dot(a: Sequence, b: Sequence) -> Fraction:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vec:
    check_dims(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vec:
    check_dims(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vec:
    c = to_rat(c)
    return tuple(c * x for x in a)


def neg(a: Sequence) -> Vec:
    return tuple(-x for x in a)


def lincomb(coeffs: Sequence, vecs: Sequence[Sequence], dim: int | None = None) -> Vec:
    """Return sum_i coeffs[i] * vecs[i]."""
    if dim is None:
        if not vecs:
            raise ValueError("lincomb of no vectors needs an explicit dimension")
        dim = len(vecs[0])
    out = [Fraction(0)] * dim
    for c, v in zip(coeffs, vecs, strict=True):
        if len(v) != dim:
            raise DimensionError(f"dimension mismatch: {len(v)} vs {dim}")
        if c:
            for i, x in enumerate(v):
                out[i] += c * x
    return tuple(out)


def matvec(rows: Sequence[Sequence], x: Sequence) -> Vec:
    return tuple(dot(r, x) for r in rows)


def transpose(rows: Sequence[Sequence]) -> list[Vec]:
    return [tuple(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[Vec]:
    bt = transpose(b)
    return [tuple(dot(r, c) for c in bt) for r in a]


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns (exact)."""
    m = [list(map(to_rat, r)) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vec]:
    """Basis of {x : rows . x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [unit(ncols, k) for k in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -m[i][f]
        basis.append(tuple(x))
    return basis


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> Vec | None:
    """One exact solution of rows . x = rhs, or None if inconsistent."""
    if not rows:
        return ()
    ncols = len(rows[0])
    aug = [list(r) + [to_rat(b)] for r, b in zip(rows, rhs, strict=True)]
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = m[i][-1]
    return tuple(x)


def complete_basis(basis: Sequence[Sequence], dim: int) -> list[Vec]:
    """Standard unit vectors that extend ``basis`` to a basis of Q^dim."""
    current = [tuple(b) for b in basis]
    extra = []
    r = rank(current) if current else 0
    for k in range(dim):
        e = unit(dim, k)
        if rank(current + [e]) > r:
            current.append(e)
            extra.append(e)
            r += 1
        if r == dim:
            break
    return extra


def inverse(rows: Sequence[Sequence]) -> list[Vec]:
    n = len(rows)
    aug = [list(map(to_rat, r)) + list(unit(n, i)) for i, r in enumerate(rows)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [tuple(r[n:]) for r in m]


def fmt(x: Fraction) -> str:
    """Canonical string form of a rational ("-3/4", "2")."""
    return str(to_rat(x))
