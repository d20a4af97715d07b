"""Scalar backends for the simplex tableau.

The tableau can run on ``fractions.Fraction`` (always available) or on
``gmpy2.mpq`` (GMP rationals, roughly an order of magnitude faster).  Both
are exact; results are always handed back as ``Fraction``.

Select with the ``ASYMSPACE_BACKEND`` environment variable: ``gmpy``,
``fraction`` or ``auto`` (the default, gmpy when importable).
"""
from __future__ import annotations

import os
from fractions import Fraction

try:
    import gmpy2
except ImportError:  # pragma: no cover - depends on the environment
    gmpy2 = None

ENV_FLAG = "ASYMSPACE_BACKEND"
HAVE_GMPY = gmpy2 is not None


class Backend:
    name = "fraction"
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def to_num(x):
        return x

    @staticmethod
    def to_fraction(x):
        return x


class GmpyBackend(Backend):
    name = "gmpy"

    def __init__(self):
        self.zero = gmpy2.mpq(0)
        self.one = gmpy2.mpq(1)

    @staticmethod
    def to_num(x):
        return gmpy2.mpq(x.numerator, x.denominator)

    @staticmethod
    def to_fraction(x):
        return Fraction(int(x.numerator), int(x.denominator))


_BACKENDS = {"fraction": Backend()}
if HAVE_GMPY:
    _BACKENDS["gmpy"] = GmpyBackend()


def get_backend(name: str | None = None) -> Backend:
    """Resolve a backend by name, falling back to the environment flag."""
    if name is None:
        name = os.environ.get(ENV_FLAG, "auto")
    name = name.strip().lower()
    if name in ("", "auto"):
        name = "gmpy" if HAVE_GMPY else "fraction"
    if name not in ("gmpy", "fraction"):
        raise ValueError(f"unknown backend {name!r}; expected gmpy, fraction or auto")
    if name not in _BACKENDS:
        raise ImportError("gmpy backend requested but gmpy2 is not installed")
    return _BACKENDS[name]


def available_backends() -> list[str]:
    return sorted(_BACKENDS)
