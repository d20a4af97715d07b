"""Exact computations in finite-dimensional polyhedral asymmetric normed spaces.

Subpackages: :mod:`ratlp` (rational LP kernel), :mod:`geometry` (norms,
balls, operators), :mod:`bip` (mixed ball families, minimal pairs, the
glued mu-norm), :mod:`extend` (norm-preserving extensions and the
non-injectivity pipeline) and :mod:`cli`.
"""
from .geometry import (
    Ball,
    PartialOperator,
    PolyAsymNorm,
    Subspace,
    conjugate,
    corpus,
    embed_into_ellinfty,
    eval_norm,
    hexagon,
    l1,
    linf,
    operator_norm,
    qtilde,
    symmetrize,
    u_norm,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "PartialOperator",
    "PolyAsymNorm",
    "Subspace",
    "conjugate",
    "corpus",
    "embed_into_ellinfty",
    "eval_norm",
    "hexagon",
    "l1",
    "linf",
    "operator_norm",
    "qtilde",
    "symmetrize",
    "u_norm",
]
