"""Hermitian 2x2 model of Minkowski space and the isometry group SU(1,0,1).

``x = (x0, x1, x2, x3)`` corresponds to::

    [[x0 + x3, x1 + i x2],
     [x1 - i x2, x0 - x3]]

with ``<x, x> = -det X``.  SL(2, C) acts by ``X -> F X F*``; the subgroup
fixing ``diag(2, 0)`` (the point sphere complex) is SU(1,0,1), the group of
origin-fixing isometries of isotropic space.
"""
from dataclasses import dataclass

import numpy as np

E1 = np.array([[0, 1], [1, 0]], dtype=complex)
E2 = np.array([[0, 1j], [-1j, 0]], dtype=complex)
P_HERM = np.array([[2, 0], [0, 0]], dtype=complex)
PT_HERM = np.array([[0, 0], [0, -1]], dtype=complex)

_D10 = np.array([[1, 0], [0, 0]], dtype=complex)
_D01 = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class Herm2:
    """Hermitian matrix stored by its four real degrees of freedom.

    ``d00`` and ``d11`` are the real diagonal entries and ``o`` the upper
    off-diagonal entry, so Hermiticity holds by construction.
    """

    d00: float
    d11: float
    o: complex

    @property
    def matrix(self):
        return np.array([[self.d00, self.o], [np.conj(self.o), self.d11]], dtype=complex)

    @property
    def det(self):
        return self.d00 * self.d11 - abs(self.o) ** 2

    @classmethod
    def from_matrix(cls, X):
        X = np.asarray(X)
        return cls(float(X[0, 0].real), float(X[1, 1].real), complex(X[0, 1]))


def herm_matrix(x):
    """Matrix image of (possibly complex) Minkowski vectors, shape ``(..., 2, 2)``.

    For complex input this is the complex-linear extension, used for the
    Wirtinger derivatives ``X_z``, which are not Hermitian.
    """
    x = np.asarray(x)
    x0, x1, x2, x3 = (x[..., k] for k in range(4))
    row0 = np.stack([x0 + x3, x1 + 1j * x2], axis=-1)
    row1 = np.stack([x1 - 1j * x2, x0 - x3], axis=-1)
    return np.stack([row0, row1], axis=-2)


def vector_from_matrix(X):
    """Inverse of :func:`herm_matrix` (complex-linear)."""
    X = np.asarray(X)
    a, b, c, d = X[..., 0, 0], X[..., 0, 1], X[..., 1, 0], X[..., 1, 1]
    v = np.stack([(a + d) / 2, (b + c) / 2, (b - c) / 2j, (a - d) / 2], axis=-1)
    if np.isrealobj(X):
        return v.real
    return v


def to_herm(x):
    """Minkowski vector -> :class:`Herm2`."""
    x0, x1, x2, x3 = (float(t) for t in x)
    return Herm2(x0 + x3, x0 - x3, complex(x1, x2))


def from_herm(X):
    """:class:`Herm2` (or a Hermitian ndarray) -> Minkowski vector."""
    if isinstance(X, Herm2):
        return np.array([(X.d00 + X.d11) / 2, X.o.real, X.o.imag, (X.d00 - X.d11) / 2])
    return vector_from_matrix(X).real


def dagger(F):
    return np.conj(np.swapaxes(F, -1, -2))


def act(F, X):
    """``F X F*``; returns a :class:`Herm2` when given one."""
    F = np.asarray(F, dtype=complex)
    if isinstance(X, Herm2):
        return Herm2.from_matrix(F @ X.matrix @ dagger(F))
    return F @ np.asarray(X) @ dagger(F)


def su101_from_params(theta, a, b):
    """``[[exp(i theta), a + i b], [0, exp(-i theta)]]``."""
    return np.array([[np.exp(1j * theta), a + 1j * b], [0, np.exp(-1j * theta)]])


def su101_residual(F):
    """Distance of ``F`` from SU(1,0,1).

    Max of ``|det F - 1|`` and the Frobenius norm of
    ``F diag(1,0) F* - diag(1,0)``.
    """
    F = np.asarray(F, dtype=complex)
    det = np.abs(np.linalg.det(F) - 1)
    fix = np.linalg.norm(F @ _D10 @ dagger(F) - _D10, axis=(-2, -1))
    return np.maximum(det, fix)


def fixed_form_residual(F):
    """Frobenius norm of ``F* diag(0,1) F - diag(0,1)``."""
    F = np.asarray(F, dtype=complex)
    return np.linalg.norm(dagger(F) @ _D01 @ F - _D01, axis=(-2, -1))


@dataclass(frozen=True)
class SpinFactor:
    """Element ``B = [[alpha, conj(beta)], [0, conj(alpha)]]`` of R+ x SU(1,0,1).

    Fields may be scalars or arrays of equal shape.
    """

    alpha: complex
    beta: complex

    @property
    def matrix(self):
        alpha = np.asarray(self.alpha, dtype=complex)
        beta = np.asarray(self.beta, dtype=complex)
        zero = np.zeros_like(alpha)
        row0 = np.stack([alpha, np.conj(beta)], axis=-1)
        row1 = np.stack([zero, np.conj(alpha)], axis=-1)
        return np.stack([row0, row1], axis=-2)

    @property
    def det(self):
        """``det B = |alpha|^2``."""
        return np.abs(self.alpha) ** 2

    @property
    def rotation(self):
        """``B / |alpha|``, the SU(1,0,1) part."""
        return self.matrix / np.abs(np.asarray(self.alpha))[..., None, None]

    @property
    def inverse(self):
        alpha = np.asarray(self.alpha, dtype=complex)
        beta = np.asarray(self.beta, dtype=complex)
        zero = np.zeros_like(alpha)
        d = np.abs(alpha) ** 2
        row0 = np.stack([np.conj(alpha), -np.conj(beta)], axis=-1)
        row1 = np.stack([zero, alpha], axis=-1)
        return np.stack([row0, row1], axis=-2) / d[..., None, None]
