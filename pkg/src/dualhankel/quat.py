"""Quaternion arithmetic, slice decomposition and power-series evaluation.

Quaternions are stored as float arrays whose trailing axis holds the
components ``(w, x, y, z)``; leading axes broadcast like ordinary numpy
arrays, so a single :class:`Quaternion` may hold a whole evaluation grid.

Every quaternion ``q`` with nonzero imaginary part lies in exactly one slice
``C_I = R + I R`` where ``I`` is the unit imaginary direction of ``q``.
Functions with real Taylor coefficients (``(1-q)^s``, ``exp``, the Bessel
kernel...) map each slice into itself, so they are evaluated in ordinary
complex arithmetic ``u + iv`` and mapped back with ``i -> I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergenceError

__all__ = [
    "Quaternion",
    "SlicePoint",
    "mul",
    "conj",
    "slice_decompose",
    "to_slice",
    "from_slice",
    "slice_apply",
    "power",
    "eval_power_series",
    "star_power_pair",
    "allclose",
]

CANONICAL_AXIS = np.array([1.0, 0.0, 0.0])


def _hamilton(a, b):
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


class Quaternion:
    """Array of quaternions ``w + x i + y j + z k``.

    Instances are immutable. Arithmetic with real scalars or real arrays
    broadcasts over the leading axes.
    """

    __slots__ = ("_a",)
    __array_priority__ = 100

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        parts = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (w, x, y, z)))
        self._a = _frozen(np.stack(parts, axis=-1))

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.array(a, dtype=float)
        if a.ndim == 0 or a.shape[-1] != 4:
            raise ValueError(f"expected trailing axis of length 4, got shape {a.shape}")
        obj = cls.__new__(cls)
        obj._a = _frozen(a)
        return obj

    @classmethod
    def from_complex(cls, z, axis=None) -> "Quaternion":
        """Embed complex numbers into the slice with imaginary unit ``axis``."""
        return from_slice(z, CANONICAL_AXIS if axis is None else _axis_array(axis))

    @classmethod
    def unit(cls, name: str) -> "Quaternion":
        idx = "1ijk".index(name)
        comps = [0.0] * 4
        comps[idx] = 1.0
        return cls(*comps)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def w(self):
        return self._a[..., 0]

    @property
    def x(self):
        return self._a[..., 1]

    @property
    def y(self):
        return self._a[..., 2]

    @property
    def z(self):
        return self._a[..., 3]

    @property
    def vector(self) -> np.ndarray:
        return self._a[..., 1:]

    @property
    def shape(self) -> tuple:
        return self._a.shape[:-1]

    def __len__(self):
        return self.shape[0]

    def __getitem__(self, idx) -> "Quaternion":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Quaternion.from_array(self._a[idx + (slice(None),)])

    def reshape(self, *shape) -> "Quaternion":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return Quaternion.from_array(self._a.reshape(shape + (4,)))

    def conj(self) -> "Quaternion":
        return Quaternion.from_array(self._a * np.array([1.0, -1.0, -1.0, -1.0]))

    def norm2(self) -> np.ndarray:
        return np.sum(self._a**2, axis=-1)

    def norm(self) -> np.ndarray:
        # hypot avoids the under/overflow of squaring tiny or huge components
        a = self._a
        return np.hypot(np.hypot(a[..., 0], a[..., 1]), np.hypot(a[..., 2], a[..., 3]))

    __abs__ = norm

    def inverse(self) -> "Quaternion":
        return Quaternion.from_array(self.conj()._a / self.norm2()[..., None])

    def __neg__(self):
        return Quaternion.from_array(-self._a)

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(self._a + other._a)
        return Quaternion.from_array(self._a + _real_part_array(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_quaternion(other))

    def __rsub__(self, other):
        return _as_quaternion(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(_hamilton(self._a, other._a))
        return Quaternion.from_array(self._a * _real_scale(other))

    def __rmul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(_hamilton(other._a, self._a))
        return Quaternion.from_array(_real_scale(other) * self._a)

    def __truediv__(self, other):
        if isinstance(other, Quaternion):
            return self * other.inverse()
        return Quaternion.from_array(self._a / _real_scale(other))

    def __repr__(self):
        if self.shape == ():
            w, x, y, z = self._a
            return f"Quaternion({w!r}, {x!r}, {y!r}, {z!r})"
        return f"Quaternion(shape={self.shape})"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _real_scale(r) -> np.ndarray:
    r = np.asarray(r)
    if np.iscomplexobj(r):
        raise TypeError("complex scalars are ambiguous here; embed them with Quaternion.from_complex")
    return r[..., None]


def _real_part_array(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape + (4,))
    out[..., 0] = r
    return out


def _as_quaternion(q) -> Quaternion:
    if isinstance(q, Quaternion):
        return q
    return Quaternion.from_array(_real_part_array(q))


def _axis_array(axis) -> np.ndarray:
    if isinstance(axis, Quaternion):
        return np.asarray(axis.vector)
    axis = np.asarray(axis, dtype=float)
    return axis[..., 1:] if axis.shape[-1] == 4 else axis


def mul(a, b) -> Quaternion:
    """Hamilton product ``a b``."""
    return _as_quaternion(a) * _as_quaternion(b)


def conj(q) -> Quaternion:
    return _as_quaternion(q).conj()


def allclose(a, b, rtol=0.0, atol=1e-12) -> bool:
    return bool(np.allclose(_as_quaternion(a).array, _as_quaternion(b).array, rtol=rtol, atol=atol))


@dataclass(frozen=True)
class SlicePoint:
    """``q = u + v I`` with ``v >= 0`` and ``I`` a unit imaginary quaternion."""

    u: np.ndarray
    v: np.ndarray
    axis: Quaternion

    def recompose(self) -> Quaternion:
        return from_slice(self.u + 1j * self.v, self.axis)

    def complex(self) -> np.ndarray:
        return self.u + 1j * self.v

    def in_ball(self) -> np.ndarray:
        return self.u**2 + self.v**2 < 1.0


def slice_decompose(q) -> SlicePoint:
    """Split ``q`` into real part, imaginary modulus and imaginary direction.

    Real quaternions get the canonical axis ``i`` so that the map is total.
    """
    z, axis = to_slice(q)
    return SlicePoint(u=z.real, v=z.imag, axis=Quaternion(0.0, axis[..., 0], axis[..., 1], axis[..., 2]))


def to_slice(q):
    """Return ``(z, axis)`` with ``q = Re z + Im z * axis`` and ``Im z >= 0``."""
    q = _as_quaternion(q)
    vec = q.vector
    v = np.hypot(np.hypot(vec[..., 0], vec[..., 1]), vec[..., 2])
    safe = np.where(v > 0.0, v, 1.0)
    axis = np.where((v > 0.0)[..., None], vec / safe[..., None], CANONICAL_AXIS)
    return q.w + 1j * v, axis


def from_slice(z, axis) -> Quaternion:
    """Map complex ``z`` to ``Re z + Im z * axis``; ``axis`` is a 3-vector array."""
    z = np.asarray(z, dtype=complex)
    axis = _axis_array(axis)
    out = np.empty(np.broadcast_shapes(z.shape, axis.shape[:-1]) + (4,))
    out[..., 0] = z.real
    out[..., 1:] = z.imag[..., None] * axis
    return Quaternion.from_array(out)


def slice_apply(f: Callable[[np.ndarray], np.ndarray], q) -> Quaternion:
    """Evaluate a real-coefficient function at quaternion ``q`` slice by slice."""
    z, axis = to_slice(q)
    return from_slice(f(z), axis)


def power(q, k: int) -> Quaternion:
    """``q**k`` for a nonnegative integer ``k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return slice_apply(lambda z: z**k, q)


def star_power_pair(p, q, k: int) -> Quaternion:
    """The ordered product ``p^k q^k``, which differs from ``(pq)^k`` off a common slice."""
    return power(p, k) * power(q, k)


def eval_power_series(coeffs, q, overflow: float = 1e300) -> Quaternion:
    """Evaluate ``sum_n q^n c_n`` (powers on the left, coefficients on the right).

    ``coeffs`` is a real array of shape ``(N,)``, a quaternion array of shape
    ``(N, 4)``, a :class:`Quaternion` of shape ``(N,)``, or any object with a
    ``coeffs`` attribute holding one of those. Real coefficients are summed in
    slice-complex arithmetic; quaternion coefficients by the nested scheme
    ``c_0 + q (c_1 + q (c_2 + ...))``.
    """
    coeffs = getattr(coeffs, "coeffs", coeffs)
    if isinstance(coeffs, Quaternion):
        coeffs = coeffs.array
    c = np.asarray(coeffs, dtype=float)
    q = _as_quaternion(q)
    if c.ndim == 1:
        z, axis = to_slice(q)
        acc = np.zeros_like(z)
        for cn in c[::-1]:
            acc = acc * z + cn
            _guard(np.abs(acc), overflow)
        return from_slice(acc, axis)
    if c.ndim != 2 or c.shape[1] != 4:
        raise ValueError(f"coefficients must have shape (N,) or (N, 4), got {c.shape}")
    acc = np.broadcast_to(c[-1], q.shape + (4,))
    qa = q.array
    for cn in c[-2::-1]:
        acc = _hamilton(qa, acc) + cn
        _guard(np.linalg.norm(acc, axis=-1), overflow)
    return Quaternion.from_array(acc)


def _guard(magnitude, overflow):
    if not np.all(np.isfinite(magnitude)) or np.any(magnitude > overflow):
        raise DivergenceError("power series partial sums exceeded the overflow threshold")
