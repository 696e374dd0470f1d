"""Quaternion and imaginary-quaternion (su(2)) algebra.

Scalars are stored in (1, I, J, K) order.  The scalar types below are for
readable single-point work; the array helpers at the bottom operate on
trailing axes of length 4 (quaternions) or 3 (imaginary quaternions) and are
what the field evaluators use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        w, x, y, z = (float(v) for v in a)
        return cls(w, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def to_json(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_json(cls, data) -> "Quaternion":
        if len(data) != 4:
            raise ValueError(f"quaternion needs 4 components, got {len(data)}")
        return cls.from_array(data)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        s = float(other)
        return Quaternion(s * self.w, s * self.x, s * self.y, s * self.z)

    def __rmul__(self, other):
        s = float(other)
        return Quaternion(s * self.w, s * self.x, s * self.y, s * self.z)


@dataclass(frozen=True)
class ImQuaternion:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, a) -> "ImQuaternion":
        x, y, z = (float(v) for v in a)
        return cls(x, y, z)

    def to_json(self) -> list[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_json(cls, data) -> "ImQuaternion":
        if len(data) != 3:
            raise ValueError(f"imaginary quaternion needs 3 components, got {len(data)}")
        return cls.from_array(data)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
UNITS = (ONE, I, J, K)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def im(q: Quaternion) -> ImQuaternion:
    return ImQuaternion(q.x, q.y, q.z)


def commutator(a: ImQuaternion, b: ImQuaternion) -> ImQuaternion:
    """``ab - ba``; for imaginary quaternions this is ``2 a x b``."""
    ab = mul(a.as_quaternion(), b.as_quaternion())
    ba = mul(b.as_quaternion(), a.as_quaternion())
    return im(ab - ba)


# --- array helpers -----------------------------------------------------------

def qmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product broadcast over leading axes of ``(..., 4)`` arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
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


def qconj_array(q: np.ndarray) -> np.ndarray:
    q = np.array(q, dtype=float, copy=True)
    q[..., 1:] *= -1.0
    return q


def embed_im(v: np.ndarray) -> np.ndarray:
    """``(..., 3)`` imaginary part to ``(..., 4)`` quaternion with zero real part."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (4,))
    out[..., 1:] = v
    return out


def as_quat_array(x) -> np.ndarray:
    if isinstance(x, Quaternion):
        return x.to_array()
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1] != 4:
        raise ValueError(f"expected trailing axis of length 4, got shape {arr.shape}")
    return arr


# unit table e_j for j = 1..4 as a (4, 4) array
UNIT_ARRAY = np.eye(4)
