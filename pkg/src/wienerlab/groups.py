"""Group contexts: the torus T^d, Euclidean space R^d and finite abelian groups.

All three are written additively. Points of the torus are kept in [0, 1)^d,
points of a finite group Z_{m_1} x ... x Z_{m_r} are integer vectors reduced
modulo the moduli. Characters are ``x -> exp(2 pi i <gamma, x>)`` with the
pairing appropriate to each group; the forward Fourier transform uses the
conjugate character.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

TORUS = "torus"
EUCLIDEAN = "euclidean"
FINITE = "finite"

_KINDS = (TORUS, EUCLIDEAN, FINITE)


@dataclass(frozen=True)
class GroupContext:
    """Which group we are working on.

    Use the constructors :meth:`torus`, :meth:`euclidean` and :meth:`finite`
    rather than calling the class directly.
    """

    kind: str
    d: int
    moduli: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d!r}")
        if self.kind == FINITE:
            if len(self.moduli) != self.d:
                raise ValueError("finite group needs one modulus per coordinate")
            if any(int(m) != m or m < 2 for m in self.moduli):
                raise ValueError(f"every modulus must be an integer >= 2, got {self.moduli}")
        elif self.moduli:
            raise ValueError("moduli only apply to finite groups")

    @classmethod
    def torus(cls, d: int) -> "GroupContext":
        return cls(TORUS, int(d))

    @classmethod
    def euclidean(cls, d: int) -> "GroupContext":
        return cls(EUCLIDEAN, int(d))

    @classmethod
    def finite(cls, moduli) -> "GroupContext":
        moduli = tuple(int(m) for m in np.atleast_1d(moduli))
        return cls(FINITE, len(moduli), moduli)

    @property
    def is_torus(self) -> bool:
        return self.kind == TORUS

    @property
    def is_euclidean(self) -> bool:
        return self.kind == EUCLIDEAN

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def order(self) -> int:
        """Number of elements of a finite group."""
        if not self.is_finite:
            raise ValueError(f"{self.kind} group is infinite")
        return reduce(lambda a, b: a * b, self.moduli, 1)

    @property
    def identity(self) -> np.ndarray:
        dtype = np.int64 if self.is_finite else float
        return np.zeros(self.d, dtype=dtype)

    @property
    def dual_is_discrete(self) -> bool:
        return not self.is_euclidean

    def __str__(self):
        if self.is_finite:
            return "Z_" + "xZ_".join(str(m) for m in self.moduli)
        name = "T" if self.is_torus else "R"
        return f"{name}^{self.d}"

    # -- coordinates -------------------------------------------------------

    def point(self, x) -> np.ndarray:
        """Canonical coordinates of a group element (or a batch of them)."""
        arr = self._batch(x, "point")
        if self.is_torus:
            arr = np.mod(arr.astype(float), 1.0)
            # mod can round 1 - tiny up to exactly 1.0
            arr[arr >= 1.0] = 0.0
        elif self.is_finite:
            arr = self._as_int(arr, "point") % np.asarray(self.moduli)
        else:
            arr = arr.astype(float)
        return arr

    def frequency(self, k) -> np.ndarray:
        """Canonical coordinates of a dual-group element (or a batch)."""
        arr = self._batch(k, "frequency")
        if self.is_torus:
            return self._as_int(arr, "frequency")
        if self.is_finite:
            return self._as_int(arr, "frequency") % np.asarray(self.moduli)
        return arr.astype(float)

    def _batch(self, x, what) -> np.ndarray:
        arr = np.array(x)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.shape[-1] != self.d:
            if self.d == 1 and arr.ndim == 1:
                arr = arr.reshape(-1, 1)
            else:
                raise ValueError(
                    f"{what} has trailing dimension {arr.shape[-1]}, expected {self.d} for {self}"
                )
        return arr

    @staticmethod
    def _as_int(arr, what) -> np.ndarray:
        if arr.dtype.kind in "iu":
            return arr.astype(np.int64)
        rounded = np.rint(arr)
        if not np.all(rounded == arr):
            raise ValueError(f"{what} must have integer coordinates")
        return rounded.astype(np.int64)

    def pairing(self, k, x) -> np.ndarray:
        """``<k, x>`` reduced to [-1/2, 1/2] (a real number mod 1).

        Broadcasts over leading axes of ``k`` and ``x``. On finite groups the
        reduction is done in integer arithmetic so that characters are exact
        homomorphisms.
        """
        k = self.frequency(k)
        x = self.point(x)
        if self.is_finite:
            lcm = reduce(math.lcm, self.moduli, 1)
            scale = np.asarray([lcm // m for m in self.moduli], dtype=np.int64)
            moduli = np.asarray(self.moduli, dtype=np.int64)
            num = np.sum(((k * x) % moduli) * scale, axis=-1) % lcm
            p = num / lcm
        else:
            p = np.sum(k * x, axis=-1)
        return p - np.round(p)

    def distance(self, x, y) -> np.ndarray:
        """Euclidean distance, measured around the torus where that applies."""
        diff = np.asarray(self.point(x), dtype=float) - np.asarray(self.point(y), dtype=float)
        if self.is_torus:
            diff = diff - np.round(diff)
        elif self.is_finite:
            m = np.asarray(self.moduli)
            diff = np.mod(diff, m)
            diff = np.minimum(diff, m - diff)
        return np.sqrt(np.sum(diff * diff, axis=-1))


def char_eval(ctx: GroupContext, gamma, x):
    """Evaluate the character ``gamma`` at ``x``: ``exp(2 pi i <gamma, x>)``.

    Returns a complex scalar when both arguments are single elements and an
    array otherwise (leading axes broadcast).
    """
    value = np.exp(2j * np.pi * ctx.pairing(gamma, x))
    if np.ndim(value) == 0:
        return complex(value)
    return value


def haar_normalizers(ctx: GroupContext) -> tuple[float, float]:
    """Constants in front of the forward and inverse Fourier transforms."""
    if ctx.is_finite:
        return 1.0, 1.0 / ctx.order
    return 1.0, 1.0


def finite_elements(ctx: GroupContext) -> np.ndarray:
    """All elements of a finite group in lexicographic order, shape (|G|, d)."""
    if not ctx.is_finite:
        raise ValueError("only finite groups can be enumerated")
    grids = np.indices(ctx.moduli).reshape(ctx.d, -1).T
    return grids.astype(np.int64)
