"""Synthetic finite complex measures with known atomic part.

A :class:`Measure` is a finite list of atoms plus absolutely continuous
pieces (Gaussian, uniform box, Haar measure on the torus) and an optional
middle-thirds Cantor measure. Each continuous piece has unit total mass and is
scaled by a complex coefficient, so the total variation of the whole measure
is bounded by the sum of the absolute weights and coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .groups import GroupContext

ATOM_MERGE_TOL = 1e-9

GAUSSIAN = "gaussian"
BOX = "box"
LEBESGUE = "lebesgue"
AC_KINDS = (GAUSSIAN, BOX, LEBESGUE)


@dataclass(frozen=True)
class Atom:
    position: tuple
    weight: complex


@dataclass(frozen=True)
class AcComponent:
    """Unit-mass absolutely continuous piece times ``coefficient``.

    ``gaussian`` is an isotropic normal law with standard deviation ``width``
    (periodized on the torus), ``box`` is the uniform law on
    ``center +- half_widths``, ``lebesgue`` is Haar measure on the torus.
    """

    kind: str
    coefficient: complex = 1.0
    center: tuple | None = None
    width: float | None = None
    half_widths: tuple | None = None


@dataclass(frozen=True)
class CantorComponent:
    """Middle-thirds Cantor law on ``[offset, offset + 1]`` (d = 1 only)."""

    coefficient: complex = 1.0
    offset: float = 0.0


@dataclass(frozen=True)
class Measure:
    ctx: GroupContext
    atoms: tuple[Atom, ...] = ()
    ac: tuple[AcComponent, ...] = ()
    cantor: CantorComponent | None = None

    @property
    def is_atomic(self) -> bool:
        return not self.ac and self.cantor is None

    def total_variation_bound(self) -> float:
        tv = sum(abs(a.weight) for a in self.atoms)
        tv += sum(abs(c.coefficient) for c in self.ac)
        if self.cantor is not None:
            tv += abs(self.cantor.coefficient)
        return float(tv)

    def atom_positions(self) -> np.ndarray:
        if not self.atoms:
            return np.zeros((0, self.ctx.d))
        return np.array([a.position for a in self.atoms])

    def atom_weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.atoms], dtype=complex)

    def __add__(self, other: "Measure") -> "Measure":
        if other.ctx != self.ctx:
            raise ValueError("cannot add measures on different groups")
        if self.cantor is not None and other.cantor is not None:
            if self.cantor.offset != other.cantor.offset:
                raise ValueError("only one Cantor component per measure is supported")
            cantor = CantorComponent(
                self.cantor.coefficient + other.cantor.coefficient, self.cantor.offset
            )
        else:
            cantor = self.cantor if self.cantor is not None else other.cantor
        return make_measure(self.ctx, self.atoms + other.atoms, self.ac + other.ac, cantor)

    def scale(self, factor: complex) -> "Measure":
        """The measure ``factor * self``."""
        factor = complex(factor)
        return Measure(
            self.ctx,
            tuple(Atom(a.position, a.weight * factor) for a in self.atoms),
            tuple(replace(c, coefficient=c.coefficient * factor) for c in self.ac),
            None if self.cantor is None
            else replace(self.cantor, coefficient=self.cantor.coefficient * factor),
        )


def _position(ctx: GroupContext, pos) -> tuple:
    arr = ctx.point(pos)
    if arr.ndim != 1:
        raise ValueError(f"expected a single point of {ctx}, got shape {np.shape(pos)}")
    if ctx.is_finite:
        return tuple(int(v) for v in arr)
    return tuple(float(v) for v in arr)


def _check_ac(ctx: GroupContext, comp: AcComponent) -> AcComponent:
    if comp.kind not in AC_KINDS:
        raise ValueError(f"unknown absolutely continuous kind {comp.kind!r}")
    if ctx.is_finite:
        raise ValueError("finite groups carry only atoms")
    coef = complex(comp.coefficient)
    if comp.kind == LEBESGUE:
        if not ctx.is_torus:
            raise ValueError("Lebesgue (Haar) component needs a torus: it is infinite on R^d")
        return AcComponent(LEBESGUE, coef)
    center = _position(ctx, ctx.identity if comp.center is None else comp.center)
    if comp.kind == GAUSSIAN:
        if comp.width is None or not comp.width > 0:
            raise ValueError(f"gaussian width must be positive, got {comp.width!r}")
        return AcComponent(GAUSSIAN, coef, center=center, width=float(comp.width))
    hw = np.atleast_1d(np.asarray(comp.half_widths, dtype=float))
    if hw.size == 1 and ctx.d > 1:
        hw = np.repeat(hw, ctx.d)
    if hw.shape != (ctx.d,):
        raise ValueError(f"box needs {ctx.d} half-widths, got {comp.half_widths!r}")
    if not np.all(hw > 0):
        raise ValueError(f"box half-widths must be positive, got {comp.half_widths!r}")
    return AcComponent(BOX, coef, center=center, half_widths=tuple(float(h) for h in hw))


def make_measure(ctx: GroupContext, atoms=(), ac=(), cantor=None) -> Measure:
    """Validate and normalize the pieces of a measure.

    ``atoms`` may hold :class:`Atom` instances or ``(position, weight)`` pairs.
    Torus positions are wrapped into [0, 1)^d and atoms closer than 1e-9 are
    merged by adding their weights.
    """
    merged: list[list] = []
    for atom in atoms:
        pos, weight = (atom.position, atom.weight) if isinstance(atom, Atom) else atom
        pos = _position(ctx, pos)
        weight = complex(weight)
        if not np.isfinite(weight):
            raise ValueError("atom weights must be finite")
        for entry in merged:
            if ctx.distance(entry[0], pos) <= ATOM_MERGE_TOL:
                entry[1] += weight
                break
        else:
            merged.append([pos, weight])

    ac = tuple(_check_ac(ctx, c) for c in ac)

    if cantor is not None:
        if ctx.is_finite or ctx.d != 1:
            raise ValueError("the Cantor component is only defined in dimension 1")
        if not isinstance(cantor, CantorComponent):
            cantor = CantorComponent(complex(cantor))
        offset = cantor.offset
        if ctx.is_torus:
            offset = float(ctx.point(offset)[0])
        cantor = CantorComponent(complex(cantor.coefficient), float(offset))

    return Measure(ctx, tuple(Atom(p, w) for p, w in merged), ac, cantor)


def dirac(ctx: GroupContext, position=None, weight: complex = 1.0) -> Measure:
    """Point mass ``weight * delta_position`` (at the identity by default)."""
    position = ctx.identity if position is None else position
    return make_measure(ctx, [(position, weight)])


def translate(mu: Measure, x0) -> Measure:
    """Shift every piece of ``mu`` by ``x0`` (the image measure under ``t -> t + x0``)."""
    ctx = mu.ctx
    shift = ctx.point(x0)
    if shift.ndim != 1:
        raise ValueError("translate takes a single group element")
    shift = shift.astype(float) if not ctx.is_finite else shift

    def moved(pos):
        return np.asarray(pos) + shift

    atoms = [(moved(a.position), a.weight) for a in mu.atoms]
    ac = [
        c if c.kind == LEBESGUE else replace(c, center=tuple(moved(c.center)))
        for c in mu.ac
    ]
    cantor = None
    if mu.cantor is not None:
        cantor = replace(mu.cantor, offset=mu.cantor.offset + float(shift[0]))
    return make_measure(ctx, atoms, ac, cantor)


def true_atom(mu: Measure, x) -> complex:
    """The mass ``mu({x})``: only atoms carry point mass."""
    pos = mu.ctx.point(x)
    for a in mu.atoms:
        if mu.ctx.distance(a.position, pos) <= ATOM_MERGE_TOL:
            return complex(a.weight)
    return 0j


def weight_array(mu: Measure) -> np.ndarray:
    """Atom weights of a measure on a finite group as an array shaped like the group."""
    if not mu.ctx.is_finite:
        raise ValueError("weight arrays are only defined on finite groups")
    if not mu.is_atomic:
        raise ValueError("finite groups carry only atoms")
    out = np.zeros(mu.ctx.moduli, dtype=complex)
    for a in mu.atoms:
        out[a.position] += a.weight
    return out


def measure_from_weights(ctx: GroupContext, weights) -> Measure:
    """Inverse of :func:`weight_array`; zero entries are dropped."""
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != ctx.moduli:
        raise ValueError(f"weights of shape {weights.shape} do not match {ctx}")
    atoms = [(idx, w) for idx, w in np.ndenumerate(weights) if w != 0]
    return make_measure(ctx, atoms)


def random_atomic_measure(ctx: GroupContext, n_atoms: int, rng: np.random.Generator,
                          spread: float = 1.0) -> Measure:
    """Random complex atomic measure, used by tests and the self-check.

    On R^d positions are uniform in ``[-spread, spread]^d``.
    """
    if ctx.is_finite:
        positions = np.stack([rng.integers(0, m, n_atoms) for m in ctx.moduli], axis=1)
    elif ctx.is_torus:
        positions = rng.random((n_atoms, ctx.d))
    else:
        positions = rng.uniform(-spread, spread, (n_atoms, ctx.d))
    weights = rng.normal(size=n_atoms) + 1j * rng.normal(size=n_atoms)
    return make_measure(ctx, list(zip(positions, weights)))
