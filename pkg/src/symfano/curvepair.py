"""Log pairs on the projective line and their equivariant thresholds.

A marked pair carries finitely many points with rational coefficients (or the
marker ``NEG_INFINITY`` for a relaxed point).  The two predicates computed
here are the equivariant global log canonical threshold and the "every
invariant anticanonical divisor above the boundary stays log canonical" test.

On a curve a pair is log canonical iff every coefficient is at most 1, and
among invariant effective divisors of fixed degree the largest coefficient at
a point is achieved by piling the whole free mass evenly on that point's
orbit.  Both computations therefore reduce to one minimum over orbit classes:
the orbits of the marked points, the finitely many orbits with nontrivial
stabilizer, and the free orbit class of full group size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CoefficientOutOfRange, MixedExtension, NotInvariant
from .exact import ProjPoint
from .groups import MoebiusGroup, Orbit, exceptional_orbits, orbit_of
from .rationals import ONE, Q, TWO, ZERO, rat


class _NegInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"


#: marker coefficient for a relaxed (no lower bound) point
NEG_INFINITY = _NegInfinity()


def is_neg_infinity(coeff) -> bool:
    return coeff is NEG_INFINITY


class MarkedCurvePair:
    """Projective line with pairwise distinct marked points and coefficients."""

    __slots__ = ("marked",)

    def __init__(self, marked):
        entries = []
        seen = set()
        ext = None
        for point, coeff in marked:
            if not isinstance(point, ProjPoint):
                raise NotInvariant(f"not a projective point: {point!r}")
            if point in seen:
                raise CoefficientOutOfRange(f"point {point} marked twice")
            seen.add(point)
            d = point.extension
            if d is not None:
                if ext is not None and ext != d:
                    raise MixedExtension("marked points span two quadratic extensions")
                ext = d
            entries.append((point, coeff if is_neg_infinity(coeff) else Q(rat(coeff))))
        object.__setattr__(self, "marked", tuple(entries))

    def __setattr__(self, *_):
        raise AttributeError("MarkedCurvePair is immutable")

    def __iter__(self):
        return iter(self.marked)

    def __len__(self):
        return len(self.marked)

    def points(self) -> tuple[ProjPoint, ...]:
        return tuple(p for p, _ in self.marked)

    def coefficient(self, point: ProjPoint):
        for p, c in self.marked:
            if p == point:
                return c
        return ZERO

    @property
    def has_neg_infinity(self) -> bool:
        return any(is_neg_infinity(c) for _, c in self.marked)

    def __repr__(self):
        inner = " + ".join(f"{c}*({p})" for p, c in self.marked)
        return f"MarkedCurvePair({inner or '0'})"


def finite_degree(pair: MarkedCurvePair) -> Q:
    """Sum of the finite coefficients; -infinity entries contribute nothing."""
    total = ZERO
    for _, c in pair:
        if not is_neg_infinity(c):
            total += c
    return total


@dataclass(frozen=True)
class OrbitClass:
    """One orbit class entering the threshold minimum."""

    kind: str  # marked | exceptional | generic
    size: int
    coeff: object  # rational, or NEG_INFINITY on a relaxed marked orbit
    orbit: Orbit | None  # None for the generic class

    def describe(self) -> str:
        where = "generic orbit" if self.orbit is None else f"orbit {self.orbit}"
        return f"{self.kind} {where} of size {self.size} with coefficient {self.coeff}"


def orbit_classes(pair: MarkedCurvePair, group: MoebiusGroup) -> list[OrbitClass]:
    """Marked orbits, untouched exceptional orbits, then the generic class.

    Raises NotInvariant unless the marked set is a union of orbits with a
    constant coefficient on each.
    """
    classes: list[OrbitClass] = []
    coeff_of = {p: c for p, c in pair}
    marked_orbit_sets: list[tuple[ProjPoint, ...]] = []
    consumed: set[ProjPoint] = set()
    for p, c in pair:
        if p in consumed:
            continue
        orb = orbit_of(group, p)
        for q in orb.points:
            if q not in coeff_of:
                raise NotInvariant(f"support is not orbit-closed: {q} is unmarked")
            cq = coeff_of[q]
            same = (is_neg_infinity(c) and is_neg_infinity(cq)) or (
                not is_neg_infinity(c) and not is_neg_infinity(cq) and c == cq
            )
            if not same:
                raise NotInvariant(f"coefficient not constant on the orbit of {p}")
            consumed.add(q)
        marked_orbit_sets.append(orb.points)
        classes.append(OrbitClass("marked", orb.size, c, orb))
    marked_sets = set(marked_orbit_sets)
    marked_points = set(coeff_of)
    for orb in exceptional_orbits(group):
        if orb.points in marked_sets:
            continue
        if any(p in marked_points for p in orb.points):
            # partially marked exceptional orbit: the loop above would have
            # flagged it; guard anyway
            raise NotInvariant(f"exceptional orbit {orb} is partially marked")
        classes.append(OrbitClass("exceptional", orb.size, ZERO, orb))
    classes.append(OrbitClass("generic", group.order, ZERO, None))
    return classes


@dataclass(frozen=True)
class LctResult:
    """Threshold value (None means no constraint at all) plus the tight class."""

    value: Q | None
    witness: OrbitClass | None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def capped_at_one(self) -> Q:
        if self.value is None or self.value > 1:
            return ONE
        return self.value


def lct_g(pair: MarkedCurvePair, group: MoebiusGroup) -> LctResult:
    """Equivariant global log canonical threshold of the pair.

    Coefficients must be finite with 0 <= b <= 1 and constant on orbits.  A
    boundary of degree >= 2 leaves no invariant divisor to test, so the
    threshold is reported as infinite; callers cap at 1.
    """
    for p, c in pair:
        if is_neg_infinity(c):
            raise CoefficientOutOfRange(f"-infinity coefficient at {p}")
        if c < 0 or c > 1:
            raise CoefficientOutOfRange(f"coefficient {c} at {p} outside [0, 1]")
    deg = finite_degree(pair)
    classes = orbit_classes(pair, group)
    if deg >= 2:
        return LctResult(None, None)
    free = TWO - deg
    best: Q | None = None
    witness: OrbitClass | None = None
    for cls in classes:
        value = Q(cls.size) * (ONE - cls.coeff) / free
        if best is None or value < best:
            best = value
            witness = cls
    return LctResult(best, witness)


def is_valuable(pair: MarkedCurvePair, group: MoebiusGroup) -> tuple[bool, OrbitClass | None]:
    """Whether every invariant degree-2 divisor above the boundary is log canonical.

    Finite coefficients must be <= 1; -infinity and negative entries are
    allowed and simply impose no lower bound beyond effectivity.  Returns the
    violating orbit class on failure.
    """
    for p, c in pair:
        if not is_neg_infinity(c) and c > 1:
            raise CoefficientOutOfRange(f"coefficient {c} at {p} exceeds 1")
    classes = orbit_classes(pair, group)
    sigma = ZERO
    for _, c in pair:
        if not is_neg_infinity(c) and c >= 0:
            sigma += c
    if sigma > 2:
        # no effective invariant divisor dominates the boundary: vacuously true
        return True, None
    free = TWO - sigma
    for cls in classes:
        bound = ZERO if is_neg_infinity(cls.coeff) else max(cls.coeff, ZERO)
        if bound + free / Q(cls.size) > 1:
            return False, cls
    return True, None
