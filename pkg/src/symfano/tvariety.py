"""Combinatorial model of a complexity-one torus variety.

The variety is presented by its quotient data: for finitely many marked points
of the quotient line, the list of invariant divisors in the fiber with their
generic stabilizer orders; every unmarked point implicitly carries a single
divisor of order 1, and an explicitly empty list records a point missing from
the image of the quotient map.  On top sit the boundary pair, the pullback and
canonical-divisor formulas, and the existence verdict combining the symmetry
test, the non-reduced fiber counts, and the threshold criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .curvepair import MarkedCurvePair, NEG_INFINITY, finite_degree, lct_g
from .errors import (
    DegreeError,
    InputError,
    MorphismHypothesisViolated,
    NotFano,
    NotInvariant,
    NotLogTerminal,
    NotSymmetric,
)
from .exact import ProjPoint
from .groups import (
    DEFAULT_GROUP_CAP,
    LatticeAutGroup,
    MoebiusElement,
    MoebiusGroup,
    closure,
    has_global_fixed_point,
    is_symmetric,
)
from .rationals import ONE, Q, TWO, ZERO, rat, rat_str


@dataclass(frozen=True)
class VerticalDivisor:
    """Invariant divisor in one fiber with its generic stabilizer order."""

    name: str
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise InputError(f"divisor {self.name}: order must be >= 1")


@dataclass(frozen=True)
class HorizontalDivisor:
    name: str


@dataclass(frozen=True)
class Fiber:
    """Marked point with its vertical divisors; an empty list is a declared
    gap in the image of the quotient map."""

    point: ProjPoint
    divisors: tuple[VerticalDivisor, ...]

    @property
    def declared_empty(self) -> bool:
        return not self.divisors

    @property
    def multiplicity(self) -> int:
        return max((d.order for d in self.divisors), default=0)


class FiberBook:
    """All marked fibers; unmarked points carry one implicit order-1 divisor."""

    __slots__ = ("fibers",)

    def __init__(self, fibers):
        fibers = tuple(fibers)
        pts = [f.point for f in fibers]
        if len(set(pts)) != len(pts):
            raise InputError("marked points must be pairwise distinct")
        object.__setattr__(self, "fibers", fibers)

    def __setattr__(self, *_):
        raise AttributeError("FiberBook is immutable")

    def __iter__(self):
        return iter(self.fibers)

    def __len__(self):
        return len(self.fibers)

    def get(self, point: ProjPoint) -> Fiber | None:
        for f in self.fibers:
            if f.point == point:
                return f
        return None

    def points(self) -> tuple[ProjPoint, ...]:
        return tuple(f.point for f in self.fibers)


@dataclass(frozen=True)
class DeclaredAction:
    """Fallback symmetry input: how each generator permutes the marked fibers,
    plus whether the induced group on the line is cyclic (trivial counts as
    cyclic)."""

    permutations: tuple[tuple[int, ...], ...]
    induced_cyclic: bool


@dataclass
class CxOneVariety:
    """Complexity-one torus variety given combinatorially."""

    name: str
    dim: int
    fibers: FiberBook
    horizontals: tuple[HorizontalDivisor, ...]
    lattice: LatticeAutGroup
    moebius_generators: tuple[MoebiusElement, ...] | None = None
    declared: DeclaredAction | None = None
    fano: bool = True
    log_terminal: bool = True
    group_cap: int = DEFAULT_GROUP_CAP
    _moebius_group: MoebiusGroup | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 2:
            raise InputError("dim must be >= 2")
        if self.lattice.rank != self.dim - 1:
            raise InputError(f"lattice rank must be dim - 1 = {self.dim - 1}")
        names = [d.name for f in self.fibers for d in f.divisors]
        names += [h.name for h in self.horizontals]
        if len(set(names)) != len(names):
            raise InputError("divisor names must be globally unique")
        if (self.moebius_generators is None) == (self.declared is None):
            raise InputError("give either Moebius generators or a declared action")
        if self.moebius_generators is not None:
            if len(self.moebius_generators) != len(self.lattice.generators):
                raise InputError("Moebius generators must pair with lattice generators")
            self._validate_explicit_action()
        else:
            if len(self.declared.permutations) != len(self.lattice.generators):
                raise InputError("permutations must pair with lattice generators")
            self._validate_declared_action()

    def _validate_explicit_action(self):
        marked = {f.point: f for f in self.fibers}
        for g in self.moebius_generators:
            for f in self.fibers:
                image = g.apply(f.point)
                target = marked.get(image)
                if target is None:
                    raise NotInvariant(
                        f"{self.name}: generator sends marked point {f.point} to "
                        f"unmarked {image}"
                    )
                if target.multiplicity != f.multiplicity:
                    raise NotInvariant(
                        f"{self.name}: fiber multiplicity not preserved at {f.point}"
                    )

    def _validate_declared_action(self):
        n = len(self.fibers)
        fibs = self.fibers.fibers
        for perm in self.declared.permutations:
            if sorted(perm) != list(range(n)):
                raise InputError("declared permutation is not a bijection of the fibers")
            for i, j in enumerate(perm):
                if fibs[i].multiplicity != fibs[j].multiplicity:
                    raise NotInvariant(
                        f"{self.name}: declared permutation does not preserve multiplicities"
                    )

    @property
    def explicit_action(self) -> bool:
        return self.moebius_generators is not None

    def moebius_group(self) -> MoebiusGroup:
        if not self.explicit_action:
            raise InputError("no explicit induced action was given")
        if self._moebius_group is None:
            self._moebius_group = closure(self.moebius_generators, cap=self.group_cap)
        return self._moebius_group

    def marked_permutation_group(self) -> list[tuple[int, ...]]:
        """Closure of the declared permutations of the marked fibers."""
        n = len(self.fibers)
        ident = tuple(range(n))
        seen = {ident}
        frontier = [ident]
        gens = list(self.declared.permutations)
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(n))
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return sorted(seen)


class DivisorOnX:
    """Rational divisor on the variety: coefficients on the named invariant
    divisors plus formal multiples of whole fibers over unmarked points."""

    __slots__ = ("named", "generic")

    def __init__(self, named=(), generic=()):
        named_map = {}
        for name, c in dict(named).items():
            c = Q(rat(c))
            if c != 0:
                named_map[name] = c
        generic_map = {}
        for point, c in dict(generic).items():
            c = Q(rat(c))
            if c != 0:
                generic_map[point] = c
        object.__setattr__(self, "named", named_map)
        object.__setattr__(self, "generic", generic_map)

    def __setattr__(self, *_):
        raise AttributeError("DivisorOnX is immutable")

    def coefficient(self, name: str) -> Q:
        return self.named.get(name, ZERO)

    def __add__(self, other: "DivisorOnX") -> "DivisorOnX":
        named = dict(self.named)
        for k, v in other.named.items():
            named[k] = named.get(k, ZERO) + v
        generic = dict(self.generic)
        for k, v in other.generic.items():
            generic[k] = generic.get(k, ZERO) + v
        return DivisorOnX(named, generic)

    def __neg__(self) -> "DivisorOnX":
        return DivisorOnX({k: -v for k, v in self.named.items()}, {k: -v for k, v in self.generic.items()})

    def is_zero(self) -> bool:
        return not self.named and not self.generic

    def __eq__(self, other):
        if not isinstance(other, DivisorOnX):
            return NotImplemented
        return self.named == other.named and self.generic == other.generic

    def items(self):
        for name in sorted(self.named):
            yield name, self.named[name]
        for point in sorted(self.generic, key=ProjPoint.sort_key):
            yield f"fiber({point})", self.generic[point]

    def __repr__(self):
        terms = " + ".join(f"{rat_str(c)}*[{n}]" for n, c in self.items())
        return f"DivisorOnX({terms or '0'})"


class PointDivisor:
    """Rational divisor on the quotient line: finitely many points with
    coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cmap = {}
        for point, c in dict(coeffs).items():
            c = Q(rat(c))
            if c != 0:
                cmap[point] = c
        object.__setattr__(self, "coeffs", cmap)

    def __setattr__(self, *_):
        raise AttributeError("PointDivisor is immutable")

    def degree(self) -> Q:
        return sum(self.coeffs.values(), ZERO)

    def coefficient(self, point: ProjPoint) -> Q:
        return self.coeffs.get(point, ZERO)

    def items(self):
        return sorted(self.coeffs.items(), key=lambda pc: pc[0].sort_key())

    def is_invariant(self, group: MoebiusGroup) -> bool:
        for g in group:
            for p, c in self.coeffs.items():
                if self.coefficient(g.apply(p)) != c:
                    return False
        return True

    def __repr__(self):
        terms = " + ".join(f"{rat_str(c)}*({p})" for p, c in self.items())
        return f"PointDivisor({terms or '0'})"


# ---------------------------------------------------------------------------
# Fiber bookkeeping
# ---------------------------------------------------------------------------


def multiplicity(variety: CxOneVariety, point: ProjPoint) -> int:
    """Largest divisor order in the fiber; 1 when unmarked, 0 on a declared gap."""
    fiber = variety.fibers.get(point)
    if fiber is None:
        return 1
    return fiber.multiplicity


def non_reduced_fibers(variety: CxOneVariety) -> tuple[ProjPoint, ...]:
    pts = [f.point for f in variety.fibers if f.multiplicity > 1]
    return tuple(sorted(pts, key=ProjPoint.sort_key))


def boundary(variety: CxOneVariety) -> MarkedCurvePair:
    """Boundary pair (m-1)/m at each marked point, -infinity on declared gaps.

    Points of multiplicity 1 contribute coefficient 0 and are omitted.
    """
    entries = []
    for f in variety.fibers:
        if f.declared_empty:
            entries.append((f.point, NEG_INFINITY))
        else:
            m = f.multiplicity
            if m > 1:
                entries.append((f.point, Q(m - 1) / Q(m)))
    entries.sort(key=lambda pc: pc[0].sort_key())
    return MarkedCurvePair(entries)


def pullback(variety: CxOneVariety, point: ProjPoint, coeff) -> DivisorOnX:
    """Pull a point back through the quotient: each fiber divisor weighted by
    its order; no horizontal part."""
    c = Q(rat(coeff))
    fiber = variety.fibers.get(point)
    if fiber is None:
        return DivisorOnX({}, {point: c})
    return DivisorOnX({d.name: c * d.order for d in fiber.divisors}, {})


def _pullback_divisor(variety: CxOneVariety, div: PointDivisor) -> DivisorOnX:
    total = DivisorOnX()
    for point, c in div.items():
        total = total + pullback(variety, point, c)
    return total


def canonical_divisor(variety: CxOneVariety, k_y: PointDivisor) -> DivisorOnX:
    """Canonical divisor: pullback of one on the quotient, minus the horizontal
    divisors, plus (order - 1) on each vertical divisor."""
    if k_y.degree() != -2:
        raise DegreeError("canonical divisor on the line must have degree -2")
    out = _pullback_divisor(variety, k_y)
    out = out + DivisorOnX({h.name: -1 for h in variety.horizontals})
    out = out + DivisorOnX(
        {d.name: d.order - 1 for f in variety.fibers for d in f.divisors}
    )
    return out


def anticanonical_lift(variety: CxOneVariety, q_y: PointDivisor) -> DivisorOnX:
    """Invariant anticanonical divisor lifted from the quotient.

    Effective exactly when q_y dominates the boundary coefficientwise.
    """
    if q_y.degree() != 2:
        raise DegreeError("anticanonical divisor on the line must have degree 2")
    if variety.explicit_action:
        if not q_y.is_invariant(variety.moebius_group()):
            raise NotInvariant("divisor is not invariant under the induced group")
    out = _pullback_divisor(variety, q_y)
    out = out + DivisorOnX({h.name: 1 for h in variety.horizontals})
    out = out + DivisorOnX(
        {d.name: 1 - d.order for f in variety.fibers for d in f.divisors}
    )
    return out


def is_effective(div: DivisorOnX) -> bool:
    return all(c >= 0 for c in div.named.values()) and all(
        c >= 0 for c in div.generic.values()
    )


# ---------------------------------------------------------------------------
# Thresholds and the existence verdict
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlctInfo:
    value: Q
    is_lower_bound: bool
    witness: str | None


def _check_verdict_preconditions(variety: CxOneVariety):
    if not is_symmetric(variety.lattice):
        raise NotSymmetric(f"{variety.name}: the lattice action fixes a nonzero vector")
    if not variety.fano:
        raise NotFano(f"{variety.name} is not declared Fano")
    if not variety.log_terminal:
        raise NotLogTerminal(f"{variety.name} is not declared log terminal")


def glct_info(variety: CxOneVariety) -> GlctInfo:
    """Global log canonical threshold, capped at 1.

    With an explicit induced action this is exact; with a declared action only
    the marked orbits are visible, so the untouched orbit classes are bounded
    below by the smallest size they could have (1 for a cyclic group, else 2)
    and the result is a certified lower bound.
    """
    _check_verdict_preconditions(variety)
    b = boundary(variety)
    if b.has_neg_infinity:
        raise MorphismHypothesisViolated(
            f"{variety.name}: a declared-empty fiber gives a -infinity boundary"
        )
    if variety.explicit_action:
        res = lct_g(b, variety.moebius_group())
        witness = res.witness.describe() if res.witness is not None else None
        return GlctInfo(res.capped_at_one(), False, witness)

    deg = finite_degree(b)
    if deg >= 2:
        return GlctInfo(ONE, False, None)
    free = TWO - deg
    coeff_at = {f.point: (Q(f.multiplicity - 1) / Q(f.multiplicity)) for f in variety.fibers}
    fibs = variety.fibers.fibers
    perms = variety.marked_permutation_group()
    seen: set[int] = set()
    best = None
    witness = None
    for i in range(len(fibs)):
        if i in seen:
            continue
        orbit_idx = sorted({p[i] for p in perms})
        seen.update(orbit_idx)
        c = coeff_at[fibs[i].point]
        value = Q(len(orbit_idx)) * (ONE - c) / free
        if best is None or value < best:
            best = value
            witness = f"declared orbit of {fibs[i].point} (size {len(orbit_idx)})"
    floor_size = 1 if variety.declared.induced_cyclic else 2
    floor = Q(floor_size) / free
    if best is None or floor < best:
        best = floor
        witness = f"possible unseen orbit of size {floor_size}"
    return GlctInfo(min(best, ONE), True, witness)


def glct(variety: CxOneVariety) -> Q:
    return glct_info(variety).value


@dataclass(frozen=True)
class KEVerdict:
    certified: bool
    route: str | None
    details: dict
    warnings: tuple[str, ...]


def _swapped_pair(variety: CxOneVariety, p: ProjPoint, q: ProjPoint) -> bool:
    if variety.explicit_action:
        return any(g.apply(p) == q for g in variety.moebius_group())
    fibs = variety.fibers.points()
    i = fibs.index(p)
    j = fibs.index(q)
    return any(perm[i] == j for perm in variety.marked_permutation_group())


def _fixed_point_free(variety: CxOneVariety) -> bool:
    if variety.explicit_action:
        return not has_global_fixed_point(variety.moebius_group())
    return not variety.declared.induced_cyclic


def ke_verdict(variety: CxOneVariety) -> KEVerdict:
    """Existence verdict for the invariant Einstein metric.

    Certification routes, in order: three or more non-reduced fibers; exactly
    two swapped by the symmetry; a fixed-point-free induced action; or the
    threshold exceeding dim/(dim+1).  A False verdict is inconclusive, never a
    disproof.
    """
    _check_verdict_preconditions(variety)
    warnings: list[str] = []
    nr = non_reduced_fibers(variety)
    details: dict = {
        "symmetric": True,
        "non_reduced_fibers": [str(p) for p in nr],
        "non_reduced_count": len(nr),
        "certification_threshold": f"{variety.dim}/{variety.dim + 1}",
    }
    threshold = Q(variety.dim) / Q(variety.dim + 1)

    route = None
    if len(nr) >= 3:
        route = "three-non-reduced-fibers"
    elif len(nr) == 2 and _swapped_pair(variety, nr[0], nr[1]):
        route = "swapped-pair"
    elif _fixed_point_free(variety):
        route = "fixed-point-free"

    info = None
    if not boundary(variety).has_neg_infinity:
        info = glct_info(variety)
        details["glct"] = rat_str(info.value)
        details["glct_is_lower_bound"] = info.is_lower_bound
        if info.witness is not None:
            details["glct_witness"] = info.witness
        if info.is_lower_bound:
            warnings.append(
                "induced action given only as a declared permutation: the threshold "
                "is a lower bound"
            )
    elif route is None:
        raise MorphismHypothesisViolated(
            f"{variety.name}: threshold route needs a boundary without -infinity entries"
        )

    if route is None and info is not None and info.value > threshold:
        route = "threshold"
    if route is None and info is not None and info.is_lower_bound and info.value <= threshold:
        warnings.append("declared-action lower bound did not reach the threshold")

    return KEVerdict(route is not None, route, details, tuple(warnings))
