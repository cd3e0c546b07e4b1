"""Exact rational convex geometry at desk scale.

Cones are given by integer generators (V-form) or integer halfspace normals
(H-form); conversion runs a naive double description pass that tracks the
lineality space explicitly, so cones containing lines (projections create
them) are first-class.  The refinement operation enumerates sign patterns of
the input facet hyperplanes, which is exponential and guarded by a hard cap.

Intended scale is ambient rank <= 4 and a few dozen cones; everything favors
verifiable exactness over speed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import CapExceeded, InputError
from .exact import IntMatrix, _primitive, integer_kernel
from .rationals import Q, ZERO, lcm_all, rat


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _qdot(u, v):
    return sum((Q(a) * Q(b) for a, b in zip(u, v)), ZERO)


def _project_off(lineality, vector):
    """Primitive integer representative of ``vector`` modulo span(lineality).

    Orthogonal projection with exact rational arithmetic, rescaled primitive.
    Returns the zero tuple when the vector lies in the span.
    """
    if not lineality:
        return _primitive(vector)
    basis = [list(b) for b in lineality]
    v = [Q(x) for x in vector]
    # Gram-Schmidt the basis once per call; desk scale makes this cheap
    ortho: list[list[Q]] = []
    for b in basis:
        w = [Q(x) for x in b]
        for o in ortho:
            den = _qdot(o, o)
            if den != 0:
                coef = _qdot(w, o) / den
                w = [wi - coef * oi for wi, oi in zip(w, o)]
        ortho.append(w)
    for o in ortho:
        den = _qdot(o, o)
        if den != 0:
            coef = _qdot(v, o) / den
            v = [vi - coef * oi for vi, oi in zip(v, o)]
    scale = lcm_all([int(x.denominator) for x in v])
    return _primitive([int(x * scale) for x in v])


def _dd_from_halfspaces(rank: int, halfspaces) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Double description: lineality basis and extreme rays of an H-form cone.

    Starts from the whole space and adds one halfspace at a time.  A halfspace
    that cuts the current lineality turns one lineality direction into a ray
    and projects the others; otherwise the classic positive/negative ray
    pairing applies, with the combinatorial adjacency test on the zero sets of
    the halfspaces processed so far.  Rays are kept as primitive
    representatives orthogonal to the current lineality, which makes
    deduplication and the adjacency bookkeeping exact.
    """
    lineality: list[tuple[int, ...]] = [
        tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)
    ]
    rays: list[tuple[int, ...]] = []
    processed: list[tuple[int, ...]] = []

    for a in halfspaces:
        a = tuple(int(x) for x in a)
        if all(x == 0 for x in a):
            continue
        lin_vals = [_dot(a, l) for l in lineality]
        if any(v != 0 for v in lin_vals):
            idx = next(i for i, v in enumerate(lin_vals) if v != 0)
            l0 = lineality[idx]
            v0 = lin_vals[idx]
            if v0 < 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            new_lin = []
            for i, l in enumerate(lineality):
                if i == idx:
                    continue
                vl = lin_vals[i]
                new_lin.append(_primitive(tuple(v0 * x - vl * y for x, y in zip(l, l0))))
            lineality = new_lin
            new_rays = []
            for r in rays:
                vr = _dot(a, r)
                new_rays.append(tuple(v0 * x - vr * y for x, y in zip(r, l0)))
            new_rays.append(l0)
            rays = _dedupe(
                _project_off(lineality, r) for r in new_rays
            )
            processed.append(a)
            continue

        vals = {r: _dot(a, r) for r in rays}
        plus = [r for r in rays if vals[r] > 0]
        zero = [r for r in rays if vals[r] == 0]
        minus = [r for r in rays if vals[r] < 0]
        if not minus:
            processed.append(a)
            rays = sorted(plus + zero)
            continue
        zero_sets = {r: frozenset(i for i, h in enumerate(processed) if _dot(h, r) == 0) for r in rays}
        combos = []
        for p, m in itertools.product(plus, minus):
            common = zero_sets[p] & zero_sets[m]
            adjacent = not any(
                r is not p and r is not m and zero_sets[r] >= common for r in rays
            )
            if adjacent:
                w = tuple(vals[p] * x - vals[m] * y for x, y in zip(m, p))
                combos.append(_project_off(lineality, w))
        rays = _dedupe(itertools.chain(plus, zero, combos))
        processed.append(a)

    return sorted(lineality), sorted(rays)


def _dedupe(vectors) -> list[tuple[int, ...]]:
    out = []
    seen = set()
    for v in vectors:
        v = tuple(int(x) for x in v)
        if any(x != 0 for x in v) and v not in seen:
            seen.add(v)
            out.append(v)
    return sorted(out)


class Cone:
    """Convex rational polyhedral cone, possibly containing lines."""

    __slots__ = ("ambient_rank", "generators", "__dict__")

    def __init__(self, ambient_rank: int, generators=()):
        gens = _dedupe(_primitive(tuple(int(x) for x in g)) for g in generators)
        for g in gens:
            if len(g) != ambient_rank:
                raise InputError("generator has the wrong length")
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def from_halfspaces(cls, ambient_rank: int, halfspaces) -> "Cone":
        lin, rays = _dd_from_halfspaces(ambient_rank, halfspaces)
        gens = list(rays)
        for l in lin:
            gens.append(l)
            gens.append(tuple(-x for x in l))
        cone = cls(ambient_rank, gens)
        cone.__dict__["_vform"] = (lin, rays)
        return cone

    @classmethod
    def full_space(cls, ambient_rank: int) -> "Cone":
        return cls.from_halfspaces(ambient_rank, [])

    @cached_property
    def halfspaces(self) -> tuple[tuple[int, ...], ...]:
        """Integer normals with the cone = {x : <h, x> >= 0 for all h}.

        Rays of the dual plus both signs of the dual's lineality basis.
        """
        lin, rays = _dd_from_halfspaces(self.ambient_rank, self.generators)
        out = list(rays)
        for l in lin:
            out.append(l)
            out.append(tuple(-x for x in l))
        return tuple(sorted(out))

    @cached_property
    def _canonical(self) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
        """(lineality basis, extreme rays) computed from the halfspace form."""
        if "_vform" in self.__dict__:
            lin, rays = self.__dict__["_vform"]
        else:
            lin, rays = _dd_from_halfspaces(self.ambient_rank, self.halfspaces)
        return tuple(lin), tuple(rays)

    @property
    def lineality_basis(self) -> tuple[tuple[int, ...], ...]:
        return self._canonical[0]

    @property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        return self._canonical[1]

    @cached_property
    def dim(self) -> int:
        if not self.generators:
            return 0
        mat = IntMatrix(self.generators)
        return mat.cols - len(integer_kernel(mat))

    def contains_point(self, point) -> bool:
        point = [Q(rat(x)) for x in point]
        return all(_qdot(h, point) >= 0 for h in self.halfspaces)

    def contains(self, other: "Cone") -> bool:
        return all(self.contains_point(g) for g in other.generators) if other.generators else True

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return (
            self.ambient_rank == other.ambient_rank
            and self.contains(other)
            and other.contains(self)
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.key()))

    def key(self):
        """Deterministic identity key from the canonical V-form."""
        lin, rays = self._canonical
        oriented = sorted(min(l, tuple(-x for x in l)) for l in lin)
        return (self.dim, tuple(rays), tuple(oriented))

    def is_zero(self) -> bool:
        return not self.generators

    def facet_normals(self) -> tuple[tuple[int, ...], ...]:
        """The irredundant inequality normals (equality pairs excluded)."""
        out = []
        seen = set()
        for h in self.halfspaces:
            neg = tuple(-x for x in h)
            if neg in seen:
                continue
            if any(n == neg for n in self.halfspaces):
                # equality constraint: part of the span description, not a facet
                seen.add(h)
                continue
            seen.add(h)
            out.append(h)
        return tuple(sorted(out))

    def faces(self) -> list["Cone"]:
        """Every face, the cone itself and its minimal face included."""
        found = {self.key(): self}
        frontier = [self]
        while frontier:
            nxt = []
            for cone in frontier:
                for h in cone.facet_normals():
                    face = Cone.from_halfspaces(
                        self.ambient_rank,
                        list(cone.halfspaces) + [tuple(-x for x in h)],
                    )
                    if face.key() not in found:
                        found[face.key()] = face
                        nxt.append(face)
            frontier = nxt
        return sorted(found.values(), key=Cone.key)

    def __repr__(self):
        lin, rays = self._canonical
        return f"Cone(rank={self.ambient_rank}, rays={list(rays)}, lines={list(lin)})"


def dual_cone(cone: Cone) -> Cone:
    """All vectors pairing nonnegatively with the cone; double dual is identity."""
    return Cone.from_halfspaces(cone.ambient_rank, cone.generators)


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.ambient_rank != c2.ambient_rank:
        raise InputError("cannot intersect cones of different ambient rank")
    return Cone.from_halfspaces(c1.ambient_rank, list(c1.halfspaces) + list(c2.halfspaces))


def image_cone(cone: Cone, p: IntMatrix) -> Cone:
    """Image under an integer linear map, with primitive regenerated rays."""
    if p.cols != cone.ambient_rank:
        raise InputError("projection has the wrong number of columns")
    return Cone(p.rows, (p.apply(g) for g in cone.generators))


def is_face(face: Cone, cone: Cone) -> bool:
    """True when ``face`` equals the part of ``cone`` tight on some halfspaces."""
    if not cone.contains(face):
        return False
    tight = [
        h
        for h in cone.halfspaces
        if all(_dot(h, g) == 0 for g in face.generators)
    ]
    cut = Cone.from_halfspaces(
        cone.ambient_rank,
        list(cone.halfspaces) + [tuple(-x for x in h) for h in tight],
    )
    return cut == face


@dataclass(frozen=True)
class Fan:
    """Finite collection of cones closed under faces with proper pairwise
    intersections (validated on the outputs of the refinement)."""

    ambient_rank: int
    cones: tuple[Cone, ...]

    @property
    def maximal_cones(self) -> tuple[Cone, ...]:
        out = []
        for c in self.cones:
            if not any(other is not c and other.contains(c) for other in self.cones):
                out.append(c)
        return tuple(out)

    def __len__(self):
        return len(self.cones)

    def validate(self):
        for c1, c2 in itertools.combinations(self.cones, 2):
            meet = intersect(c1, c2)
            if not (is_face(meet, c1) and is_face(meet, c2)):
                raise InputError("cone intersection is not a common face")


DEFAULT_PATTERN_CAP = 2**16


def common_refinement(cones, pattern_cap: int = DEFAULT_PATTERN_CAP) -> Fan:
    """Coarsest common refinement of a family of full-dimensional cones.

    Enumerates closed sign cells of the arrangement of all input facet
    hyperplanes, keeps the cells contained in at least one input, then merges
    adjacent cells lying in exactly the same inputs (dropping one sign
    constraint at a time); merging any two of the surviving cells would cross
    a facet of some input, which is what makes the result coarsest.  The
    surviving maximal cells are closed under faces.  Cells of
    lower-dimensional inputs are invisible to the binary sign search and are
    dropped; covering the span is the caller's concern.
    """
    cones = list(cones)
    if not cones:
        raise InputError("need at least one cone")
    rank = cones[0].ambient_rank
    if any(c.ambient_rank != rank for c in cones):
        raise InputError("mixed ambient ranks")

    hyperplanes: list[tuple[int, ...]] = []
    seen = set()
    for cone in cones:
        for h in cone.facet_normals():
            canon = max(h, tuple(-x for x in h))
            if canon not in seen:
                seen.add(canon)
                hyperplanes.append(canon)
    hyperplanes.sort()

    k = len(hyperplanes)
    if 2**k > pattern_cap:
        raise CapExceeded(f"2^{k} sign patterns exceed the cap {pattern_cap}")

    def cell_of(pattern) -> Cone:
        return Cone.from_halfspaces(
            rank, [tuple(s * x for x in hyperplanes[i]) for i, s in sorted(pattern)]
        )

    def owners_of(cell: Cone) -> frozenset:
        return frozenset(i for i, cone in enumerate(cones) if cone.contains(cell))

    # pattern -> owner set, for every owned full sign cell
    cells: dict[frozenset, frozenset] = {}
    for signs in itertools.product((1, -1), repeat=k):
        pattern = frozenset(enumerate(signs))
        owners = owners_of(cell_of(pattern))
        if owners:
            cells[pattern] = owners

    # merge across a hyperplane while the two sides lie in the same inputs;
    # the union of the two cells is exactly the cell of the relaxed pattern
    merged = True
    while merged:
        merged = False
        for pattern in sorted(cells, key=sorted):
            if pattern not in cells:
                continue
            for i, s in sorted(pattern):
                relaxed = pattern - {(i, s)}
                twin = relaxed | {(i, -s)}
                if twin in cells and cells[twin] == cells[pattern]:
                    owners = cells[pattern]
                    del cells[pattern]
                    del cells[twin]
                    cells[relaxed] = owners
                    merged = True
                    break
            if merged:
                break

    distinct: list[Cone] = []
    for pattern in sorted(cells, key=sorted):
        cell = cell_of(pattern)
        if not any(cell == c for c in distinct):
            distinct.append(cell)
    maximal = [c for c in distinct if not any(o is not c and o.contains(c) for o in distinct)]
    closed: dict = {}
    for cell in maximal:
        for face in cell.faces():
            closed[face.key()] = face
    fan = Fan(rank, tuple(sorted(closed.values(), key=Cone.key)))
    fan.validate()
    return fan
