import pytest

from symfano.errors import CapExceeded, InputError
from symfano.exact import IntMatrix
from symfano.polyhedral import (
    Cone,
    Fan,
    common_refinement,
    dual_cone,
    image_cone,
    intersect,
    is_face,
)
from symfano.rationals import rat


def cone2(*gens):
    return Cone(2, gens)


FIRST_ORTHANT = cone2((1, 0), (0, 1))
FULL_PLANE = cone2((1, 0), (-1, 0), (0, 1), (0, -1))
ORIGIN2 = Cone(2, [])


def test_dual_examples():
    assert dual_cone(FIRST_ORTHANT) == FIRST_ORTHANT
    assert dual_cone(FULL_PLANE) == ORIGIN2
    assert dual_cone(ORIGIN2) == FULL_PLANE
    d = dual_cone(cone2((1, 0), (1, 2)))
    assert set(d.rays) == {(0, 1), (2, -1)}


def test_double_dual_random(rng, property_cases):
    for _ in range(property_cases):
        rank = rng.randint(1, 3)
        gens = [[rng.randint(-3, 3) for _ in range(rank)] for _ in range(rng.randint(0, 4))]
        cone = Cone(rank, gens)
        assert dual_cone(dual_cone(cone)) == cone


def test_intersect_examples():
    c = cone2((1, 0), (1, 2))
    assert intersect(c, c) == c
    second = cone2((-1, 0), (0, 1))
    ray = intersect(FIRST_ORTHANT, second)
    assert ray.rays == ((0, 1),) and not ray.lineality_basis
    assert intersect(c, ORIGIN2) == ORIGIN2
    with pytest.raises(InputError):
        intersect(c, Cone(3, [(1, 0, 0)]))


def test_image_examples():
    im = image_cone(FIRST_ORTHANT, IntMatrix([[1, -1]]))
    assert im == Cone.from_halfspaces(1, [])  # the whole line
    assert image_cone(FIRST_ORTHANT, IntMatrix.identity(2)) == FIRST_ORTHANT
    im = image_cone(cone2((1, 0), (-1, -1)), IntMatrix([[1, -1]]))
    assert im == Cone(1, [(1,)])


def test_image_membership_random(rng, property_cases):
    for _ in range(property_cases):
        rank, target = rng.randint(1, 3), rng.randint(1, 3)
        gens = [[rng.randint(-3, 3) for _ in range(rank)] for _ in range(rng.randint(0, 4))]
        cone = Cone(rank, gens)
        proj = IntMatrix([[rng.randint(-2, 2) for _ in range(rank)] for _ in range(target)])
        image = image_cone(cone, proj)
        for g in cone.generators:
            assert image.contains_point(proj.apply(g))


def test_lineality_tracking():
    halfplane = Cone.from_halfspaces(2, [(1, 0)])
    assert halfplane.lineality_basis == ((0, 1),)
    assert halfplane.rays == ((1, 0),)
    line = cone2((0, 1), (0, -1))
    assert line.lineality_basis == ((0, 1),) and line.rays == ()
    assert line.dim == 1


def test_faces_of_orthant():
    faces = FIRST_ORTHANT.faces()
    dims = sorted(f.dim for f in faces)
    assert dims == [0, 1, 1, 2]
    for f in faces:
        assert is_face(f, FIRST_ORTHANT)


def test_refinement_line():
    fan = common_refinement([Cone.full_space(1), Cone(1, [(1,)]), Cone(1, [(-1,)])])
    assert len(fan.cones) == 3
    keys = {c.key() for c in fan.cones}
    assert Cone(1, [(1,)]).key() in keys and Cone(1, [(-1,)]).key() in keys
    assert Cone(1, []).key() in keys


def test_refinement_halfplanes():
    fan = common_refinement([Cone.from_halfspaces(2, [(1, 0)]), Cone.from_halfspaces(2, [(0, 1)])])
    maximal = {frozenset(c.rays) for c in fan.maximal_cones}
    assert maximal == {
        frozenset({(1, 0), (0, 1)}),
        frozenset({(-1, 0), (0, 1)}),
        frozenset({(1, 0), (0, -1)}),
    }


def test_refinement_single_input_is_identity():
    fan = common_refinement([FIRST_ORTHANT])
    assert len(fan.maximal_cones) == 1 and fan.maximal_cones[0] == FIRST_ORTHANT


def test_refinement_merges_uncut_cells():
    # a cone of another input crossing only the outside of this one must not split it
    small = cone2((1, 0), (1, 1))
    fan = common_refinement([FIRST_ORTHANT, small])
    assert {frozenset(c.rays) for c in fan.maximal_cones} == {
        frozenset({(1, 0), (1, 1)}),
        frozenset({(1, 1), (0, 1)}),
    }


def test_refinement_cap():
    cones = []
    for k in range(17):
        cones.append(Cone.from_halfspaces(2, [(1, k)]))
    with pytest.raises(CapExceeded):
        common_refinement(cones, pattern_cap=2**16)


def test_refinement_properties_random(rng, property_cases):
    def random_cone():
        while True:
            cone = cone2(
                (rng.randint(-3, 3), rng.randint(-3, 3)),
                (rng.randint(-3, 3), rng.randint(-3, 3)),
            )
            if cone.dim == 2:
                return cone

    for _ in range(property_cases // 4):
        cones = [random_cone() for _ in range(rng.randint(1, 4))]
        fan = common_refinement(cones)
        fan.validate()
        # the union is preserved (random rational points, exact membership)
        for _ in range(20):
            point = (rat(rng.randint(-9, 9), rng.randint(1, 3)), rat(rng.randint(-9, 9), rng.randint(1, 3)))
            assert any(c.contains_point(point) for c in cones) == any(
                c.contains_point(point) for c in fan.cones
            )
        # every full-dimensional cell lies inside every input whose interior it meets
        for cell in fan.maximal_cones:
            if cell.dim < 2:
                continue
            interior_point = tuple(sum(g[i] for g in cell.generators) for i in range(2))
            for cone in cones:
                if cone.contains_point(interior_point):
                    assert cone.contains(cell)


def test_fan_validate_rejects_overlap():
    bad = Fan(2, (FIRST_ORTHANT, cone2((1, 1), (-1, 1))))
    with pytest.raises(InputError):
        bad.validate()
