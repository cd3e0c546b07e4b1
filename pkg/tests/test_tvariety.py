import pytest

from symfano.curvepair import is_neg_infinity, lct_g
from symfano.errors import (
    DegreeError,
    InputError,
    MorphismHypothesisViolated,
    NotFano,
    NotInvariant,
    NotLogTerminal,
    NotSymmetric,
)
from symfano.exact import ProjPoint
from symfano.groups import LatticeAutGroup, MoebiusElement
from symfano.rationals import rat
from symfano.schemas import fixture_path, load_variety, read_json
from symfano.selftest import suite_effectivity
from symfano.tvariety import (
    CxOneVariety,
    DeclaredAction,
    DivisorOnX,
    Fiber,
    FiberBook,
    HorizontalDivisor,
    PointDivisor,
    VerticalDivisor,
    anticanonical_lift,
    boundary,
    canonical_divisor,
    glct,
    glct_info,
    is_effective,
    ke_verdict,
    multiplicity,
    non_reduced_fibers,
    pullback,
)


def pt(t):
    return ProjPoint.from_affine(rat(t))


INF = ProjPoint.infinity()
NEG_LATTICE = [[[-1, 0], [0, -1]]]


def variety(name):
    return load_variety(read_json(fixture_path(name + ".json")))


def bidegree_fibers():
    return FiberBook(
        [
            Fiber(pt(0), (VerticalDivisor("u0", 1), VerticalDivisor("v0", 2))),
            Fiber(INF, (VerticalDivisor("u1", 1), VerticalDivisor("v1", 2))),
            Fiber(pt(-1), (VerticalDivisor("u2", 1), VerticalDivisor("v2", 2))),
        ]
    )


def trivial_symmetry_variety(fibers, horizontals=(), dim=3):
    return CxOneVariety(
        name="test",
        dim=dim,
        fibers=fibers,
        horizontals=horizontals,
        lattice=LatticeAutGroup(dim - 1, NEG_LATTICE if dim == 3 else [[[-1]]]),
        moebius_generators=(MoebiusElement.identity(),),
    )


def test_multiplicity():
    v = variety("bidegree12")
    assert multiplicity(v, pt(0)) == 2
    assert multiplicity(v, pt(1)) == 1
    assert multiplicity(variety("quadric"), pt(-1)) == 2
    assert multiplicity(variety("quadric"), pt(0)) == 1


def test_non_reduced_fibers():
    assert set(non_reduced_fibers(variety("bidegree12"))) == {pt(0), INF, pt(-1)}
    assert set(non_reduced_fibers(variety("quadric"))) == {pt(-1)}
    assert set(non_reduced_fibers(variety("quadric-blowup"))) == {pt(0), INF, pt(-1)}
    assert non_reduced_fibers(variety("p2-cstar")) == ()


def test_boundary():
    b = boundary(variety("bidegree12"))
    assert {(p, c) for p, c in b} == {(pt(0), rat(1, 2)), (INF, rat(1, 2)), (pt(-1), rat(1, 2))}
    assert len(boundary(variety("p2-cstar"))) == 0
    fibers = FiberBook([Fiber(pt(0), (VerticalDivisor("a", 1), VerticalDivisor("b", 3)))])
    b = boundary(trivial_symmetry_variety(fibers))
    assert list(b) == [(pt(0), rat(2, 3))]


def test_boundary_support_is_non_reduced_locus():
    for name in ("bidegree12", "quadric", "quadric-blowup", "p2-cstar"):
        v = variety(name)
        positive = {p for p, c in boundary(v) if not is_neg_infinity(c) and c > 0}
        assert positive == set(non_reduced_fibers(v))


def test_declared_empty_fiber():
    fibers = FiberBook([Fiber(pt(0), ()), Fiber(INF, (VerticalDivisor("w", 2),))])
    v = trivial_symmetry_variety(fibers)
    assert multiplicity(v, pt(0)) == 0
    b = boundary(v)
    assert is_neg_infinity(b.coefficient(pt(0)))
    assert b.coefficient(INF) == rat(1, 2)
    with pytest.raises(MorphismHypothesisViolated):
        glct(v)
    with pytest.raises(MorphismHypothesisViolated):
        ke_verdict(v)


def test_pullback():
    v = variety("bidegree12")
    d = pullback(v, pt(0), rat(1))
    assert d == DivisorOnX({"u0": 1, "v0": 2})
    d = pullback(v, pt(5), rat(1))
    assert d.generic == {pt(5): rat(1)} and not d.named
    assert pullback(v, pt(0), rat(0)).is_zero()


def test_canonical_divisor():
    v = variety("bidegree12")
    k = canonical_divisor(v, PointDivisor({pt(0): rat(-1), INF: rat(-1)}))
    assert k == DivisorOnX({"u0": -1, "v0": -1, "u1": -1, "v1": -1, "v2": 1})
    with pytest.raises(DegreeError):
        canonical_divisor(v, PointDivisor({pt(0): rat(-1)}))


def test_canonical_divisor_with_horizontal():
    fibers = FiberBook([])
    v = trivial_symmetry_variety(fibers, horizontals=(HorizontalDivisor("h"),))
    k = canonical_divisor(v, PointDivisor({pt(3): rat(-2)}))
    assert k.named == {"h": rat(-1)} and k.generic == {pt(3): rat(-2)}
    fibers = FiberBook([Fiber(pt(0), (VerticalDivisor("w", 2),))])
    v = trivial_symmetry_variety(fibers)
    k = canonical_divisor(v, PointDivisor({pt(9): rat(-2)}))
    assert k.named == {"w": rat(1)} and k.generic == {pt(9): rat(-2)}


def test_anticanonical_lift_effectivity():
    v = variety("bidegree12")
    q = PointDivisor({pt(0): rat(1, 2), INF: rat(1, 2), pt(-1): rat(1, 2), pt(1): rat(1, 2)})
    # the marked part is invariant; the extra generic point breaks invariance for S3
    with pytest.raises(NotInvariant):
        anticanonical_lift(v, q)
    vt = trivial_symmetry_variety(bidegree_fibers())
    lift = anticanonical_lift(vt, q)
    assert lift.coefficient("u0") == rat(1, 2) and lift.coefficient("v0") == 0
    assert lift.generic == {pt(1): rat(1, 2)}
    assert is_effective(lift)

    q2 = PointDivisor({pt(1): rat(2)})
    lift2 = anticanonical_lift(vt, q2)
    assert lift2.coefficient("v0") == -1
    assert not is_effective(lift2)

    with pytest.raises(DegreeError):
        anticanonical_lift(vt, PointDivisor({pt(1): rat(1)}))


def test_canonical_plus_anticanonical_cancels():
    vt = trivial_symmetry_variety(bidegree_fibers(), horizontals=(HorizontalDivisor("h"),))
    k_y = PointDivisor({pt(0): rat(-1), INF: rat(-1)})
    q_y = PointDivisor({pt(0): rat(1), INF: rat(1)})
    total = canonical_divisor(vt, k_y) + anticanonical_lift(vt, q_y)
    assert total.is_zero()


def test_effectivity_suite(rng, property_cases):
    assert suite_effectivity(rng, property_cases) == []


def test_glct_fixtures():
    assert glct(variety("bidegree12")) == 1
    assert glct(variety("quadric")) == rat(1, 3)
    assert glct(variety("quadric-blowup")) == 1


def test_glct_preconditions():
    v = variety("p2-cstar")
    with pytest.raises(NotSymmetric):
        glct(v)
    bad = CxOneVariety(
        name="notfano", dim=3, fibers=bidegree_fibers(), horizontals=(),
        lattice=LatticeAutGroup(2, NEG_LATTICE),
        moebius_generators=(MoebiusElement.identity(),), fano=False,
    )
    with pytest.raises(NotFano):
        glct(bad)
    bad2 = CxOneVariety(
        name="notlt", dim=3, fibers=bidegree_fibers(), horizontals=(),
        lattice=LatticeAutGroup(2, NEG_LATTICE),
        moebius_generators=(MoebiusElement.identity(),), log_terminal=False,
    )
    with pytest.raises(NotLogTerminal):
        glct(bad2)


def test_ke_verdict_fixtures():
    v = ke_verdict(variety("bidegree12"))
    assert v.certified and v.route == "three-non-reduced-fibers"
    v = ke_verdict(variety("quadric-blowup"))
    assert v.certified and v.route == "three-non-reduced-fibers"
    v = ke_verdict(variety("quadric"))
    assert not v.certified and v.route is None
    assert v.details["glct"] == "1/3" and v.details["non_reduced_count"] == 1
    with pytest.raises(NotSymmetric):
        ke_verdict(variety("p2-cstar"))


def test_ke_verdict_swapped_pair_route():
    fibers = FiberBook(
        [
            Fiber(pt(0), (VerticalDivisor("a", 2),)),
            Fiber(INF, (VerticalDivisor("b", 2),)),
        ]
    )
    v = CxOneVariety(
        name="swap", dim=3, fibers=fibers, horizontals=(),
        lattice=LatticeAutGroup(2, NEG_LATTICE),
        moebius_generators=(MoebiusElement([[0, 1], [1, 0]]),),
    )
    verdict = ke_verdict(v)
    assert verdict.certified and verdict.route == "swapped-pair"
    # same fibers with the trivial induced action: no swap, threshold fails too
    v2 = trivial_symmetry_variety(fibers)
    verdict2 = ke_verdict(v2)
    assert not verdict2.certified


def test_ke_verdict_fixed_point_free_route():
    s3_moebius = (MoebiusElement([[-1, -1], [1, 0]]), MoebiusElement([[1, 0], [-1, -1]]))
    s3_lattice = LatticeAutGroup(2, [[[0, -1], [1, -1]], [[1, -1], [0, -1]]])
    fibers = FiberBook([])
    v = CxOneVariety(
        name="free", dim=3, fibers=fibers, horizontals=(),
        lattice=s3_lattice, moebius_generators=s3_moebius,
    )
    verdict = ke_verdict(v)
    assert verdict.certified and verdict.route == "fixed-point-free"


def test_counting_routes_imply_threshold_one():
    # whenever a counting route certifies and the threshold is defined, it is 1
    for name in ("bidegree12", "quadric-blowup"):
        v = variety(name)
        verdict = ke_verdict(v)
        assert verdict.certified
        assert glct(v) == 1
    fibers = FiberBook(
        [
            Fiber(pt(0), (VerticalDivisor("a", 2),)),
            Fiber(INF, (VerticalDivisor("b", 2),)),
        ]
    )
    v = CxOneVariety(
        name="swap", dim=3, fibers=fibers, horizontals=(),
        lattice=LatticeAutGroup(2, NEG_LATTICE),
        moebius_generators=(MoebiusElement([[0, 1], [1, 0]]),),
    )
    assert ke_verdict(v).certified and glct(v) == 1


@pytest.mark.parametrize("order", [4, 8])
def test_no_counting_route_pins_threshold_at_one_half(order):
    # two non-reduced fibers at the involution's fixed points are never
    # swapped; the tight class is the fixed marked orbit, whose minimand
    # (1 - b)/(2 - 2b) is exactly 1/2 whatever the order, below every
    # dim/(dim+1) bound, so the verdict stays inconclusive
    fibers = FiberBook(
        [
            Fiber(pt(1), (VerticalDivisor("a", order),)),
            Fiber(pt(-1), (VerticalDivisor("b", order),)),
        ]
    )
    v = CxOneVariety(
        name="fixed-pair", dim=2, fibers=fibers, horizontals=(),
        lattice=LatticeAutGroup(1, [[[-1]]]),
        moebius_generators=(MoebiusElement([[0, 1], [1, 0]]),),
    )
    assert glct(v) == rat(1, 2)
    verdict = ke_verdict(v)
    assert not verdict.certified and verdict.route is None


def test_declared_action_lower_bound():
    fibers = bidegree_fibers()
    lattice = LatticeAutGroup(2, [[[0, -1], [1, -1]], [[1, -1], [0, -1]]])
    v = CxOneVariety(
        name="declared", dim=3, fibers=fibers, horizontals=(),
        lattice=lattice,
        declared=DeclaredAction(((1, 2, 0), (0, 2, 1)), induced_cyclic=False),
    )
    info = glct_info(v)
    assert info.is_lower_bound
    # marked orbit of size 3 gives 3; unseen orbits bounded below by 2/(1/2)=4
    assert info.value == 1
    verdict = ke_verdict(v)
    assert verdict.certified and verdict.route == "three-non-reduced-fibers"
    assert any("lower bound" in w for w in verdict.warnings)


def test_declared_action_cyclic_flag_controls_fixed_point_route():
    fibers = FiberBook([Fiber(pt(0), (VerticalDivisor("a", 2),))])
    lattice = LatticeAutGroup(2, NEG_LATTICE)
    free = CxOneVariety(
        name="declfree", dim=3, fibers=fibers, horizontals=(),
        lattice=lattice, declared=DeclaredAction(((0,),), induced_cyclic=False),
    )
    assert ke_verdict(free).route == "fixed-point-free"
    cyc = CxOneVariety(
        name="declcyc", dim=3, fibers=fibers, horizontals=(),
        lattice=lattice, declared=DeclaredAction(((0,),), induced_cyclic=True),
    )
    assert not ke_verdict(cyc).certified


def test_construction_validation():
    fibers = bidegree_fibers()
    lattice = LatticeAutGroup(2, NEG_LATTICE)
    # moving a marked point to an unmarked one
    with pytest.raises(NotInvariant):
        CxOneVariety(
            name="bad", dim=3, fibers=fibers, horizontals=(),
            lattice=lattice, moebius_generators=(MoebiusElement([[1, 1], [0, 1]]),),
        )
    # multiplicity mismatch under a declared permutation
    uneven = FiberBook(
        [
            Fiber(pt(0), (VerticalDivisor("a", 2),)),
            Fiber(INF, (VerticalDivisor("b", 3),)),
        ]
    )
    with pytest.raises(NotInvariant):
        CxOneVariety(
            name="bad2", dim=3, fibers=uneven, horizontals=(),
            lattice=lattice, declared=DeclaredAction(((1, 0),), induced_cyclic=True),
        )
    with pytest.raises(InputError):
        CxOneVariety(
            name="bad3", dim=3, fibers=uneven, horizontals=(),
            lattice=lattice, moebius_generators=None, declared=None,
        )
    # duplicate divisor names
    dup = FiberBook(
        [
            Fiber(pt(0), (VerticalDivisor("a", 1),)),
            Fiber(INF, (VerticalDivisor("a", 1),)),
        ]
    )
    with pytest.raises(InputError):
        trivial_symmetry_variety(dup)
    with pytest.raises(InputError):
        VerticalDivisor("zero", 0)


def test_routes_and_threshold_agree_random(rng, property_cases):
    from symfano.selftest import _random_variety

    threshold = rat(3, 4)  # the random varieties have dim 3
    for _ in range(property_cases):
        v = _random_variety(rng)
        verdict = ke_verdict(v)
        value = glct(v)
        if verdict.certified and verdict.route != "threshold":
            assert value == 1
        if not verdict.certified:
            assert value <= threshold


def test_glct_matches_direct_lct_on_fixtures():
    for name in ("bidegree12", "quadric", "quadric-blowup"):
        v = variety(name)
        res = lct_g(boundary(v), v.moebius_group())
        assert glct(v) == res.capped_at_one()
