import random
from fractions import Fraction

from fieldsimp.arith import rational_reconstruct
from fieldsimp.fields import (MembershipContext, _in_rowspan, contains,
                              fields_equal, minimize, polynomial_generators)
from fieldsimp.oms import GeneratorSet
from fieldsimp.poly import PrimeField, QQ, RationalFunction, Ring

from conftest import (CHECK_PRIMES, fields_equal_2p, genset_of, load_fixture,
                      parse_many)

FIELDS = tuple(PrimeField(p) for p in CHECK_PRIMES)


def contains_2p(genset, candidate, seed=77):
    verdicts = []
    for k, field in enumerate(FIELDS):
        rng = random.Random(seed * 1000003 + k)
        verdicts.append(contains(genset, candidate, field, rng))
    assert verdicts[0] == verdicts[1]
    return verdicts[0]


def lift_modp_poly(poly, q_ring, p):
    d = {}
    for m, c in poly.terms:
        v = rational_reconstruct(c, p)
        assert v is not None
        d[m] = v
    return q_ring.from_dict(d)


def test_contains_generators():
    gs = load_fixture("heron")
    for g in gs.generators:
        assert contains_2p(gs, g) is True


def test_contains_heron_square():
    gs = load_fixture("heron")
    a2 = parse_many(gs.ring, ["a^2"])[0]
    assert contains_2p(gs, a2) is True
    a = parse_many(gs.ring, ["a"])[0]
    assert contains_2p(gs, a) is False


def test_symmetric_field_excludes_x1():
    ring = Ring(("x1", "x2"), QQ)
    gs = genset_of(ring, ["x1 + x2", "x1*x2"])
    x1, x2 = parse_many(ring, ["x1", "x2"])
    assert contains_2p(gs, x1) is False
    assert contains_2p(gs, x1 + x2) is True
    assert contains_2p(gs, (x1 * x1 + x2 * x2) / (x1 * x2)) is True


def test_constant_candidate():
    ring = Ring(("x1", "x2"), QQ)
    gs = genset_of(ring, ["x1"])
    five = RationalFunction(ring.from_dict({(0, 0): Fraction(5)}))
    assert contains_2p(gs, five) is True


def test_jacobian_pretest_rejects():
    ring = Ring(("x1", "x2"), QQ)
    gs = genset_of(ring, ["x2"])
    x1 = parse_many(ring, ["x1"])[0]
    field = FIELDS[0]
    ctx = MembershipContext(gs, field, random.Random(5))
    grad = ctx._gradient(x1)
    # the rank pre-test alone already rules the candidate out
    assert not _in_rowspan(ctx.jacobian, grad, field.p)
    assert ctx.contains(x1) is False


def test_transcendence_rank():
    heron = load_fixture("heron")
    sym = load_fixture("example_sym")
    for k, field in enumerate(FIELDS):
        assert MembershipContext(heron, field,
                                 random.Random(k)).transcendence_rank() == 3
        assert MembershipContext(sym, field,
                                 random.Random(k)).transcendence_rank() == 2


def test_fields_equal_reflexive():
    gs = load_fixture("heron")
    assert fields_equal_2p(gs, gs) is True


def test_fields_equal_power_sums_vs_elementary():
    gs = load_fixture("example_sym")
    elem = genset_of(gs.ring, ["x1 + x2", "x1*x2"])
    assert fields_equal_2p(gs, elem) is True


def test_fields_equal_square_is_smaller():
    ring = Ring(("x1",), QQ)
    a = genset_of(ring, ["x1"])
    b = genset_of(ring, ["x1^2"])
    assert fields_equal_2p(a, b) is False


def test_fields_equal_ring_mismatch():
    a = genset_of(Ring(("x1",), QQ), ["x1"])
    b = genset_of(Ring(("x1", "x2"), QQ), ["x1"])
    try:
        fields_equal(a, b, FIELDS[0], random.Random(0))
        assert False
    except ValueError:
        pass


def test_minimize_duplicates():
    ring = Ring(("x1", "x2"), QQ)
    x1, x2 = parse_many(ring, ["x1", "x2"])
    got = minimize([x1, x1, x2], ring, FIELDS[0], random.Random(1))
    assert got == [x1, x2]


def test_minimize_redundant_power_sum():
    ring = Ring(("x1", "x2"), QQ)
    e1, e2, p2 = parse_many(ring, ["x1 + x2", "x1*x2", "x1^2 + x2^2"])
    # p2 is a polynomial in the first two: e1^2 - 2 e2
    assert p2 == e1 * e1 - e2 - e2
    for k, field in enumerate(FIELDS):
        got = minimize([e1, e2, p2], ring, field, random.Random(k))
        assert len(got) == 2
        kept = GeneratorSet(ring, got)
        full = GeneratorSet(ring, [e1, e2, p2])
        assert fields_equal_2p(kept, full) is True


def test_minimize_singleton():
    ring = Ring(("x1",), QQ)
    x1 = parse_many(ring, ["x1"])[0]
    assert minimize([x1], ring, FIELDS[0], random.Random(2)) == [x1]


def test_polynomial_generators_single_variable():
    gs = genset_of(Ring(("x1", "x2"), QQ), ["x1"])
    field = FIELDS[0]
    basis = polynomial_generators(gs, 1, field, random.Random(3),
                                  include_constants=True)
    assert len(basis) == 2
    supports = sorted(b.support() for b in basis)
    assert supports == [((0, 0),), ((1, 0),)]


def test_polynomial_generators_symmetric():
    gs = load_fixture("example_sym")
    field = FIELDS[0]
    basis = polynomial_generators(gs, 2, field, random.Random(4),
                                  include_constants=True)
    assert len(basis) == 4
    # every basis element lifts to a Q polynomial inside the field
    for b in basis:
        cand = lift_modp_poly(b, gs.ring, field.p)
        assert contains_2p(gs, cand) is True


SEIR_ORDER = ["k", "N", "beta", "eps", "gamma", "mu", "r"]


def test_polynomial_generators_seir():
    gs = load_fixture("seir34", var_order=SEIR_ORDER)
    field = FIELDS[0]
    basis = polynomial_generators(gs, 2, field, random.Random(6))
    expected = parse_many(gs.ring,
                          ["mu", "N", "eps + gamma", "k*eps", "eps*gamma"])
    # vectorize over the union of supports and check span membership
    mons = sorted({m for b in basis for m in b.support()}
                  | {m for e in expected for m in e.num.support()})
    idx = {m: i for i, m in enumerate(mons)}

    def vec(terms):
        row = [0] * len(mons)
        for m, c in terms:
            row[idx[m]] = c
        return row

    rows = [vec(b.terms) for b in basis]
    from oracle import in_fp_span
    for e in expected:
        emod, _ = e.modp(basis[0].ring)
        assert in_fp_span(rows, vec(emod.monic().terms), field.p)
