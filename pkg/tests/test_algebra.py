import random

import gmpy2
import pytest

from zkgrant import algebra
from zkgrant.algebra import (
    CURVE_ORDER,
    FIELD_MODULUS,
    G1Point,
    G2Point,
    Scalar,
    TargetElement,
    decode_point,
    encode_point,
    g1_generator,
    g2_generator,
    group_add,
    group_mul,
    group_neg,
    multi_scalar_mul,
    pairing,
    pairing_check,
    root_of_unity,
    scalar_arith,
)
from zkgrant.errors import InversionOfZero, MalformedEncoding


# --- scalar field ------------------------------------------------------------

def test_scalar_canonical_form():
    assert Scalar(CURVE_ORDER).value == 0
    assert Scalar(-1).value == CURVE_ORDER - 1
    assert Scalar(CURVE_ORDER + 5) == Scalar(5)


def test_scalar_arith_dispatch():
    a, b = Scalar(7), Scalar(3)
    assert scalar_arith("add", a, b) == Scalar(10)
    assert scalar_arith("sub", a, b) == Scalar(4)
    assert scalar_arith("mul", a, b) == Scalar(21)
    assert scalar_arith("inv", b) * b == Scalar(1)
    with pytest.raises(ValueError):
        scalar_arith("inv", a, b)
    with pytest.raises(ValueError):
        scalar_arith("add", a)
    with pytest.raises(ValueError):
        scalar_arith("exp", a, b)


def test_multiplicative_identity_and_additive_inverse():
    rng = random.Random(0xA1)
    for _ in range(50):
        a = Scalar(rng.randrange(CURVE_ORDER))
        assert a * Scalar(1) == a
        assert a + Scalar(CURVE_ORDER - a.value) == Scalar(0)


def test_inverse_of_zero_rejected():
    with pytest.raises(InversionOfZero):
        Scalar(0).inverse()


def test_random_inverses():
    rng = random.Random(0xA2)
    for _ in range(100):
        a = Scalar(rng.randrange(1, CURVE_ORDER))
        assert a * a.inverse() == Scalar(1)


def test_field_axioms_randomized():
    # associativity, commutativity, distributivity and inverses on >= 1000 triples
    rng = random.Random(0xA3)
    for _ in range(1000):
        a = Scalar(rng.randrange(CURVE_ORDER))
        b = Scalar(rng.randrange(CURVE_ORDER))
        c = Scalar(rng.randrange(CURVE_ORDER))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a
        assert a - a == Scalar(0)


# --- group operations --------------------------------------------------------

def test_group_mul_zero_and_one():
    for gen in (g1_generator(), g2_generator()):
        assert group_mul(gen, Scalar(0)).infinity
        assert group_mul(gen, Scalar(1)) == gen


def test_group_mul_composition():
    rng = random.Random(0xB1)
    for gen in (g1_generator(), g2_generator()):
        for _ in range(5):
            a = rng.randrange(1, CURVE_ORDER)
            b = rng.randrange(1, CURVE_ORDER)
            left = group_mul(group_mul(gen, a), b)
            right = group_mul(gen, a * b % CURVE_ORDER)
            assert left == right


def test_group_add_matches_scalar_mul():
    g = g1_generator()
    assert group_add(g, g) == group_mul(g, 2)
    assert group_add(group_mul(g, 3), group_mul(g, 4)) == group_mul(g, 7)
    assert group_add(g, group_neg(g)).infinity


def test_group_order_annihilates():
    assert group_mul(g1_generator(), CURVE_ORDER).infinity
    assert group_mul(g2_generator(), CURVE_ORDER).infinity


def test_multi_scalar_mul_matches_naive():
    rng = random.Random(0xB2)
    g = g1_generator()
    points = [group_mul(g, rng.randrange(1, CURVE_ORDER)) for _ in range(6)]
    scalars = [rng.randrange(CURVE_ORDER) for _ in range(6)]
    expected = G1Point(0, 0, infinity=True)
    for p, k in zip(points, scalars):
        expected = group_add(expected, group_mul(p, k))
    assert multi_scalar_mul(points, scalars) == expected


def test_invalid_point_construction_rejected():
    with pytest.raises(ValueError):
        G1Point(1, 3)  # not on curve
    with pytest.raises(ValueError):
        G2Point((1, 0), (2, 0))  # not on twist


# --- pairing -----------------------------------------------------------------

def test_pairing_infinity_gives_identity():
    inf1 = G1Point(0, 0, infinity=True)
    inf2 = G2Point((0, 0), (0, 0), infinity=True)
    assert pairing(inf1, g2_generator()).is_identity()
    assert pairing(g1_generator(), inf2).is_identity()


def test_pairing_nondegenerate():
    assert not pairing(g1_generator(), g2_generator()).is_identity()


def test_pairing_bilinearity():
    rng = random.Random(0xC1)
    g1, g2 = g1_generator(), g2_generator()
    base = pairing(g1, g2)
    for _ in range(50):
        a = rng.randrange(1, CURVE_ORDER)
        b = rng.randrange(1, CURVE_ORDER)
        assert pairing(group_mul(g1, a), group_mul(g2, b)) == base ** (a * b % CURVE_ORDER)


def test_pairing_product_cancellation():
    g1, g2 = g1_generator(), g2_generator()
    assert pairing_check([(g1, g2), (group_neg(g1), g2)])
    assert not pairing_check([(g1, g2), (g1, g2)])


def test_target_element_ops():
    e = pairing(g1_generator(), g2_generator())
    assert (e * e.inverse()).is_identity()
    assert e ** 0 == TargetElement.identity()
    assert e ** 2 == e * e
    assert (e ** CURVE_ORDER).is_identity()


def test_pairing_operation_counter_advances():
    before = algebra.pairing_operation_count()
    pairing(g1_generator(), g2_generator())
    assert algebra.pairing_operation_count() == before + 1


# --- serialization -----------------------------------------------------------

def test_encode_decode_roundtrip_100_random_points():
    rng = random.Random(0xD1)
    g1, g2 = g1_generator(), g2_generator()
    for _ in range(100):
        p = group_mul(g1, rng.randrange(1, CURVE_ORDER))
        q = group_mul(g2, rng.randrange(1, CURVE_ORDER))
        assert decode_point(encode_point(p)) == p
        assert decode_point(encode_point(q)) == q
        assert len(encode_point(p)) == 64
        assert len(encode_point(q)) == 128


def test_infinity_encodes_as_zeros():
    assert encode_point(G1Point(0, 0, infinity=True)) == bytes(64)
    assert decode_point(bytes(64)).infinity
    assert encode_point(G2Point((0, 0), (0, 0), infinity=True)) == bytes(128)
    assert decode_point(bytes(128)).infinity


def test_decode_rejects_out_of_range_coordinate():
    bad = FIELD_MODULUS.to_bytes(32, "big") + (2).to_bytes(32, "big")
    with pytest.raises(MalformedEncoding):
        decode_point(bad)


def test_decode_rejects_wrong_length():
    with pytest.raises(MalformedEncoding):
        decode_point(bytes(63))
    with pytest.raises(MalformedEncoding):
        decode_point(bytes(127))


def test_decode_rejects_off_curve():
    blob = (1).to_bytes(32, "big") + (3).to_bytes(32, "big")
    with pytest.raises(MalformedEncoding):
        decode_point(blob)


def test_decode_rejects_wrong_subgroup_g2():
    # a twist point found by x-search has order divisible by the cofactor
    x, y = algebra._twist_point_of_unknown_order(12345)
    fx = (gmpy2.mpz(x[0]), gmpy2.mpz(x[1]))
    fy = (gmpy2.mpz(y[0]), gmpy2.mpz(y[1]))
    assert algebra._g2_on_curve(fx, fy)
    assert not algebra._g2_has_order_r(fx, fy)
    blob = (
        x[1].to_bytes(32, "big")
        + x[0].to_bytes(32, "big")
        + y[1].to_bytes(32, "big")
        + y[0].to_bytes(32, "big")
    )
    with pytest.raises(MalformedEncoding):
        decode_point(blob)


def test_fast_subgroup_check_agrees_with_order_oracle():
    rng = random.Random(0xD2)
    # members
    for _ in range(5):
        q = group_mul(g2_generator(), rng.randrange(1, CURVE_ORDER))
        fx = (gmpy2.mpz(q.x[0]), gmpy2.mpz(q.x[1]))
        fy = (gmpy2.mpz(q.y[0]), gmpy2.mpz(q.y[1]))
        assert algebra._g2_in_subgroup(fx, fy)
        assert algebra._g2_has_order_r(fx, fy)
    # non-members
    for seed in (3, 99, 4242):
        x, y = algebra._twist_point_of_unknown_order(seed)
        fx = (gmpy2.mpz(x[0]), gmpy2.mpz(x[1]))
        fy = (gmpy2.mpz(y[0]), gmpy2.mpz(y[1]))
        assert algebra._g2_in_subgroup(fx, fy) == algebra._g2_has_order_r(fx, fy)
        assert not algebra._g2_in_subgroup(fx, fy)


# --- internal tower sanity ---------------------------------------------------

def test_frobenius_matches_exponentiation():
    # x^p must equal the constant-folded Frobenius on a pairing output
    e = pairing(g1_generator(), g2_generator())
    raw = e._raw()
    assert algebra._f12_frob(raw) == algebra._f12_pow(raw, FIELD_MODULUS)


def test_fp12_inverse():
    e = pairing(group_mul(g1_generator(), 7), g2_generator())
    raw = e._raw()
    assert algebra._f12_mul(raw, algebra._f12_inv(raw)) == algebra._F12_ONE


# --- roots of unity ----------------------------------------------------------

@pytest.mark.parametrize("order", [1, 2, 4, 16, 64, 1 << 10])
def test_root_of_unity_orders(order):
    w = root_of_unity(order).value
    assert pow(w, order, CURVE_ORDER) == 1
    if order > 1:
        assert pow(w, order // 2, CURVE_ORDER) != 1


def test_root_of_unity_rejects_bad_orders():
    with pytest.raises(ValueError):
        root_of_unity(3)
    with pytest.raises(ValueError):
        root_of_unity(1 << 29)
