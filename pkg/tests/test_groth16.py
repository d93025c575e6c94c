import random

import pytest

from zkgrant.algebra import (
    CURVE_ORDER,
    G1Point,
    G2Point,
    Scalar,
    g1_generator,
    g2_generator,
    group_mul,
    root_of_unity,
)
from zkgrant.circuit import (
    AgeSecrets,
    WitnessVector,
    build_age_circuit,
    check_witness,
    synthesize_witness,
)
from zkgrant.errors import (
    DegenerateSystem,
    InputLengthMismatch,
    MalformedEncoding,
    MalformedProof,
    UnsatisfiedWitness,
)
from zkgrant.groth16 import (
    Proof,
    ScalarStream,
    deserialize_proof,
    evaluation_domain_size,
    export_pk,
    export_vk,
    import_pk,
    import_vk,
    prove,
    serialize_proof,
    setup,
    verify,
)
from conftest import make_proof, make_statement


def _witness(cs, current=2025, threshold=18, birth=2000, salt=3):
    return synthesize_witness(
        cs, make_statement(current, threshold, salt), AgeSecrets(Scalar(birth), Scalar(salt))
    )


# --- setup -------------------------------------------------------------------

def test_setup_deterministic_byte_identical(age8):
    cs, pk, vk = age8
    pk2, vk2 = setup(cs, b"shared test seed / bit width 8")
    assert export_pk(pk2) == export_pk(pk)
    assert export_vk(vk2) == export_vk(vk)


def test_setup_different_seeds_differ_but_both_work(age8):
    cs, pk, vk = age8
    pk2, vk2 = setup(cs, b"another seed entirely")
    assert export_vk(vk2) != export_vk(vk)
    witness = _witness(cs)
    proof = prove(pk2, cs, witness, (Scalar(11), Scalar(22)))
    assert verify(vk2, make_statement().to_public_inputs(), proof)
    # keys are not interchangeable across ceremonies
    assert not verify(vk, make_statement().to_public_inputs(), proof)


def test_setup_rejects_empty_system():
    from zkgrant.circuit import ConstraintSystem

    empty = ConstraintSystem(constraints=(), num_public=0, num_variables=1, bit_width=1)
    with pytest.raises(DegenerateSystem):
        setup(empty, b"seed")


def test_setup_rejects_empty_seed(age8):
    cs, _, _ = age8
    with pytest.raises(ValueError):
        setup(cs, b"")


def test_evaluation_domain_size():
    assert evaluation_domain_size(build_age_circuit(8)) == 16
    assert evaluation_domain_size(build_age_circuit(2)) == 4
    assert evaluation_domain_size(build_age_circuit(1)) == 4


def test_ic_length_matches_public_count(age8):
    cs, _, vk = age8
    assert len(vk.ic) == cs.num_public + 1


# --- prove / verify ----------------------------------------------------------

def test_end_to_end_known_witness(age8):
    cs, pk, vk = age8
    proof = prove(pk, cs, _witness(cs), (Scalar(123), Scalar(456)))
    assert verify(vk, make_statement().to_public_inputs(), proof)


def test_rerandomized_proofs_differ_and_both_verify(age8):
    cs, pk, vk = age8
    witness = _witness(cs)
    p1 = prove(pk, cs, witness, (Scalar(1), Scalar(2)))
    p2 = prove(pk, cs, witness, (Scalar(3), Scalar(4)))
    assert serialize_proof(p1) != serialize_proof(p2)
    assert verify(vk, make_statement().to_public_inputs(), p1)
    assert verify(vk, make_statement().to_public_inputs(), p2)


def test_prove_rejects_tampered_witness(age8):
    cs, pk, _ = age8
    tampered = list(_witness(cs).assignments)
    tampered[6] = Scalar(1 - tampered[6].value)
    witness = WitnessVector(tuple(tampered))
    assert not check_witness(cs, witness)
    with pytest.raises(UnsatisfiedWitness):
        prove(pk, cs, witness, (Scalar(1), Scalar(2)))


def test_verify_rejects_mutated_public_input(age8):
    cs, pk, vk = age8
    proof = prove(pk, cs, _witness(cs), (Scalar(5), Scalar(6)))
    good = make_statement().to_public_inputs()
    mutated = [Scalar(2026)] + good[1:]
    assert verify(vk, good, proof)
    assert not verify(vk, mutated, proof)


def test_verify_rejects_infinity_component(age8):
    cs, pk, vk = age8
    proof = prove(pk, cs, _witness(cs), (Scalar(5), Scalar(6)))
    degenerate = Proof(a=G1Point(0, 0, infinity=True), b=proof.b, c=proof.c)
    assert not verify(vk, make_statement().to_public_inputs(), degenerate)


def test_verify_input_length_mismatch(age8):
    cs, pk, vk = age8
    proof = prove(pk, cs, _witness(cs), (Scalar(5), Scalar(6)))
    with pytest.raises(InputLengthMismatch):
        verify(vk, make_statement().to_public_inputs()[:2], proof)


def test_completeness_randomized(age8):
    cs, pk, vk = age8
    rng = random.Random(0xF1)
    for _ in range(10):
        statement, proof = make_proof(cs, pk, rng)
        assert verify(vk, statement.to_public_inputs(), proof)


def test_independent_verifier_keys_reject_random_proofs(age8):
    cs, _, vk = age8
    rng = random.Random(0xF2)
    statement = make_statement()
    for _ in range(20):
        proof = Proof(
            a=group_mul(g1_generator(), rng.randrange(1, CURVE_ORDER)),
            b=group_mul(g2_generator(), rng.randrange(1, CURVE_ORDER)),
            c=group_mul(g1_generator(), rng.randrange(1, CURVE_ORDER)),
        )
        assert not verify(vk, statement.to_public_inputs(), proof)


# --- QAP divisibility oracle ---------------------------------------------------

def _lagrange_basis_polys(points):
    """Coefficient-form Lagrange basis polynomials; deliberately a different
    algorithm from the prover's inverse DFT."""
    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % CURVE_ORDER
        return out

    basis = []
    for i, xi in enumerate(points):
        numerator = [1]
        denominator = 1
        for j, xj in enumerate(points):
            if i == j:
                continue
            numerator = poly_mul(numerator, [-xj % CURVE_ORDER, 1])
            denominator = denominator * (xi - xj) % CURVE_ORDER
        inv = pow(denominator, -1, CURVE_ORDER)
        basis.append([c * inv % CURVE_ORDER for c in numerator])
    return basis


def _qap_polys(cs, witness):
    """Interpolate the witness-combined row polynomials A, B, C."""
    domain = evaluation_domain_size(cs)
    omega = root_of_unity(domain).value
    points = [pow(omega, i, CURVE_ORDER) for i in range(domain)]
    basis = _lagrange_basis_polys(points)
    w = [a.value for a in witness.assignments]

    polys = []
    for selector in range(3):
        coeffs = [0] * domain
        for row, constraint in enumerate(cs.constraints):
            dot = sum(c.value * w[i] for i, c in constraint[selector].terms) % CURVE_ORDER
            if dot:
                for k, bc in enumerate(basis[row]):
                    coeffs[k] = (coeffs[k] + dot * bc) % CURVE_ORDER
        polys.append(coeffs)
    return polys, domain


def _poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % CURVE_ORDER
    return acc


def test_qap_divisibility_oracle_bit_width_2(age2):
    cs, _, _ = age2
    witness = synthesize_witness(
        cs, make_statement(2025, 24, salt=7), AgeSecrets(Scalar(1999), Scalar(7))
    )
    assert check_witness(cs, witness)
    (pa, pb, pc), domain = _qap_polys(cs, witness)

    # long-divide A*B - C by Z(X) = X^domain - 1, fully independently
    product = [0] * (2 * domain - 1)
    for i, ai in enumerate(pa):
        for j, bj in enumerate(pb):
            product[i + j] = (product[i + j] + ai * bj) % CURVE_ORDER
    for i, ci in enumerate(pc):
        product[i] = (product[i] - ci) % CURVE_ORDER
    quotient = [0] * (domain - 1)
    for k in range(len(product) - 1, domain - 1, -1):
        top = product[k]
        if top:
            quotient[k - domain] = top
            product[k - domain] = (product[k - domain] + top) % CURVE_ORDER
            product[k] = 0
    assert not any(product), "satisfying witness must divide exactly"

    rng = random.Random(0xAB)
    for _ in range(20):
        x = rng.randrange(CURVE_ORDER)
        lhs = (_poly_eval(pa, x) * _poly_eval(pb, x) - _poly_eval(pc, x)) % CURVE_ORDER
        z = (pow(x, domain, CURVE_ORDER) - 1) % CURVE_ORDER
        assert lhs == _poly_eval(quotient, x) * z % CURVE_ORDER


def test_qap_divisibility_fails_for_bad_witness(age2):
    cs, _, _ = age2
    witness = synthesize_witness(
        cs, make_statement(2025, 24, salt=7), AgeSecrets(Scalar(1999), Scalar(7))
    )
    tampered = list(witness.assignments)
    tampered[3] = Scalar(tampered[3].value + 1)
    bad = WitnessVector(tuple(tampered))
    assert not check_witness(cs, bad)
    (pa, pb, pc), domain = _qap_polys(cs, bad)
    omega = root_of_unity(domain).value
    # at some domain point the row equation must break, so Z cannot divide
    residuals = [
        (_poly_eval(pa, pow(omega, i, CURVE_ORDER))
         * _poly_eval(pb, pow(omega, i, CURVE_ORDER))
         - _poly_eval(pc, pow(omega, i, CURVE_ORDER))) % CURVE_ORDER
        for i in range(domain)
    ]
    assert any(residuals)


# --- serialization -----------------------------------------------------------

def test_proof_roundtrip_100(age8):
    cs, pk, _ = age8
    rng = random.Random(0xF3)
    witness = _witness(cs)
    for _ in range(100):
        proof = prove(
            pk,
            cs,
            witness,
            (Scalar(rng.randrange(1, CURVE_ORDER)), Scalar(rng.randrange(1, CURVE_ORDER))),
        )
        blob = serialize_proof(proof)
        assert len(blob) == 256
        assert deserialize_proof(blob) == proof


def test_proof_wrong_length_rejected():
    with pytest.raises(MalformedEncoding):
        deserialize_proof(bytes(255))
    with pytest.raises(MalformedProof):
        deserialize_proof(bytes(255))


def test_proof_bad_point_rejected(age8):
    cs, pk, _ = age8
    blob = bytearray(serialize_proof(prove(pk, cs, _witness(cs), (Scalar(1), Scalar(2)))))
    blob[0:64] = (1).to_bytes(32, "big") + (3).to_bytes(32, "big")  # off-curve A
    with pytest.raises(MalformedProof):
        deserialize_proof(bytes(blob))


def test_vk_document_roundtrip(age8):
    cs, pk, vk = age8
    text = export_vk(vk)
    vk2 = import_vk(text)
    assert vk2 == vk
    proof = prove(pk, cs, _witness(cs), (Scalar(9), Scalar(8)))
    assert verify(vk2, make_statement().to_public_inputs(), proof)


def test_vk_document_rejects_garbage():
    with pytest.raises(MalformedEncoding):
        import_vk("not a key document")
    with pytest.raises(MalformedEncoding):
        import_vk("zkgrant verifying key v1\nalpha_g1 zz\n")


def test_pk_document_roundtrip(age8):
    cs, pk, vk = age8
    pk2 = import_pk(export_pk(pk))
    assert pk2 == pk
    proof = prove(pk2, cs, _witness(cs), (Scalar(77), Scalar(88)))
    assert verify(vk, make_statement().to_public_inputs(), proof)


# --- deterministic scalar stream ----------------------------------------------

def test_scalar_stream_reproducible():
    a = ScalarStream(b"seed material")
    b = ScalarStream(b"seed material")
    assert [a.next_scalar() for _ in range(8)] == [b.next_scalar() for _ in range(8)]


def test_scalar_stream_distinct_labels_and_seeds():
    base = [ScalarStream(b"seed").next_scalar() for _ in range(1)]
    assert ScalarStream(b"seed", b"other label").next_scalar() not in base
    assert ScalarStream(b"other seed").next_scalar() not in base


def test_scalar_stream_rejects_empty_seed():
    with pytest.raises(ValueError):
        ScalarStream(b"")
