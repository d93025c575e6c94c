import random
from itertools import product

import pytest

from zkgrant.algebra import CURVE_ORDER, Scalar
from zkgrant.circuit import (
    AgeSecrets,
    AgeStatement,
    WIRE_FIRST_BIT,
    WitnessVector,
    build_age_circuit,
    check_witness,
    format_constraints,
    synthesize_witness,
)
from zkgrant.errors import (
    InvalidBitWidth,
    LengthMismatch,
    PredicateUnsatisfied,
    RangeOverflow,
    SaltMismatch,
)
from conftest import make_statement


def _walk_counts(cs):
    """Independent constraint-walk oracle: recount rows and referenced wires."""
    max_wire = 0
    rows = 0
    for a, b, c in cs.constraints:
        rows += 1
        for lc in (a, b, c):
            for index, _ in lc.terms:
                max_wire = max(max_wire, index)
    return rows, max_wire + 1


@pytest.mark.parametrize("bit_width", [1, 4, 8, 16, 32])
def test_constraint_count_formula(bit_width):
    cs = build_age_circuit(bit_width)
    rows, wires = _walk_counts(cs)
    assert cs.num_constraints == rows == bit_width + 2
    assert cs.num_variables == wires == 6 + bit_width
    assert cs.num_public == 3


def test_default_circuit_shape():
    cs = build_age_circuit(8)
    assert cs.num_constraints == 10
    assert cs.num_public == 3
    # 1 constant + 3 public + 2 secret + 8 bit wires
    assert cs.num_variables == 14


def test_bit_width_one():
    assert build_age_circuit(1).num_constraints == 3


@pytest.mark.parametrize("bad", [0, -1, 65, 1000])
def test_invalid_bit_width(bad):
    with pytest.raises(InvalidBitWidth):
        build_age_circuit(bad)


def test_synthesize_known_example():
    # 2025 - 2000 - 18 = 7 -> bits 1110 0000 (least significant first)
    cs = build_age_circuit(8)
    witness = synthesize_witness(
        cs, make_statement(2025, 18, salt=3), AgeSecrets(Scalar(2000), Scalar(3))
    )
    bits = [a.value for a in witness.assignments[WIRE_FIRST_BIT:]]
    assert bits == [1, 1, 1, 0, 0, 0, 0, 0]
    assert witness.assignments[0] == Scalar(1)
    assert witness.public_inputs(cs.num_public) == make_statement(2025, 18, 3).to_public_inputs()
    assert check_witness(cs, witness)


def test_synthesize_boundary_diff_zero():
    cs = build_age_circuit(8)
    witness = synthesize_witness(
        cs, make_statement(2025, 18, salt=5), AgeSecrets(Scalar(2007), Scalar(5))
    )
    assert all(a.value == 0 for a in witness.assignments[WIRE_FIRST_BIT:])
    assert check_witness(cs, witness)


def test_synthesize_underage_rejected():
    cs = build_age_circuit(8)
    with pytest.raises(PredicateUnsatisfied):
        synthesize_witness(cs, make_statement(2025, 18, 3), AgeSecrets(Scalar(2010), Scalar(3)))


def test_synthesize_overflow_rejected():
    cs = build_age_circuit(4)
    with pytest.raises(RangeOverflow):
        synthesize_witness(cs, make_statement(2025, 18, 3), AgeSecrets(Scalar(1991), Scalar(3)))


def test_salt_mismatch_rejected():
    cs = build_age_circuit(8)
    statement = AgeStatement(Scalar(2025), Scalar(18), Scalar(10))
    with pytest.raises(SaltMismatch):
        synthesize_witness(cs, statement, AgeSecrets(Scalar(2000), Scalar(3)))


def test_zero_salt_rejected():
    with pytest.raises(ValueError):
        AgeSecrets(Scalar(2000), Scalar(0))


def test_check_witness_length_mismatch():
    cs = build_age_circuit(8)
    with pytest.raises(LengthMismatch):
        check_witness(cs, WitnessVector((Scalar(1),)))


def test_oracle_agreement_on_random_valid_instances():
    rng = random.Random(0xE1)
    cs = build_age_circuit(8)
    for _ in range(100):
        threshold = rng.randint(0, 90)
        diff = rng.randint(0, 255)
        current = rng.randint(1990, 2100)
        birth = current - threshold - diff
        salt = Scalar(rng.randrange(1, CURVE_ORDER))
        statement = AgeStatement(Scalar(current), Scalar(threshold), salt * salt)
        witness = synthesize_witness(cs, statement, AgeSecrets(Scalar(birth), salt))
        assert check_witness(cs, witness)


def test_tampered_bit_wire_fails():
    cs = build_age_circuit(8)
    witness = synthesize_witness(
        cs, make_statement(2025, 18, 3), AgeSecrets(Scalar(2000), Scalar(3))
    )
    tampered = list(witness.assignments)
    tampered[WIRE_FIRST_BIT] = Scalar(2)  # breaks booleanity
    assert not check_witness(cs, WitnessVector(tuple(tampered)))


def test_tampered_salt_square_fails():
    cs = build_age_circuit(8)
    witness = synthesize_witness(
        cs, make_statement(2025, 18, 3), AgeSecrets(Scalar(2000), Scalar(3))
    )
    tampered = list(witness.assignments)
    tampered[3] = Scalar(tampered[3].value + 1)
    assert not check_witness(cs, WitnessVector(tuple(tampered)))


def _exhaustive_bit_search(cs, current, threshold, birth, salt):
    """All satisfying bit assignments for fixed publics and identity wires."""
    salt_sq = Scalar(salt) * Scalar(salt)
    found = []
    for bits in product((0, 1), repeat=cs.bit_width):
        assignment = [Scalar(0)] * cs.num_variables
        assignment[0] = Scalar(1)
        assignment[1] = Scalar(current)
        assignment[2] = Scalar(threshold)
        assignment[3] = salt_sq
        assignment[4] = Scalar(birth)
        assignment[5] = Scalar(salt)
        for i, bit in enumerate(bits):
            assignment[WIRE_FIRST_BIT + i] = Scalar(bit)
        if check_witness(cs, WitnessVector(tuple(assignment))):
            found.append(bits)
    return found


def test_exhaustive_satisfiability_bit_width_4():
    cs = build_age_circuit(4)
    for diff in range(16):
        birth = 2025 - 18 - diff
        witness = synthesize_witness(
            cs, make_statement(2025, 18, 9), AgeSecrets(Scalar(birth), Scalar(9))
        )
        assert check_witness(cs, witness)
        found = _exhaustive_bit_search(cs, 2025, 18, birth, 9)
        assert found == [tuple((diff >> i) & 1 for i in range(4))]


def test_exhaustive_unsatisfiability_bit_width_4():
    cs = build_age_circuit(4)
    # negative difference: the field residue is astronomically large and no
    # 4-bit recomposition can reach it
    for birth in (2010, 2026, 2300):
        with pytest.raises(PredicateUnsatisfied):
            synthesize_witness(cs, make_statement(2025, 18, 9), AgeSecrets(Scalar(birth), Scalar(9)))
        assert _exhaustive_bit_search(cs, 2025, 18, birth, 9) == []
    # overflowing difference
    for birth in (1991, 1900):
        with pytest.raises(RangeOverflow):
            synthesize_witness(cs, make_statement(2025, 18, 9), AgeSecrets(Scalar(birth), Scalar(9)))
        assert _exhaustive_bit_search(cs, 2025, 18, birth, 9) == []


def test_format_constraints_dump():
    cs = build_age_circuit(2)
    text = format_constraints(cs)
    lines = text.splitlines()
    assert "constraints=4" in lines[0]
    assert len(lines) == 1 + cs.num_constraints
    # recomposition row references powers of two
    assert "1*w6 + 2*w7" in text
