import random
import sys

import pytest

from zkgrant.algebra import Scalar
from zkgrant.circuit import (
    AgeSecrets,
    AgeStatement,
    build_age_circuit,
    synthesize_witness,
)
from zkgrant.groth16 import prove, setup


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdict lines after the run, capture or not."""
    verdicts = getattr(sys.modules.get("test_acceptance"), "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def age8():
    """Constraint system and keys for the default 8-bit circuit."""
    cs = build_age_circuit(8)
    pk, vk = setup(cs, b"shared test seed / bit width 8")
    return cs, pk, vk


@pytest.fixture(scope="session")
def age4():
    cs = build_age_circuit(4)
    pk, vk = setup(cs, b"shared test seed / bit width 4")
    return cs, pk, vk


@pytest.fixture(scope="session")
def age2():
    cs = build_age_circuit(2)
    pk, vk = setup(cs, b"shared test seed / bit width 2")
    return cs, pk, vk


def make_statement(current_year=2025, threshold=18, salt=3):
    s = Scalar(salt)
    return AgeStatement(
        current_year=Scalar(current_year),
        threshold=Scalar(threshold),
        salt_squared=s * s,
    )


def make_proof(cs, pk, rng: random.Random, current_year=2025, threshold=18, birth_year=None):
    """Eligible random identity -> (statement, proof)."""
    if birth_year is None:
        max_diff = min((1 << cs.bit_width) - 1, current_year - threshold - 1900)
        birth_year = current_year - threshold - rng.randint(0, max_diff)
    salt = Scalar(rng.randrange(1, 2**64))
    statement = AgeStatement(
        current_year=Scalar(current_year),
        threshold=Scalar(threshold),
        salt_squared=salt * salt,
    )
    witness = synthesize_witness(cs, statement, AgeSecrets(Scalar(birth_year), salt))
    blinding = (Scalar(rng.randrange(1, 2**128)), Scalar(rng.randrange(1, 2**128)))
    return statement, prove(pk, cs, witness, blinding)
