"""Age-eligibility constraint system and witness synthesis.

The predicate `currentYear - birthYear >= threshold` is arithmetized as a
rank-1 constraint system: the difference is decomposed into `bit_width`
boolean wires whose weighted sum must recompose it, which enforces
0 <= diff < 2^bit_width.  A second tiny gadget squares the prover's random
salt and exposes the square as a public output.

Wire layout (fixed):

    0                constant one
    1..3             public: currentYear, threshold, saltSquared
    4, 5             private: birthYear, salt
    6..5+bit_width   private: bits of the difference, least significant first

Constraint order: bit_width booleanity rows, one recomposition row, one
salt-square row, giving bit_width + 2 constraints in total.

Note that the public statement deliberately mirrors the published circuit:
salt^2 itself is a public input, which leaks the salt up to sign.  The
weakness is documented rather than silently repaired.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import CURVE_ORDER, Scalar
from .errors import (
    InvalidBitWidth,
    LengthMismatch,
    PredicateUnsatisfied,
    RangeOverflow,
    SaltMismatch,
)

MIN_BIT_WIDTH = 1
MAX_BIT_WIDTH = 64
DEFAULT_BIT_WIDTH = 8  # human age differences fit comfortably in [0, 255]

# Wire indices shared by the builder and the synthesizer.
WIRE_ONE = 0
WIRE_CURRENT_YEAR = 1
WIRE_THRESHOLD = 2
WIRE_SALT_SQUARED = 3
WIRE_BIRTH_YEAR = 4
WIRE_SALT = 5
WIRE_FIRST_BIT = 6

NUM_PUBLIC_INPUTS = 3


@dataclass(frozen=True)
class LinearCombination:
    """Sparse sum of coefficient * wire terms, normalized and deduplicated."""

    terms: tuple[tuple[int, Scalar], ...]

    @classmethod
    def from_terms(cls, terms) -> "LinearCombination":
        acc: dict[int, int] = {}
        for index, coeff in terms:
            value = coeff.value if isinstance(coeff, Scalar) else int(coeff) % CURVE_ORDER
            acc[index] = (acc.get(index, 0) + value) % CURVE_ORDER
        return cls(tuple((i, Scalar(v)) for i, v in sorted(acc.items()) if v))

    def evaluate(self, assignments: tuple[Scalar, ...]) -> Scalar:
        total = 0
        for index, coeff in self.terms:
            total += coeff.value * assignments[index].value
        return Scalar(total)


@dataclass(frozen=True)
class ConstraintSystem:
    """R1CS: every satisfying witness w obeys (A.w) * (B.w) = (C.w) per row."""

    constraints: tuple[tuple[LinearCombination, LinearCombination, LinearCombination], ...]
    num_public: int
    num_variables: int
    bit_width: int

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def public_wire_indices(self) -> range:
        return range(1, self.num_public + 1)


@dataclass(frozen=True)
class AgeStatement:
    """Public inputs, in the pinned order (currentYear, threshold, saltSquared)."""

    current_year: Scalar
    threshold: Scalar
    salt_squared: Scalar

    def to_public_inputs(self) -> list[Scalar]:
        return [self.current_year, self.threshold, self.salt_squared]


@dataclass(frozen=True)
class AgeSecrets:
    """Private attributes: birth year and the per-proof blinding salt."""

    birth_year: Scalar
    salt: Scalar

    def __post_init__(self):
        if self.salt.is_zero():
            raise ValueError("salt must be nonzero")


@dataclass(frozen=True)
class WitnessVector:
    """Full wire assignment, index-aligned with the constraint system."""

    assignments: tuple[Scalar, ...]

    def __len__(self) -> int:
        return len(self.assignments)

    def public_inputs(self, num_public: int) -> list[Scalar]:
        return list(self.assignments[1:num_public + 1])


def build_age_circuit(bit_width: int = DEFAULT_BIT_WIDTH) -> ConstraintSystem:
    """Emit the eligibility R1CS for the given range-check width."""
    if not isinstance(bit_width, int) or not MIN_BIT_WIDTH <= bit_width <= MAX_BIT_WIDTH:
        raise InvalidBitWidth(f"bit width must be in [{MIN_BIT_WIDTH}, {MAX_BIT_WIDTH}], got {bit_width}")

    lc = LinearCombination.from_terms
    one = Scalar(1)
    constraints = []

    # b_i * b_i = b_i forces each decomposition wire to be boolean.
    for i in range(bit_width):
        wire = WIRE_FIRST_BIT + i
        bit = lc([(wire, one)])
        constraints.append((bit, bit, bit))

    # (sum 2^i b_i) * 1 = currentYear - birthYear - threshold
    recomposition = lc(
        [(WIRE_FIRST_BIT + i, Scalar(1 << i)) for i in range(bit_width)]
    )
    difference = lc(
        [
            (WIRE_CURRENT_YEAR, one),
            (WIRE_BIRTH_YEAR, Scalar(-1)),
            (WIRE_THRESHOLD, Scalar(-1)),
        ]
    )
    constraints.append((recomposition, lc([(WIRE_ONE, one)]), difference))

    # salt * salt = saltSquared
    salt = lc([(WIRE_SALT, one)])
    constraints.append((salt, salt, lc([(WIRE_SALT_SQUARED, one)])))

    return ConstraintSystem(
        constraints=tuple(constraints),
        num_public=NUM_PUBLIC_INPUTS,
        num_variables=WIRE_FIRST_BIT + bit_width,
        bit_width=bit_width,
    )


def synthesize_witness(
    cs: ConstraintSystem, statement: AgeStatement, secrets: AgeSecrets
) -> WitnessVector:
    """Derive the full wire assignment from the statement and secrets.

    The difference is validated over the integers (calendar interpretation)
    before anything touches the field, so wrap-around can never disguise an
    ineligible identity as an eligible one.
    """
    salt_squared = secrets.salt * secrets.salt
    if salt_squared != statement.salt_squared:
        raise SaltMismatch("public salt square does not match the private salt")

    diff = statement.current_year.value - secrets.birth_year.value - statement.threshold.value
    if diff < 0:
        raise PredicateUnsatisfied(f"age difference {diff} is negative")
    if diff >= (1 << cs.bit_width):
        raise RangeOverflow(f"age difference {diff} does not fit in {cs.bit_width} bits")

    assignments = [Scalar(0)] * cs.num_variables
    assignments[WIRE_ONE] = Scalar(1)
    assignments[WIRE_CURRENT_YEAR] = statement.current_year
    assignments[WIRE_THRESHOLD] = statement.threshold
    assignments[WIRE_SALT_SQUARED] = statement.salt_squared
    assignments[WIRE_BIRTH_YEAR] = secrets.birth_year
    assignments[WIRE_SALT] = secrets.salt
    for i in range(cs.bit_width):
        assignments[WIRE_FIRST_BIT + i] = Scalar((diff >> i) & 1)

    return WitnessVector(tuple(assignments))


def check_witness(cs: ConstraintSystem, witness: WitnessVector) -> bool:
    """Directly evaluate every constraint; the synthesis-independent oracle."""
    if len(witness) != cs.num_variables:
        raise LengthMismatch(
            f"witness has {len(witness)} wires, constraint system expects {cs.num_variables}"
        )
    w = witness.assignments
    for a, b, c in cs.constraints:
        if a.evaluate(w) * b.evaluate(w) != c.evaluate(w):
            return False
    return True


def format_constraints(cs: ConstraintSystem) -> str:
    """Human-readable dump of the constraint system for debugging."""
    lines = [
        f"constraints={cs.num_constraints} public={cs.num_public} "
        f"variables={cs.num_variables} bit_width={cs.bit_width}",
    ]
    for row, (a, b, c) in enumerate(cs.constraints):
        lines.append(f"[{row}] ({_format_lc(a)}) * ({_format_lc(b)}) = ({_format_lc(c)})")
    return "\n".join(lines)


def _format_lc(lc: LinearCombination) -> str:
    if not lc.terms:
        return "0"
    return " + ".join(f"{coeff.value}*w{index}" for index, coeff in lc.terms)
