"""Groth16 proving system over an arbitrary constraint system.

Pipeline: a deterministic seeded setup converts the R1CS into a quadratic
arithmetic program by interpolating the constraint matrices over the
smallest power-of-two root-of-unity domain covering the constraint count,
then emits the structured reference string.  Interpolation is the naive
O(n^2) reference path, which is plenty at desk scale (<= 64 constraints).

The seeded setup exists so tests and benchmarks are reproducible.  A real
deployment must replace it with a multi-party ceremony: whoever knows the
toxic scalars sampled here can forge proofs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from weakref import WeakKeyDictionary

from . import algebra
from .algebra import (
    CURVE_ORDER,
    G1Point,
    G2Point,
    Scalar,
    decode_point,
    encode_point,
    g1_generator,
    g2_generator,
    multi_scalar_mul,
    root_of_unity,
)
from .circuit import ConstraintSystem, WitnessVector, check_witness
from .errors import (
    DegenerateSystem,
    InputLengthMismatch,
    MalformedEncoding,
    MalformedProof,
    UnsatisfiedWitness,
)

PROOF_LENGTH = 256  # A (64) || B (128) || C (64), uncompressed calldata layout


class ScalarStream:
    """Deterministic stream of uniform nonzero scalars keyed by a seed.

    SHA-256 in counter mode; 64 bytes are drawn per scalar so the modular
    bias is negligible.  Used for reproducible setups and seeded CLI runs.
    """

    def __init__(self, seed: bytes, label: bytes = b"zkgrant.scalars"):
        if not seed:
            raise ValueError("seed must be nonempty")
        self._seed = bytes(seed)
        self._label = bytes(label)
        self._counter = 0

    def next_scalar(self) -> Scalar:
        while True:
            chunk = b""
            for half in (b"\x00", b"\x01"):
                chunk += hashlib.sha256(
                    self._label + half + self._counter.to_bytes(8, "big") + self._seed
                ).digest()
            self._counter += 1
            value = int.from_bytes(chunk, "big") % CURVE_ORDER
            if value:
                return Scalar(value)


@dataclass(frozen=True)
class ProvingKey:
    """Prover side of the structured reference string."""

    alpha_g1: G1Point
    beta_g1: G1Point
    delta_g1: G1Point
    beta_g2: G2Point
    delta_g2: G2Point
    a_query: tuple[G1Point, ...]      # [A_m(tau)] per wire
    b_g1_query: tuple[G1Point, ...]   # [B_m(tau)] per wire, G1 copy
    b_g2_query: tuple[G2Point, ...]   # [B_m(tau)] per wire
    k_query: tuple[G1Point, ...]      # private-wire terms (beta*A + alpha*B + C)/delta
    h_query: tuple[G1Point, ...]      # tau^i * Z(tau) / delta for the quotient
    domain_size: int
    num_public: int


@dataclass(frozen=True)
class VerifyingKey:
    """Verifier constants; ic has one entry per public input plus the constant."""

    alpha_g1: G1Point
    beta_g2: G2Point
    gamma_g2: G2Point
    delta_g2: G2Point
    ic: tuple[G1Point, ...]


@dataclass(frozen=True)
class Proof:
    a: G1Point
    b: G2Point
    c: G1Point


# ---------------------------------------------------------------------------
# Setup
# ---------------------------------------------------------------------------

def evaluation_domain_size(cs: ConstraintSystem) -> int:
    """Smallest power of two that covers the constraint count."""
    n = max(1, cs.num_constraints)
    return 1 << (n - 1).bit_length()


def setup(cs: ConstraintSystem, seed: bytes) -> tuple[ProvingKey, VerifyingKey]:
    """Run the (single-party, seed-deterministic) trusted setup.

    The toxic scalars live only in this frame and are discarded on return.
    """
    if cs.num_constraints == 0:
        raise DegenerateSystem("cannot set up a system with zero constraints")

    stream = ScalarStream(seed)
    domain = evaluation_domain_size(cs)

    tau = stream.next_scalar().value
    while pow(tau, domain, CURVE_ORDER) == 1:
        # tau inside the evaluation domain would zero the vanishing polynomial
        tau = stream.next_scalar().value
    alpha = stream.next_scalar().value
    beta = stream.next_scalar().value
    gamma = stream.next_scalar().value
    delta = stream.next_scalar().value

    omega = root_of_unity(domain).value
    z_tau = (pow(tau, domain, CURVE_ORDER) - 1) % CURVE_ORDER

    # Lagrange basis at tau over the root-of-unity domain:
    #   L_i(tau) = Z(tau) * w^i / (domain * (tau - w^i))
    inv_domain = pow(domain, -1, CURVE_ORDER)
    lagrange = []
    point = 1
    for _ in range(domain):
        lagrange.append(
            z_tau * point % CURVE_ORDER
            * pow((tau - point) % CURVE_ORDER, -1, CURVE_ORDER) % CURVE_ORDER
            * inv_domain % CURVE_ORDER
        )
        point = point * omega % CURVE_ORDER

    # Per-wire polynomial evaluations A_m(tau), B_m(tau), C_m(tau).
    a_tau = [0] * cs.num_variables
    b_tau = [0] * cs.num_variables
    c_tau = [0] * cs.num_variables
    for row, (a, b, c) in enumerate(cs.constraints):
        basis = lagrange[row]
        for index, coeff in a.terms:
            a_tau[index] = (a_tau[index] + coeff.value * basis) % CURVE_ORDER
        for index, coeff in b.terms:
            b_tau[index] = (b_tau[index] + coeff.value * basis) % CURVE_ORDER
        for index, coeff in c.terms:
            c_tau[index] = (c_tau[index] + coeff.value * basis) % CURVE_ORDER

    g1 = g1_generator()
    g2 = g2_generator()
    inv_gamma = pow(gamma, -1, CURVE_ORDER)
    inv_delta = pow(delta, -1, CURVE_ORDER)

    def combined(m: int) -> int:
        return (beta * a_tau[m] + alpha * b_tau[m] + c_tau[m]) % CURVE_ORDER

    a_query = tuple(algebra.group_mul(g1, a_tau[m]) for m in range(cs.num_variables))
    b_g1_query = tuple(algebra.group_mul(g1, b_tau[m]) for m in range(cs.num_variables))
    b_g2_query = tuple(algebra.group_mul(g2, b_tau[m]) for m in range(cs.num_variables))

    ic = tuple(
        algebra.group_mul(g1, combined(m) * inv_gamma % CURVE_ORDER)
        for m in range(cs.num_public + 1)
    )
    k_query = tuple(
        algebra.group_mul(g1, combined(m) * inv_delta % CURVE_ORDER)
        for m in range(cs.num_public + 1, cs.num_variables)
    )

    tau_power = 1
    h_query = []
    for _ in range(domain - 1):
        h_query.append(algebra.group_mul(g1, tau_power * z_tau % CURVE_ORDER * inv_delta % CURVE_ORDER))
        tau_power = tau_power * tau % CURVE_ORDER

    pk = ProvingKey(
        alpha_g1=algebra.group_mul(g1, alpha),
        beta_g1=algebra.group_mul(g1, beta),
        delta_g1=algebra.group_mul(g1, delta),
        beta_g2=algebra.group_mul(g2, beta),
        delta_g2=algebra.group_mul(g2, delta),
        a_query=a_query,
        b_g1_query=b_g1_query,
        b_g2_query=b_g2_query,
        k_query=k_query,
        h_query=tuple(h_query),
        domain_size=domain,
        num_public=cs.num_public,
    )
    vk = VerifyingKey(
        alpha_g1=pk.alpha_g1,
        beta_g2=pk.beta_g2,
        gamma_g2=algebra.group_mul(g2, gamma),
        delta_g2=pk.delta_g2,
        ic=ic,
    )
    return pk, vk


# ---------------------------------------------------------------------------
# Prover
# ---------------------------------------------------------------------------

def _inverse_dft(values: list[int], domain: int) -> list[int]:
    """Coefficients of the unique degree-<domain polynomial with the given
    values on the root-of-unity domain.  Naive O(n^2) reference path."""
    omega_inv = pow(root_of_unity(domain).value, -1, CURVE_ORDER)
    inv_n = pow(domain, -1, CURVE_ORDER)
    coeffs = []
    for j in range(domain):
        w = pow(omega_inv, j, CURVE_ORDER)
        acc = 0
        point = 1
        for value in values:
            acc += value * point
            point = point * w % CURVE_ORDER
        coeffs.append(acc % CURVE_ORDER * inv_n % CURVE_ORDER)
    return coeffs


def _quotient_coefficients(a: list[int], b: list[int], c: list[int], domain: int) -> list[int]:
    """H(X) = (A(X)B(X) - C(X)) / (X^domain - 1), which must divide exactly."""
    product = [0] * (2 * domain - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            product[i + j] = (product[i + j] + ai * bj) % CURVE_ORDER
    for i, ci in enumerate(c):
        product[i] = (product[i] - ci) % CURVE_ORDER

    quotient = [0] * (domain - 1)
    for k in range(len(product) - 1, domain - 1, -1):
        top = product[k]
        if top:
            quotient[k - domain] = top
            product[k - domain] = (product[k - domain] + top) % CURVE_ORDER
            product[k] = 0
    if any(product):
        raise UnsatisfiedWitness("constraint polynomial is not divisible by the vanishing polynomial")
    return quotient


def prove(
    pk: ProvingKey,
    cs: ConstraintSystem,
    witness: WitnessVector,
    randomness: tuple[Scalar, Scalar],
) -> Proof:
    """Produce a proof; the blinding pair (r, s) re-randomizes A and B."""
    if not check_witness(cs, witness):
        raise UnsatisfiedWitness("witness does not satisfy the constraint system")

    r, s = randomness
    w = [a.value for a in witness.assignments]
    domain = pk.domain_size

    a_rows = []
    b_rows = []
    c_rows = []
    for a, b, c in cs.constraints:
        a_rows.append(sum(coeff.value * w[i] for i, coeff in a.terms) % CURVE_ORDER)
        b_rows.append(sum(coeff.value * w[i] for i, coeff in b.terms) % CURVE_ORDER)
        c_rows.append(sum(coeff.value * w[i] for i, coeff in c.terms) % CURVE_ORDER)
    pad = [0] * (domain - len(a_rows))
    a_coeffs = _inverse_dft(a_rows + pad, domain)
    b_coeffs = _inverse_dft(b_rows + pad, domain)
    c_coeffs = _inverse_dft(c_rows + pad, domain)
    h_coeffs = _quotient_coefficients(a_coeffs, b_coeffs, c_coeffs, domain)

    proof_a = multi_scalar_mul(
        pk.a_query + (pk.alpha_g1, pk.delta_g1),
        w + [1, r.value],
    )
    proof_b = multi_scalar_mul(
        pk.b_g2_query + (pk.beta_g2, pk.delta_g2),
        w + [1, s.value],
    )
    b_in_g1 = multi_scalar_mul(
        pk.b_g1_query + (pk.beta_g1, pk.delta_g1),
        w + [1, s.value],
    )

    private = w[pk.num_public + 1:]
    c_points = list(pk.k_query) + list(pk.h_query) + [proof_a, b_in_g1, pk.delta_g1]
    c_scalars = private + h_coeffs + [s.value, r.value, -r.value * s.value % CURVE_ORDER]
    proof_c = multi_scalar_mul(c_points, c_scalars)

    return Proof(a=proof_a, b=proof_b, c=proof_c)


# ---------------------------------------------------------------------------
# Verifier
# ---------------------------------------------------------------------------

# Miller value of e(-alpha, beta) per verifying key; derived data, cached so
# repeated verifications pay for one pairing less.
_ALPHA_BETA_CACHE: WeakKeyDictionary = WeakKeyDictionary()


def _miller_of(p: G1Point, q: G2Point):
    import gmpy2

    return algebra._miller(
        (gmpy2.mpz(q.x[0]), gmpy2.mpz(q.x[1])),
        (gmpy2.mpz(q.y[0]), gmpy2.mpz(q.y[1])),
        gmpy2.mpz(p.x),
        gmpy2.mpz(p.y),
    )


def verify(vk: VerifyingKey, public_inputs: list[Scalar], proof: Proof) -> bool:
    """Check the pairing-product equation e(A,B) = e(alpha,beta) e(L,gamma) e(C,delta)."""
    if len(public_inputs) != len(vk.ic) - 1:
        raise InputLengthMismatch(
            f"expected {len(vk.ic) - 1} public inputs, got {len(public_inputs)}"
        )

    linear = multi_scalar_mul(vk.ic, [1] + [x.value for x in public_inputs])

    cached = _ALPHA_BETA_CACHE.get(vk)
    if cached is None:
        neg_alpha = algebra.group_neg(vk.alpha_g1)
        cached = _miller_of(neg_alpha, vk.beta_g2)
        _ALPHA_BETA_CACHE[vk] = cached

    # e(A,B) * e(-alpha,beta) * e(-L,gamma) * e(-C,delta) must be 1.
    f = cached
    for p, q in (
        (proof.a, proof.b),
        (algebra.group_neg(linear), vk.gamma_g2),
        (algebra.group_neg(proof.c), vk.delta_g2),
    ):
        if p.infinity or q.infinity:
            continue
        f = algebra._f12_mul(f, _miller_of(p, q))
    return algebra._final_exp(f) == algebra._F12_ONE


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def serialize_proof(proof: Proof) -> bytes:
    """Fixed 256-byte calldata layout: A || B || C."""
    return encode_point(proof.a) + encode_point(proof.b) + encode_point(proof.c)


def deserialize_proof(data: bytes) -> Proof:
    """Parse and validate a 256-byte proof; every element is subgroup-checked."""
    if len(data) != PROOF_LENGTH:
        raise MalformedProof(f"proof must be {PROOF_LENGTH} bytes, got {len(data)}")
    try:
        a = decode_point(data[0:64])
        b = decode_point(data[64:192])
        c = decode_point(data[192:256])
    except MalformedEncoding as exc:
        raise MalformedProof(str(exc)) from exc
    return Proof(a=a, b=b, c=c)


_VK_HEADER = "zkgrant verifying key v1"
_PK_HEADER = "zkgrant proving key v1"


def export_vk(vk: VerifyingKey) -> str:
    """Hex text document with a pinned field order."""
    lines = [
        _VK_HEADER,
        f"alpha_g1 {encode_point(vk.alpha_g1).hex()}",
        f"beta_g2 {encode_point(vk.beta_g2).hex()}",
        f"gamma_g2 {encode_point(vk.gamma_g2).hex()}",
        f"delta_g2 {encode_point(vk.delta_g2).hex()}",
        f"ic {len(vk.ic)}",
    ]
    lines.extend(f"ic[{i}] {encode_point(p).hex()}" for i, p in enumerate(vk.ic))
    return "\n".join(lines) + "\n"


def _parse_lines(text: str, header: str) -> list[str]:
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines or lines[0] != header:
        raise MalformedEncoding(f"missing {header!r} header")
    return lines[1:]


def _take_point(lines: list[str], index: int, name: str):
    try:
        key, value = lines[index].split(maxsplit=1)
    except (IndexError, ValueError) as exc:
        raise MalformedEncoding(f"truncated document at field {name!r}") from exc
    if key != name:
        raise MalformedEncoding(f"expected field {name!r}, found {key!r}")
    try:
        raw = bytes.fromhex(value)
    except ValueError as exc:
        raise MalformedEncoding(f"field {name!r} is not valid hex") from exc
    return decode_point(raw)


def import_vk(text: str) -> VerifyingKey:
    """Parse export_vk output; all points are re-validated on import."""
    lines = _parse_lines(text, _VK_HEADER)
    alpha_g1 = _take_point(lines, 0, "alpha_g1")
    beta_g2 = _take_point(lines, 1, "beta_g2")
    gamma_g2 = _take_point(lines, 2, "gamma_g2")
    delta_g2 = _take_point(lines, 3, "delta_g2")
    try:
        count = int(lines[4].split()[1])
    except (IndexError, ValueError) as exc:
        raise MalformedEncoding("missing ic count") from exc
    ic = tuple(_take_point(lines, 5 + i, f"ic[{i}]") for i in range(count))
    if len(ic) < 1:
        raise MalformedEncoding("ic must contain at least the constant term")
    return VerifyingKey(alpha_g1=alpha_g1, beta_g2=beta_g2, gamma_g2=gamma_g2, delta_g2=delta_g2, ic=ic)


def export_pk(pk: ProvingKey) -> str:
    """Hex text document for the proving key (CLI persistence format)."""
    lines = [
        _PK_HEADER,
        f"domain_size {pk.domain_size}",
        f"num_public {pk.num_public}",
        f"alpha_g1 {encode_point(pk.alpha_g1).hex()}",
        f"beta_g1 {encode_point(pk.beta_g1).hex()}",
        f"delta_g1 {encode_point(pk.delta_g1).hex()}",
        f"beta_g2 {encode_point(pk.beta_g2).hex()}",
        f"delta_g2 {encode_point(pk.delta_g2).hex()}",
    ]
    for name in ("a_query", "b_g1_query", "b_g2_query", "k_query", "h_query"):
        vector = getattr(pk, name)
        lines.append(f"{name} {len(vector)}")
        lines.extend(f"{name}[{i}] {encode_point(p).hex()}" for i, p in enumerate(vector))
    return "\n".join(lines) + "\n"


def import_pk(text: str) -> ProvingKey:
    lines = _parse_lines(text, _PK_HEADER)
    try:
        domain_size = int(lines[0].split()[1])
        num_public = int(lines[1].split()[1])
    except (IndexError, ValueError) as exc:
        raise MalformedEncoding("missing proving key dimensions") from exc
    fields = {}
    cursor = 2
    for name in ("alpha_g1", "beta_g1", "delta_g1", "beta_g2", "delta_g2"):
        fields[name] = _take_point(lines, cursor, name)
        cursor += 1
    vectors = {}
    for name in ("a_query", "b_g1_query", "b_g2_query", "k_query", "h_query"):
        try:
            count = int(lines[cursor].split()[1])
        except (IndexError, ValueError) as exc:
            raise MalformedEncoding(f"missing {name} count") from exc
        cursor += 1
        vectors[name] = tuple(_take_point(lines, cursor + i, f"{name}[{i}]") for i in range(count))
        cursor += count
    return ProvingKey(
        alpha_g1=fields["alpha_g1"],
        beta_g1=fields["beta_g1"],
        delta_g1=fields["delta_g1"],
        beta_g2=fields["beta_g2"],
        delta_g2=fields["delta_g2"],
        a_query=vectors["a_query"],
        b_g1_query=vectors["b_g1_query"],
        b_g2_query=vectors["b_g2_query"],
        k_query=vectors["k_query"],
        h_query=vectors["h_query"],
        domain_size=domain_size,
        num_public=num_public,
    )
