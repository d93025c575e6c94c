"""zkgrant: zero-knowledge age eligibility with a revocable on-chain grant model.

A user proves `currentYear - birthYear >= threshold` with a Groth16 proof
over BN254 without revealing the birth year, a simulated registry contract
verifies the proof once and mints a time-limited access record, and every
later check is a plain lookup.  The user can revoke the record at any time.

Submodules: `algebra` (curve and pairing), `circuit` (eligibility R1CS),
`groth16` (setup/prove/verify), `registry` (grant state machine),
`chainsim` (ledger and gas model), `vault` (encrypted attribute store),
`cli` (command-line orchestration).
"""

from .algebra import (
    CURVE_ORDER,
    FIELD_MODULUS,
    G1Point,
    G2Point,
    Scalar,
    TargetElement,
    pairing,
)
from .circuit import AgeSecrets, AgeStatement, build_age_circuit, synthesize_witness
from .errors import ZkGrantError
from .groth16 import Proof, ProvingKey, VerifyingKey, prove, setup, verify
from .registry import AccessRecord, RegistryState
from .vault import Vault, generate_salt

__version__ = "0.1.0"

__all__ = [
    "AccessRecord",
    "AgeSecrets",
    "AgeStatement",
    "CURVE_ORDER",
    "FIELD_MODULUS",
    "G1Point",
    "G2Point",
    "Proof",
    "ProvingKey",
    "RegistryState",
    "Scalar",
    "TargetElement",
    "Vault",
    "VerifyingKey",
    "ZkGrantError",
    "__version__",
    "build_age_circuit",
    "generate_salt",
    "pairing",
    "prove",
    "setup",
    "synthesize_witness",
    "verify",
]
