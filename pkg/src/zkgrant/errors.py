"""Exception hierarchy shared across the package.

Every error raised by zkgrant derives from ZkGrantError so callers can
catch the whole family at once (the CLI maps them to exit code 4).
"""


class ZkGrantError(Exception):
    """Base class for all zkgrant errors."""


# --- algebra ---------------------------------------------------------------

class InversionOfZero(ZkGrantError):
    """Multiplicative inverse of the zero scalar was requested."""


class MalformedEncoding(ZkGrantError):
    """Byte string does not decode to a valid group element or proof."""


# --- circuit ---------------------------------------------------------------

class InvalidBitWidth(ZkGrantError):
    """Range-check width outside the supported 1..64 interval."""


class PredicateUnsatisfied(ZkGrantError):
    """Age difference is negative: the eligibility predicate does not hold."""


class RangeOverflow(ZkGrantError):
    """Age difference does not fit in the circuit's bit decomposition."""


class SaltMismatch(ZkGrantError):
    """Public salt square does not equal the square of the private salt."""


class LengthMismatch(ZkGrantError):
    """Witness vector length differs from the constraint system wire count."""


# --- groth16 ---------------------------------------------------------------

class DegenerateSystem(ZkGrantError):
    """Trusted setup invoked on a constraint system with no constraints."""


class UnsatisfiedWitness(ZkGrantError):
    """Prover invoked on a witness that fails the constraint system."""


class InputLengthMismatch(ZkGrantError):
    """Public input vector length disagrees with the verifying key."""


class MalformedProof(MalformedEncoding):
    """Proof bytes have the wrong length or contain invalid group elements."""


# --- registry --------------------------------------------------------------

class InvalidProof(ZkGrantError):
    """Proof failed on-registry verification; no state was changed."""


class InvalidDuration(ZkGrantError):
    """Grant duration must be strictly positive."""


class StaleStatement(ZkGrantError):
    """Proof was generated for a calendar year outside the accepted window."""


class NoActiveGrant(ZkGrantError):
    """Revocation requested but no record exists for (subject, scope)."""


# --- chainsim --------------------------------------------------------------

class NegativeTimeStep(ZkGrantError):
    """Chain time can only move forward."""


# --- vault -----------------------------------------------------------------

class WeakPassphrase(ZkGrantError):
    """Passphrase shorter than the required minimum length."""


class IoFailure(ZkGrantError):
    """Vault file could not be read or written."""


class AuthenticationFailure(ZkGrantError):
    """Wrong passphrase or tampered vault ciphertext."""


class UnknownAttribute(ZkGrantError):
    """Requested attribute is not stored in the vault."""


class InvalidAttributeValue(ZkGrantError):
    """Attribute value violates its validation rule."""


class EntropyUnavailable(ZkGrantError):
    """The configured randomness source could not produce bytes."""


class VaultLocked(ZkGrantError):
    """Another process holds the advisory lock on the vault file."""


# --- cli -------------------------------------------------------------------

class ParseError(ZkGrantError):
    """Scenario script (or CLI input) could not be parsed."""


class ExpectationFailed(ZkGrantError):
    """A scenario `expect` step did not hold.

    Carries the zero-based index of the failing step for diagnostics.
    """

    def __init__(self, step_index: int, message: str):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index
