"""Access registry state machine: grant, validate, revoke.

Grants are minted only after on-registry proof verification and live until
they expire or their subject revokes them.  Validation afterwards is a pure
map lookup plus one timestamp comparison: the whole point of the design is
that consumers never re-run cryptography.

Two deliberate faithfulness notes:

* Proofs are not bound to the caller address, so a mempool observer could
  replay someone else's proof for themselves.  Binding to the sender is a
  known extension and is intentionally out of scope here.
* Revocation is strictly self-service; there is no administrative path.
"""

from __future__ import annotations

import datetime
import hashlib
from dataclasses import dataclass, field

from .algebra import Scalar
from .errors import InvalidDuration, InvalidProof, NoActiveGrant, StaleStatement
from .groth16 import Proof, VerifyingKey, verify

SUBJECT_LENGTH = 20  # account address bytes
SCOPE_LENGTH = 32    # opaque verifier/dApp identifier bytes


@dataclass(frozen=True)
class AccessRecord:
    """One live consent grant for a (subject, scope) pair."""

    subject: bytes
    scope: bytes
    granted_at: int
    expires_at: int
    statement_digest: bytes

    def __post_init__(self):
        if len(self.subject) != SUBJECT_LENGTH:
            raise ValueError(f"subject must be {SUBJECT_LENGTH} bytes")
        if len(self.scope) != SCOPE_LENGTH:
            raise ValueError(f"scope must be {SCOPE_LENGTH} bytes")
        if self.expires_at <= self.granted_at:
            raise ValueError("expiry must lie strictly after the grant time")


@dataclass
class RegistryState:
    """Registry storage; the verifying key is fixed at deployment."""

    verifying_key: VerifyingKey
    records: dict[tuple[bytes, bytes], AccessRecord] = field(default_factory=dict)


def statement_digest(public_inputs: list[Scalar]) -> bytes:
    """256-bit digest of the concatenated 32-byte public-input encodings.

    Audit metadata only; nothing validates against it at lookup time.
    """
    blob = b"".join(x.value.to_bytes(32, "big") for x in public_inputs)
    return hashlib.sha3_256(blob).digest()


def calendar_year(timestamp: int) -> int:
    """UTC calendar year for an epoch timestamp."""
    return datetime.datetime.fromtimestamp(timestamp, tz=datetime.timezone.utc).year


def grant_access(
    state: RegistryState,
    caller: bytes,
    scope: bytes,
    proof: Proof,
    public_inputs: list[Scalar],
    duration_seconds: int,
    now: int,
) -> AccessRecord:
    """Verify the proof and mint (or renew) the caller's record for the scope.

    A failed verification raises InvalidProof and leaves storage untouched.
    The statement's public currentYear must equal the registry's own calendar
    year derived from `now`; this is the minimal freshness rule preventing a
    proof generated under an old year from being replayed forever.
    """
    if duration_seconds <= 0:
        raise InvalidDuration(f"duration must be positive, got {duration_seconds}")
    if not public_inputs or public_inputs[0].value != calendar_year(now):
        raise StaleStatement(
            f"statement year {public_inputs[0].value if public_inputs else '<missing>'} "
            f"is outside the accepted window (registry year {calendar_year(now)})"
        )
    if not verify(state.verifying_key, public_inputs, proof):
        raise InvalidProof("proof verification failed; no record minted")

    record = AccessRecord(
        subject=caller,
        scope=scope,
        granted_at=now,
        expires_at=now + duration_seconds,
        statement_digest=statement_digest(public_inputs),
    )
    state.records[(caller, scope)] = record
    return record


def validate_access(state: RegistryState, subject: bytes, scope: bytes, now: int) -> bool:
    """Constant-time validity lookup; performs no cryptography whatsoever.

    The expiry boundary is exclusive: a record is dead at now == expires_at.
    """
    record = state.records.get((subject, scope))
    return record is not None and now < record.expires_at


def revoke_access(state: RegistryState, caller: bytes, scope: bytes) -> None:
    """Delete the caller's own record, ending the grant immediately.

    Only the subject can remove their record because the storage key is
    derived from the caller itself.
    """
    try:
        del state.records[(caller, scope)]
    except KeyError:
        raise NoActiveGrant(f"no active grant for scope {scope.hex()[:16]}...") from None
