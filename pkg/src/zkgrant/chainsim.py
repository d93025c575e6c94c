"""Deterministic single-writer ledger with an EVM-style gas model.

Transactions are applied strictly in order, one block each; there is no
mempool and no reordering.  Gas is metered with the post-Istanbul precompile
prices (pairing 45,000 + 34,000 per pair, scalar mul 6,000, point add 150),
the only schedule whose magnitudes are consistent with the published
~240k-gas figure for a proof-carrying grant.  Failed transactions still pay
for the work performed before the failure, mirroring real chain behavior.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import mean

from .algebra import Scalar
from .errors import (
    InvalidDuration,
    InvalidProof,
    NegativeTimeStep,
    NoActiveGrant,
    StaleStatement,
)
from .groth16 import PROOF_LENGTH, Proof
from .registry import (
    SCOPE_LENGTH,
    SUBJECT_LENGTH,
    RegistryState,
    calendar_year,
    grant_access,
    revoke_access,
)

# Gas schedule (post-Istanbul precompile repricing).
INTRINSIC_GAS = 21_000
CALLDATA_GAS_PER_BYTE = 16          # zero bytes would cost 4; the model
                                    # conservatively treats all bytes as nonzero
PAIRING_BASE_GAS = 45_000
PAIRING_PER_PAIR_GAS = 34_000
PAIRING_PAIRS = 4                   # the Groth16 product check uses 4 pairings
SCALAR_MUL_GAS = 6_000
POINT_ADD_GAS = 150
STORAGE_SLOT_GAS = 20_000
RECORD_STORAGE_SLOTS = 2
STORAGE_CLEAR_GAS = 5_000           # per slot freed by a revoke
OVERHEAD_GAS = 3_500                # dispatch, events, memory expansion

SELECTOR_BYTES = 4
WORD_BYTES = 32

# Published reference economics the model is calibrated against.
REFERENCE_GRANT_GAS = 240_512
REFERENCE_GAS_PRICE_GWEI = 20.0
REFERENCE_ETH_USD = 3_000.0
REFERENCE_SESSION_USD = 15.00
REFERENCE_L2_MAX_USD = 0.50

DEFAULT_L2_DISCOUNT = 1.0 / 40.0


@dataclass(frozen=True)
class GasReceipt:
    """Itemized gas accounting for one transaction."""

    tx_kind: str  # "grant" | "revoke"
    intrinsic_gas: int
    calldata_gas: int
    pairing_gas: int
    multi_exp_gas: int
    storage_gas: int
    overhead_gas: int
    total_gas: int
    success: bool
    error: str | None = None

    def __post_init__(self):
        components = (
            self.intrinsic_gas,
            self.calldata_gas,
            self.pairing_gas,
            self.multi_exp_gas,
            self.storage_gas,
            self.overhead_gas,
        )
        if any(c < 0 for c in components):
            raise ValueError("gas components must be non-negative")
        if self.total_gas != sum(components):
            raise ValueError("total gas must equal the sum of its components")


@dataclass(frozen=True)
class CostQuote:
    """Fiat cost of a gas amount under explicit price assumptions."""

    gas: int
    gas_price_gwei: float
    eth_usd: float
    usd: float
    layer: str  # "L1" | "L2"
    layer_factor: float


@dataclass(frozen=True)
class GrantTx:
    caller: bytes
    scope: bytes
    proof: Proof
    public_inputs: tuple[Scalar, ...]
    duration_seconds: int

    def __post_init__(self):
        if len(self.caller) != SUBJECT_LENGTH:
            raise ValueError(f"caller must be {SUBJECT_LENGTH} bytes")
        if len(self.scope) != SCOPE_LENGTH:
            raise ValueError(f"scope must be {SCOPE_LENGTH} bytes")
        object.__setattr__(self, "public_inputs", tuple(self.public_inputs))


@dataclass(frozen=True)
class RevokeTx:
    caller: bytes
    scope: bytes

    def __post_init__(self):
        if len(self.caller) != SUBJECT_LENGTH:
            raise ValueError(f"caller must be {SUBJECT_LENGTH} bytes")
        if len(self.scope) != SCOPE_LENGTH:
            raise ValueError(f"scope must be {SCOPE_LENGTH} bytes")


@dataclass
class ChainState:
    """Simulated ledger: registry plus monotone clock, block counter, receipts."""

    registry: RegistryState
    timestamp: int
    block_number: int = 0
    receipts: list[GasReceipt] = field(default_factory=list)


def _grant_calldata_bytes(n_public_inputs: int) -> int:
    return (
        SELECTOR_BYTES
        + PROOF_LENGTH
        + WORD_BYTES * n_public_inputs
        + WORD_BYTES  # duration argument
        + WORD_BYTES  # scope argument
    )


def _verification_gas(n_public_inputs: int) -> tuple[int, int]:
    pairing = PAIRING_BASE_GAS + PAIRING_PAIRS * PAIRING_PER_PAIR_GAS
    multi_exp = n_public_inputs * (SCALAR_MUL_GAS + POINT_ADD_GAS)
    return pairing, multi_exp


def estimate_grant_gas(n_public_inputs: int) -> GasReceipt:
    """Component gas model for a successful proof-carrying grant."""
    if n_public_inputs < 0:
        raise ValueError("public input count must be non-negative")
    pairing, multi_exp = _verification_gas(n_public_inputs)
    calldata = CALLDATA_GAS_PER_BYTE * _grant_calldata_bytes(n_public_inputs)
    storage = RECORD_STORAGE_SLOTS * STORAGE_SLOT_GAS
    total = INTRINSIC_GAS + calldata + pairing + multi_exp + storage + OVERHEAD_GAS
    return GasReceipt(
        tx_kind="grant",
        intrinsic_gas=INTRINSIC_GAS,
        calldata_gas=calldata,
        pairing_gas=pairing,
        multi_exp_gas=multi_exp,
        storage_gas=storage,
        overhead_gas=OVERHEAD_GAS,
        total_gas=total,
        success=True,
    )


def quote_cost(
    gas: int,
    gas_price_gwei: float,
    eth_usd: float,
    layer: str = "L1",
    l2_discount: float = DEFAULT_L2_DISCOUNT,
) -> CostQuote:
    """Convert gas to USD; L2 applies a single calibrated discount factor."""
    if gas < 0 or gas_price_gwei < 0 or eth_usd < 0:
        raise ValueError("gas and prices must be non-negative")
    if layer not in ("L1", "L2"):
        raise ValueError(f"layer must be L1 or L2, got {layer!r}")
    factor = 1.0 if layer == "L1" else l2_discount
    usd = gas * gas_price_gwei * 1e-9 * eth_usd * factor
    return CostQuote(
        gas=gas,
        gas_price_gwei=gas_price_gwei,
        eth_usd=eth_usd,
        usd=usd,
        layer=layer,
        layer_factor=factor,
    )


def submit_tx(state: ChainState, tx: GrantTx | RevokeTx) -> GasReceipt:
    """Apply a transaction atomically and append its receipt.

    Inner registry errors never escape: they are captured in the receipt so
    the chain history stays append-only and deterministic.  Gas is charged
    up to the point of failure; a grant whose proof fails verification still
    pays for the pairing work.
    """
    if isinstance(tx, GrantTx):
        receipt = _apply_grant(state, tx)
    elif isinstance(tx, RevokeTx):
        receipt = _apply_revoke(state, tx)
    else:
        raise TypeError(f"unsupported transaction {type(tx).__name__}")
    state.receipts.append(receipt)
    state.block_number += 1
    return receipt


def _apply_grant(state: ChainState, tx: GrantTx) -> GasReceipt:
    n = len(tx.public_inputs)
    calldata = CALLDATA_GAS_PER_BYTE * _grant_calldata_bytes(n)
    pairing_gas = multi_exp_gas = storage_gas = 0
    success = False
    error = None
    try:
        # Duration and freshness guards fire before any pairing work, the
        # way cheap require() checks precede the precompile call on chain.
        if tx.duration_seconds <= 0:
            raise InvalidDuration(f"duration must be positive, got {tx.duration_seconds}")
        if not tx.public_inputs or tx.public_inputs[0].value != calendar_year(state.timestamp):
            raise StaleStatement("statement year outside the accepted window")
        pairing_gas, multi_exp_gas = _verification_gas(n)
        grant_access(
            state.registry,
            tx.caller,
            tx.scope,
            tx.proof,
            list(tx.public_inputs),
            tx.duration_seconds,
            state.timestamp,
        )
        storage_gas = RECORD_STORAGE_SLOTS * STORAGE_SLOT_GAS
        success = True
    except (InvalidDuration, StaleStatement, InvalidProof) as exc:
        error = f"{type(exc).__name__}: {exc}"
    total = INTRINSIC_GAS + calldata + pairing_gas + multi_exp_gas + storage_gas + OVERHEAD_GAS
    return GasReceipt(
        tx_kind="grant",
        intrinsic_gas=INTRINSIC_GAS,
        calldata_gas=calldata,
        pairing_gas=pairing_gas,
        multi_exp_gas=multi_exp_gas,
        storage_gas=storage_gas,
        overhead_gas=OVERHEAD_GAS,
        total_gas=total,
        success=success,
        error=error,
    )


def _apply_revoke(state: ChainState, tx: RevokeTx) -> GasReceipt:
    calldata = CALLDATA_GAS_PER_BYTE * (SELECTOR_BYTES + WORD_BYTES)
    storage_gas = 0
    success = False
    error = None
    try:
        revoke_access(state.registry, tx.caller, tx.scope)
        storage_gas = RECORD_STORAGE_SLOTS * STORAGE_CLEAR_GAS
        success = True
    except NoActiveGrant as exc:
        error = f"{type(exc).__name__}: {exc}"
    total = INTRINSIC_GAS + calldata + storage_gas + OVERHEAD_GAS
    return GasReceipt(
        tx_kind="revoke",
        intrinsic_gas=INTRINSIC_GAS,
        calldata_gas=calldata,
        pairing_gas=0,
        multi_exp_gas=0,
        storage_gas=storage_gas,
        overhead_gas=OVERHEAD_GAS,
        total_gas=total,
        success=success,
        error=error,
    )


def advance_time(state: ChainState, dt_seconds: int) -> None:
    """Move the chain clock forward; time never runs backwards."""
    if dt_seconds < 0:
        raise NegativeTimeStep(f"time step must be non-negative, got {dt_seconds}")
    state.timestamp += dt_seconds


def format_gas_report(
    receipts: list[GasReceipt],
    gas_price_gwei: float = REFERENCE_GAS_PRICE_GWEI,
    eth_usd: float = REFERENCE_ETH_USD,
) -> str:
    """Per-receipt component table plus summary statistics and fiat quotes."""
    header = (
        f"{'#':>3} {'kind':<7} {'intrinsic':>9} {'calldata':>9} {'pairing':>9} "
        f"{'multiexp':>9} {'storage':>9} {'overhead':>9} {'total':>9} {'ok':>3}"
    )
    lines = [header, "-" * len(header)]
    for i, r in enumerate(receipts):
        lines.append(
            f"{i:>3} {r.tx_kind:<7} {r.intrinsic_gas:>9} {r.calldata_gas:>9} "
            f"{r.pairing_gas:>9} {r.multi_exp_gas:>9} {r.storage_gas:>9} "
            f"{r.overhead_gas:>9} {r.total_gas:>9} {'yes' if r.success else 'no':>3}"
        )
    if receipts:
        totals = [r.total_gas for r in receipts]
        l1 = quote_cost(max(totals), gas_price_gwei, eth_usd, "L1")
        l2 = quote_cost(max(totals), gas_price_gwei, eth_usd, "L2")
        lines.append(
            f"summary: n={len(receipts)} mean={mean(totals):.0f} max={max(totals)} gas; "
            f"max tx at {gas_price_gwei:g} gwei / ${eth_usd:g} ETH: "
            f"${l1.usd:.2f} on L1, ${l2.usd:.2f} on L2"
        )
    else:
        lines.append("summary: no receipts")
    return "\n".join(lines) + "\n"
