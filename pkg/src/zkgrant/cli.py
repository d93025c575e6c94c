"""Command-line entry point wiring the whole grant/verify/revoke flow.

Subcommands:

    vault init|set|get     manage the encrypted attribute store
    setup                  run the seeded trusted setup, write key files
    grant                  prove eligibility and submit a grant transaction
    validate               query a (subject, scope) record on the chain file
    revoke                 submit a revoke transaction
    scenario run FILE      execute a line-oriented lifecycle script
    bench                  latency/gas/cost report with reference figures

Exit codes: 0 success, 2 expectation failure, 3 parse error, 4 module error.

Scenario scripts contain one step per line (# starts a comment):

    set <attribute> <value>
    setup [bit_width]
    grant <scope> <duration_seconds> [threshold]
    validate <scope>
    revoke <scope>
    advance <seconds>
    expect granted | grant-failed | revoked | revoke-failed
    expect valid <scope> | invalid <scope>

`expect` steps make scripts self-checking: the first failing expectation
aborts the run with a step-indexed diagnostic and exit code 2.  With a fixed
--seed, two runs of the same scenario print identical transcripts except for
lines starting with "time:".
"""

from __future__ import annotations

import argparse
import getpass
import hashlib
import json
import math
import os
import secrets
import statistics
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from .algebra import CURVE_ORDER, Scalar
from .chainsim import (
    ChainState,
    CostQuote,
    GasReceipt,
    GrantTx,
    REFERENCE_ETH_USD,
    REFERENCE_GAS_PRICE_GWEI,
    REFERENCE_GRANT_GAS,
    REFERENCE_L2_MAX_USD,
    REFERENCE_SESSION_USD,
    RevokeTx,
    advance_time,
    estimate_grant_gas,
    format_gas_report,
    quote_cost,
    submit_tx,
)
from .circuit import (
    AgeSecrets,
    AgeStatement,
    DEFAULT_BIT_WIDTH,
    build_age_circuit,
    synthesize_witness,
)
from .errors import ExpectationFailed, ParseError, ZkGrantError
from .groth16 import (
    ProvingKey,
    ScalarStream,
    VerifyingKey,
    export_pk,
    export_vk,
    import_pk,
    import_vk,
    prove,
    verify,
)
from .groth16 import setup as groth16_setup
from .registry import AccessRecord, RegistryState, calendar_year, validate_access
from .vault import Vault, generate_salt

DEFAULT_THRESHOLD = 18
DEFAULT_KEYS_DIR = "keys"
DEFAULT_CHAIN_FILE = "chain.json"
DEFAULT_VAULT_FILE = "identity.vault"
REFERENCE_PROVE_MS = 200.0  # published browser-prover figure, for side-by-side display

# Chain genesis used in seeded (deterministic) mode: 2025-01-01T00:00:00Z.
DETERMINISTIC_GENESIS = 1_735_689_600

_DEFAULT_SUBJECT = hashlib.sha3_256(b"zkgrant default subject").digest()[:20]


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems via ParseError (exit 3)."""

    def error(self, message):
        raise ParseError(message)


# ---------------------------------------------------------------------------
# Randomness plan: one switch between reproducible and OS randomness
# ---------------------------------------------------------------------------

class _Randomness:
    def __init__(self, seed_hex: str | None):
        if seed_hex:
            try:
                seed = bytes.fromhex(seed_hex)
            except ValueError as exc:
                raise ParseError(f"--seed must be hex: {exc}") from exc
            if not seed:
                raise ParseError("--seed must be nonempty hex")
            self.seed = seed
            self._salts = ScalarStream(seed, b"zkgrant.salt")
            self._blinds = ScalarStream(seed, b"zkgrant.blind")
        else:
            self.seed = None
            self._salts = None
            self._blinds = None

    @property
    def deterministic(self) -> bool:
        return self.seed is not None

    def setup_seed(self) -> bytes:
        return self.seed if self.seed is not None else secrets.token_bytes(32)

    def salt(self) -> Scalar:
        if self._salts is not None:
            return self._salts.next_scalar()
        return generate_salt()

    def blinding_pair(self) -> tuple[Scalar, Scalar]:
        if self._blinds is not None:
            return self._blinds.next_scalar(), self._blinds.next_scalar()
        return (
            Scalar(secrets.randbelow(CURVE_ORDER - 1) + 1),
            Scalar(secrets.randbelow(CURVE_ORDER - 1) + 1),
        )


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _passphrase(args) -> str:
    if getattr(args, "passphrase", None):
        return args.passphrase
    env = os.environ.get("ZKGRANT_PASSPHRASE")
    if env:
        return env
    return getpass.getpass("vault passphrase: ")


def _scope_id(label: str) -> bytes:
    if len(label) == 64:
        try:
            return bytes.fromhex(label)
        except ValueError:
            pass
    return hashlib.sha3_256(label.encode("utf-8")).digest()


def _subject(args) -> bytes:
    raw = getattr(args, "address", None)
    if not raw:
        return _DEFAULT_SUBJECT
    try:
        subject = bytes.fromhex(raw.removeprefix("0x"))
    except ValueError as exc:
        raise ParseError(f"--address must be hex: {exc}") from exc
    if len(subject) != 20:
        raise ParseError("--address must encode exactly 20 bytes")
    return subject


def _receipt_dict(receipt: GasReceipt) -> dict:
    return asdict(receipt)


def _quote_dict(quote: CostQuote) -> dict:
    return asdict(quote)


# --- chain file persistence --------------------------------------------------

def _save_chain(path: Path, chain: ChainState) -> None:
    doc = {
        "timestamp": chain.timestamp,
        "block_number": chain.block_number,
        "verifying_key": export_vk(chain.registry.verifying_key),
        "records": [
            {
                "subject": record.subject.hex(),
                "scope": record.scope.hex(),
                "granted_at": record.granted_at,
                "expires_at": record.expires_at,
                "statement_digest": record.statement_digest.hex(),
            }
            for record in chain.registry.records.values()
        ],
        "receipts": [_receipt_dict(r) for r in chain.receipts],
    }
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _load_chain(path: Path) -> ChainState | None:
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        chain = ChainState(
            registry=RegistryState(verifying_key=import_vk(doc["verifying_key"])),
            timestamp=int(doc["timestamp"]),
            block_number=int(doc["block_number"]),
        )
        for entry in doc["records"]:
            record = AccessRecord(
                subject=bytes.fromhex(entry["subject"]),
                scope=bytes.fromhex(entry["scope"]),
                granted_at=int(entry["granted_at"]),
                expires_at=int(entry["expires_at"]),
                statement_digest=bytes.fromhex(entry["statement_digest"]),
            )
            chain.registry.records[(record.subject, record.scope)] = record
        chain.receipts.extend(GasReceipt(**r) for r in doc["receipts"])
        return chain
    except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"chain file {path} is corrupt: {exc}") from exc


def _load_keys(keys_dir: Path) -> tuple[ProvingKey, VerifyingKey]:
    try:
        pk_text = (keys_dir / "pk.txt").read_text(encoding="utf-8")
        vk_text = (keys_dir / "vk.txt").read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read key files in {keys_dir}: {exc}") from exc
    return import_pk(pk_text), import_vk(vk_text)


def _prove_grant(
    pk: ProvingKey,
    vault: Vault,
    passphrase: str,
    chain: ChainState,
    rand: _Randomness,
    bit_width: int,
    threshold: int,
):
    """Vault -> witness -> proof for the chain's current calendar year."""
    birth_year = vault.get(passphrase, "birthYear")
    salt = rand.salt()
    statement = AgeStatement(
        current_year=Scalar(calendar_year(chain.timestamp)),
        threshold=Scalar(threshold),
        salt_squared=salt * salt,
    )
    secrets_ = AgeSecrets(birth_year=Scalar(birth_year), salt=salt)
    cs = build_age_circuit(bit_width)
    witness = synthesize_witness(cs, statement, secrets_)
    t0 = time.perf_counter()
    proof = prove(pk, cs, witness, rand.blinding_pair())
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return proof, statement, elapsed_ms


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_vault(args) -> int:
    vault_path = Path(args.vault)
    if args.vault_op == "init":
        Vault.create(vault_path, _passphrase(args))
        print(f"created vault {vault_path}")
        return 0
    vault = Vault(vault_path)
    if args.vault_op == "set":
        value = int(args.value) if args.value.lstrip("-").isdigit() else args.value
        vault.put(_passphrase(args), args.key, value)
        print(f"stored {args.key}")
        return 0
    value = vault.get(_passphrase(args), args.key)
    if args.json:
        print(json.dumps({args.key: value}))
    else:
        print(value)
    return 0


def _cmd_setup(args, rand: _Randomness) -> int:
    cs = build_age_circuit(args.bit_width)
    pk, vk = groth16_setup(cs, rand.setup_seed())
    keys_dir = Path(args.keys_dir)
    keys_dir.mkdir(parents=True, exist_ok=True)
    (keys_dir / "pk.txt").write_text(export_pk(pk), encoding="utf-8")
    (keys_dir / "vk.txt").write_text(export_vk(vk), encoding="utf-8")
    print(
        f"setup complete: {cs.num_constraints} constraints, "
        f"{cs.num_variables} wires, keys in {keys_dir}"
    )
    return 0


def _open_or_create_chain(args, vk: VerifyingKey, rand: _Randomness) -> ChainState:
    chain_path = Path(args.chain)
    chain = _load_chain(chain_path)
    if chain is None:
        genesis = args.genesis_time
        if genesis is None:
            genesis = DETERMINISTIC_GENESIS if rand.deterministic else int(time.time())
        chain = ChainState(registry=RegistryState(verifying_key=vk), timestamp=genesis)
    return chain


def _cmd_grant(args, rand: _Randomness) -> int:
    pk, vk = _load_keys(Path(args.keys_dir))
    chain = _open_or_create_chain(args, vk, rand)
    vault = Vault(Path(args.vault))
    # the age circuit has 6 fixed wires plus one per decomposition bit
    bit_width = len(pk.a_query) - 6
    proof, statement, elapsed_ms = _prove_grant(
        pk, vault, _passphrase(args), chain, rand, bit_width, args.threshold
    )
    tx = GrantTx(
        caller=_subject(args),
        scope=_scope_id(args.scope),
        proof=proof,
        public_inputs=tuple(statement.to_public_inputs()),
        duration_seconds=args.duration,
    )
    receipt = submit_tx(chain, tx)
    _save_chain(Path(args.chain), chain)
    if args.json:
        print(json.dumps({"receipt": _receipt_dict(receipt), "prove_ms": elapsed_ms}))
    else:
        state = "granted" if receipt.success else f"failed ({receipt.error})"
        print(f"grant {args.scope}: {state}, gas={receipt.total_gas}, block={chain.block_number}")
        print(f"time: prove {elapsed_ms:.1f} ms")
    return 0 if receipt.success else 4


def _cmd_validate(args) -> int:
    chain = _load_chain(Path(args.chain))
    valid = chain is not None and validate_access(
        chain.registry, _subject(args), _scope_id(args.scope), chain.timestamp
    )
    if args.json:
        print(json.dumps({"scope": args.scope, "valid": valid}))
    else:
        print(f"{args.scope}: {'valid' if valid else 'invalid'}")
    return 0


def _cmd_revoke(args) -> int:
    chain_path = Path(args.chain)
    chain = _load_chain(chain_path)
    if chain is None:
        raise ParseError(f"chain file {chain_path} does not exist")
    receipt = submit_tx(chain, RevokeTx(caller=_subject(args), scope=_scope_id(args.scope)))
    _save_chain(chain_path, chain)
    if args.json:
        print(json.dumps({"receipt": _receipt_dict(receipt)}))
    else:
        state = "revoked" if receipt.success else f"failed ({receipt.error})"
        print(f"revoke {args.scope}: {state}, gas={receipt.total_gas}")
    return 0 if receipt.success else 4


def _cmd_advance(args) -> int:
    chain_path = Path(args.chain)
    chain = _load_chain(chain_path)
    if chain is None:
        raise ParseError(f"chain file {chain_path} does not exist")
    advance_time(chain, args.seconds)
    _save_chain(chain_path, chain)
    print(f"chain time now {chain.timestamp}")
    return 0


def _cmd_report(args) -> int:
    chain = _load_chain(Path(args.chain))
    receipts = chain.receipts if chain is not None else []
    sys.stdout.write(format_gas_report(receipts))
    return 0


# ---------------------------------------------------------------------------
# Scenario runner
# ---------------------------------------------------------------------------

_EXPECT_SIMPLE = {"granted", "grant-failed", "revoked", "revoke-failed"}


@dataclass(frozen=True)
class _Step:
    index: int
    op: str
    args: tuple[str, ...]
    line_no: int


def _parse_scenario(text: str) -> list[_Step]:
    steps = []
    saw_setup = False
    saw_birth_year = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        op, rest = parts[0], tuple(parts[1:])
        index = len(steps)
        if op == "set":
            if len(rest) != 2:
                raise ParseError(f"line {line_no}: set needs <attribute> <value>")
            if rest[0] == "birthYear":
                saw_birth_year = True
        elif op == "setup":
            if len(rest) > 1:
                raise ParseError(f"line {line_no}: setup takes at most a bit width")
            if rest and not rest[0].isdigit():
                raise ParseError(f"line {line_no}: bit width must be an integer")
            saw_setup = True
        elif op == "grant":
            if len(rest) not in (2, 3):
                raise ParseError(f"line {line_no}: grant needs <scope> <duration> [threshold]")
            if not saw_setup:
                raise ParseError(f"line {line_no}: grant before setup")
            if not saw_birth_year:
                raise ParseError(f"line {line_no}: grant before birthYear is set")
            if not rest[1].lstrip("-").isdigit() or (len(rest) == 3 and not rest[2].isdigit()):
                raise ParseError(f"line {line_no}: grant duration/threshold must be integers")
        elif op in ("validate", "revoke"):
            if len(rest) != 1:
                raise ParseError(f"line {line_no}: {op} needs <scope>")
        elif op == "advance":
            if len(rest) != 1 or not rest[0].lstrip("-").isdigit():
                raise ParseError(f"line {line_no}: advance needs an integer second count")
        elif op == "expect":
            if not rest or (
                rest[0] not in _EXPECT_SIMPLE and rest[0] not in ("valid", "invalid")
            ):
                raise ParseError(f"line {line_no}: unknown expectation {' '.join(rest)!r}")
            if rest[0] in ("valid", "invalid") and len(rest) != 2:
                raise ParseError(f"line {line_no}: expect {rest[0]} needs <scope>")
        else:
            raise ParseError(f"line {line_no}: unknown step {op!r}")
        steps.append(_Step(index=index, op=op, args=rest, line_no=line_no))
    return steps


class _ScenarioRunner:
    def __init__(self, vault_path: Path, passphrase: str, rand: _Randomness, out):
        self.vault_path = vault_path
        self.passphrase = passphrase
        self.rand = rand
        self.out = out
        self.vault: Vault | None = None
        self.pk = None
        self.vk = None
        self.bit_width = DEFAULT_BIT_WIDTH
        self.chain: ChainState | None = None
        self.subject = _DEFAULT_SUBJECT
        self.last_grant: GasReceipt | None = None
        self.last_revoke: GasReceipt | None = None

    def _emit(self, step: _Step, message: str) -> None:
        self.out.write(f"[{step.index}] {step.op}: {message}\n")

    def _ensure_vault(self) -> Vault:
        if self.vault is None:
            if self.vault_path.exists():
                self.vault = Vault(self.vault_path)
            else:
                self.vault = Vault.create(self.vault_path, self.passphrase, kdf_log2_n=12)
        return self.vault

    def run(self, steps: list[_Step]) -> None:
        for step in steps:
            getattr(self, f"_step_{step.op.replace('-', '_')}")(step)

    def _step_set(self, step: _Step) -> None:
        key, raw = step.args
        value = int(raw) if raw.lstrip("-").isdigit() else raw
        self._ensure_vault().put(self.passphrase, key, value)
        self._emit(step, f"{key} stored")

    def _step_setup(self, step: _Step) -> None:
        self.bit_width = int(step.args[0]) if step.args else DEFAULT_BIT_WIDTH
        cs = build_age_circuit(self.bit_width)
        t0 = time.perf_counter()
        self.pk, self.vk = groth16_setup(cs, self.rand.setup_seed())
        genesis = DETERMINISTIC_GENESIS if self.rand.deterministic else int(time.time())
        self.chain = ChainState(registry=RegistryState(verifying_key=self.vk), timestamp=genesis)
        self._emit(step, f"{cs.num_constraints} constraints, chain at genesis {genesis}")
        self.out.write(f"time: setup {(time.perf_counter() - t0) * 1000:.1f} ms\n")

    def _step_grant(self, step: _Step) -> None:
        scope = step.args[0]
        duration = int(step.args[1])
        threshold = int(step.args[2]) if len(step.args) == 3 else DEFAULT_THRESHOLD
        proof, statement, elapsed_ms = _prove_grant(
            self.pk,
            self._ensure_vault(),
            self.passphrase,
            self.chain,
            self.rand,
            self.bit_width,
            threshold,
        )
        tx = GrantTx(
            caller=self.subject,
            scope=_scope_id(scope),
            proof=proof,
            public_inputs=tuple(statement.to_public_inputs()),
            duration_seconds=duration,
        )
        self.last_grant = submit_tx(self.chain, tx)
        outcome = "success" if self.last_grant.success else f"failed ({self.last_grant.error})"
        self._emit(
            step,
            f"scope={scope} duration={duration} -> {outcome} "
            f"gas={self.last_grant.total_gas} block={self.chain.block_number}",
        )
        self.out.write(f"time: prove {elapsed_ms:.1f} ms\n")

    def _step_validate(self, step: _Step) -> None:
        valid = self._validate(step.args[0])
        self._emit(step, f"scope={step.args[0]} -> {'valid' if valid else 'invalid'}")

    def _validate(self, scope: str) -> bool:
        return self.chain is not None and validate_access(
            self.chain.registry, self.subject, _scope_id(scope), self.chain.timestamp
        )

    def _step_revoke(self, step: _Step) -> None:
        if self.chain is None:
            raise ExpectationFailed(step.index, "revoke before setup")
        self.last_revoke = submit_tx(
            self.chain, RevokeTx(caller=self.subject, scope=_scope_id(step.args[0]))
        )
        outcome = "success" if self.last_revoke.success else f"failed ({self.last_revoke.error})"
        self._emit(step, f"scope={step.args[0]} -> {outcome} gas={self.last_revoke.total_gas}")

    def _step_advance(self, step: _Step) -> None:
        if self.chain is None:
            raise ExpectationFailed(step.index, "advance before setup")
        advance_time(self.chain, int(step.args[0]))
        self._emit(step, f"+{step.args[0]} s -> timestamp {self.chain.timestamp}")

    def _step_expect(self, step: _Step) -> None:
        kind = step.args[0]
        if kind in ("valid", "invalid"):
            actual = self._validate(step.args[1])
            expected = kind == "valid"
            if actual != expected:
                raise ExpectationFailed(
                    step.index,
                    f"expected scope {step.args[1]!r} to be {kind}, "
                    f"found {'valid' if actual else 'invalid'}",
                )
        elif kind in ("granted", "grant-failed"):
            if self.last_grant is None:
                raise ExpectationFailed(step.index, "no grant transaction has run")
            if self.last_grant.success != (kind == "granted"):
                raise ExpectationFailed(
                    step.index, f"last grant outcome contradicts expect {kind}"
                )
        else:
            if self.last_revoke is None:
                raise ExpectationFailed(step.index, "no revoke transaction has run")
            if self.last_revoke.success != (kind == "revoked"):
                raise ExpectationFailed(
                    step.index, f"last revoke outcome contradicts expect {kind}"
                )
        self._emit(step, f"{' '.join(step.args)} holds")


def _cmd_scenario(args, rand: _Randomness) -> int:
    script_path = Path(args.script)
    try:
        text = script_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read scenario {script_path}: {exc}") from exc
    steps = _parse_scenario(text)
    runner = _ScenarioRunner(Path(args.vault), _passphrase(args), rand, sys.stdout)
    runner.run(steps)
    print(f"scenario ok: {len(steps)} steps")
    return 0


# ---------------------------------------------------------------------------
# Bench
# ---------------------------------------------------------------------------

def _percentile(sorted_samples: list[float], fraction: float) -> float:
    index = min(len(sorted_samples) - 1, max(0, math.ceil(fraction * len(sorted_samples)) - 1))
    return sorted_samples[index]


@dataclass(frozen=True)
class LatencyStats:
    """min/median/p95 plus the raw samples they were computed from."""

    min: float
    median: float
    p95: float
    samples: tuple[float, ...]

    @classmethod
    def from_samples(cls, samples: list[float]) -> "LatencyStats":
        ordered = sorted(samples)
        return cls(
            min=ordered[0],
            median=statistics.median(ordered),
            p95=_percentile(ordered, 0.95),
            samples=tuple(samples),
        )


@dataclass(frozen=True)
class BenchReport:
    """Latency and economics summary for one bench run."""

    bit_width: int
    iterations: int
    constraint_count: int
    prove_ms: LatencyStats
    verify_ms: LatencyStats
    gas_receipt: GasReceipt
    cost_quotes: tuple[CostQuote, ...]

    def to_doc(self) -> dict:
        return {
            "kind": "bench",
            "bit_width": self.bit_width,
            "iterations": self.iterations,
            "constraint_count": self.constraint_count,
            "prove_ms": {**asdict(self.prove_ms), "samples": list(self.prove_ms.samples)},
            "verify_ms": {**asdict(self.verify_ms), "samples": list(self.verify_ms.samples)},
            "gas": _receipt_dict(self.gas_receipt),
            "cost_quotes": [_quote_dict(q) for q in self.cost_quotes],
            "reference": {
                "grant_gas": REFERENCE_GRANT_GAS,
                "session_usd": REFERENCE_SESSION_USD,
                "l2_max_usd": REFERENCE_L2_MAX_USD,
                "prove_ms": REFERENCE_PROVE_MS,
            },
        }


def run_bench(iterations: int, bit_width: int, rand: _Randomness) -> BenchReport:
    """Setup once, then time full prove/verify rounds on fresh witnesses."""
    if iterations < 20:
        raise ParseError("bench requires at least 20 iterations")
    cs = build_age_circuit(bit_width)
    pk, vk = groth16_setup(cs, rand.setup_seed())

    current_year = calendar_year(int(time.time()))
    threshold = DEFAULT_THRESHOLD
    max_diff = min((1 << bit_width) - 1, current_year - threshold - 1900)

    draw = ScalarStream(rand.setup_seed(), b"zkgrant.bench") if rand.deterministic else None

    def rand_int(bound: int) -> int:
        if draw is not None:
            return draw.next_scalar().value % (bound + 1)
        return secrets.randbelow(bound + 1)

    prove_ms: list[float] = []
    verify_ms: list[float] = []
    # warm the verifier's pairing cache so samples measure steady state
    warm_statement, warm_proof = _bench_round(pk, cs, rand, current_year, threshold, rand_int(max_diff))
    verify(vk, warm_statement.to_public_inputs(), warm_proof)

    for _ in range(iterations):
        diff = rand_int(max_diff)
        t0 = time.perf_counter()
        statement, proof = _bench_round(pk, cs, rand, current_year, threshold, diff)
        prove_ms.append((time.perf_counter() - t0) * 1000.0)
        t0 = time.perf_counter()
        ok = verify(vk, statement.to_public_inputs(), proof)
        verify_ms.append((time.perf_counter() - t0) * 1000.0)
        if not ok:
            raise ZkGrantError("bench round produced a proof that failed verification")

    gas = estimate_grant_gas(3)
    quotes = (
        quote_cost(gas.total_gas, REFERENCE_GAS_PRICE_GWEI, REFERENCE_ETH_USD, "L1"),
        quote_cost(gas.total_gas, REFERENCE_GAS_PRICE_GWEI, REFERENCE_ETH_USD, "L2"),
    )
    return BenchReport(
        bit_width=bit_width,
        iterations=iterations,
        constraint_count=cs.num_constraints,
        prove_ms=LatencyStats.from_samples(prove_ms),
        verify_ms=LatencyStats.from_samples(verify_ms),
        gas_receipt=gas,
        cost_quotes=quotes,
    )


def _cmd_bench(args, rand: _Randomness) -> int:
    report = run_bench(args.iterations, args.bit_width, rand)
    if args.json:
        print(json.dumps(report.to_doc()))
        return 0

    gas = report.gas_receipt
    quotes = report.cost_quotes
    print(f"bench: {report.iterations} rounds, {report.constraint_count} constraints (bit width {report.bit_width})")
    print(f"{'metric':<22} {'measured':>12} {'reference':>12}")
    print(f"{'prove median (ms)':<22} {report.prove_ms.median:>12.1f} {REFERENCE_PROVE_MS:>12.1f}")
    print(f"{'prove min/p95 (ms)':<22} {report.prove_ms.min:>6.1f}/{report.prove_ms.p95:<6.1f}")
    print(f"{'verify median (ms)':<22} {report.verify_ms.median:>12.1f} {'-':>12}")
    print(f"{'grant gas':<22} {gas.total_gas:>12} {REFERENCE_GRANT_GAS:>12}")
    print(f"{'L1 cost (USD)':<22} {quotes[0].usd:>12.2f} {REFERENCE_SESSION_USD:>12.2f}")
    print(f"{'L2 cost (USD)':<22} {quotes[1].usd:>12.2f} {'<' + format(REFERENCE_L2_MAX_USD, '.2f'):>12}")
    print("raw prove samples (ms): " + " ".join(f"{s:.1f}" for s in report.prove_ms.samples))
    print("raw verify samples (ms): " + " ".join(f"{s:.1f}" for s in report.verify_ms.samples))
    return 0


def _bench_round(pk, cs, rand: _Randomness, current_year: int, threshold: int, diff: int):
    salt = rand.salt()
    statement = AgeStatement(
        current_year=Scalar(current_year),
        threshold=Scalar(threshold),
        salt_squared=salt * salt,
    )
    secrets_ = AgeSecrets(birth_year=Scalar(current_year - threshold - diff), salt=salt)
    witness = synthesize_witness(cs, statement, secrets_)
    return statement, prove(pk, cs, witness, rand.blinding_pair())


def _stats_block(samples: list[float]) -> dict:
    ordered = sorted(samples)
    return {
        "min": ordered[0],
        "median": statistics.median(ordered),
        "p95": _percentile(ordered, 0.95),
        "samples": samples,
    }


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="zkgrant", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--vault", default=DEFAULT_VAULT_FILE, help="vault file path")
    parser.add_argument("--seed", default=None, help="hex seed for deterministic runs")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--passphrase", default=None, help="vault passphrase (else $ZKGRANT_PASSPHRASE or prompt)")
    sub = parser.add_subparsers(dest="command", required=True)

    vault_parser = sub.add_parser("vault", help="manage the encrypted attribute store")
    vault_sub = vault_parser.add_subparsers(dest="vault_op", required=True)
    vault_sub.add_parser("init", help="create an empty vault")
    set_parser = vault_sub.add_parser("set", help="store an attribute")
    set_parser.add_argument("key")
    set_parser.add_argument("value")
    get_parser = vault_sub.add_parser("get", help="read an attribute")
    get_parser.add_argument("key")

    setup_parser = sub.add_parser("setup", help="run the trusted setup and write key files")
    setup_parser.add_argument("--bit-width", type=int, default=DEFAULT_BIT_WIDTH)
    setup_parser.add_argument("--keys-dir", default=DEFAULT_KEYS_DIR)

    grant_parser = sub.add_parser("grant", help="prove eligibility and submit a grant")
    grant_parser.add_argument("scope")
    grant_parser.add_argument("duration", type=int, help="grant lifetime in seconds")
    grant_parser.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    grant_parser.add_argument("--keys-dir", default=DEFAULT_KEYS_DIR)
    grant_parser.add_argument("--chain", default=DEFAULT_CHAIN_FILE)
    grant_parser.add_argument("--address", default=None, help="20-byte caller address, hex")
    grant_parser.add_argument("--genesis-time", type=int, default=None)

    validate_parser = sub.add_parser("validate", help="query record validity")
    validate_parser.add_argument("scope")
    validate_parser.add_argument("--chain", default=DEFAULT_CHAIN_FILE)
    validate_parser.add_argument("--address", default=None)

    revoke_parser = sub.add_parser("revoke", help="delete the caller's record")
    revoke_parser.add_argument("scope")
    revoke_parser.add_argument("--chain", default=DEFAULT_CHAIN_FILE)
    revoke_parser.add_argument("--address", default=None)

    advance_parser = sub.add_parser("advance", help="advance the chain clock")
    advance_parser.add_argument("seconds", type=int)
    advance_parser.add_argument("--chain", default=DEFAULT_CHAIN_FILE)

    report_parser = sub.add_parser("report", help="print the gas receipt table")
    report_parser.add_argument("--chain", default=DEFAULT_CHAIN_FILE)

    scenario_parser = sub.add_parser("scenario", help="run lifecycle scripts")
    scenario_sub = scenario_parser.add_subparsers(dest="scenario_op", required=True)
    run_parser = scenario_sub.add_parser("run", help="execute a scenario file")
    run_parser.add_argument("script")

    bench_parser = sub.add_parser("bench", help="latency and economics report")
    bench_parser.add_argument("--iterations", type=int, default=20)
    bench_parser.add_argument("--bit-width", type=int, default=DEFAULT_BIT_WIDTH)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        rand = _Randomness(args.seed)
        if args.command == "vault":
            return _cmd_vault(args)
        if args.command == "setup":
            return _cmd_setup(args, rand)
        if args.command == "grant":
            return _cmd_grant(args, rand)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "revoke":
            return _cmd_revoke(args)
        if args.command == "advance":
            return _cmd_advance(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "scenario":
            return _cmd_scenario(args, rand)
        if args.command == "bench":
            return _cmd_bench(args, rand)
        raise ParseError(f"unknown command {args.command!r}")
    except ExpectationFailed as exc:
        print(f"expectation failed: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except ZkGrantError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
