"""Passphrase-protected local attribute store.

Raw identity attributes (birth year and friends) never leave this file in
plaintext: the attribute map is serialized to JSON and sealed with
ChaCha20-Poly1305 under a key derived from the passphrase with scrypt, a
memory-hard KDF.  The envelope header doubles as associated data, so both
header and ciphertext are tamper-evident.

On-disk layout (integers little-endian):

    magic          4   b"SDV1"
    version        2   format version, currently 1
    kdf salt      16
    kdf log2(N)    1   scrypt memory cost exponent
    kdf r          1   scrypt block size
    kdf p          1   scrypt parallelism
    nonce         12
    ct length      4
    ciphertext     *
    auth tag      16

Writes are atomic (temp file + rename) and serialized by an advisory lock
on a sidecar file; a second process fails fast instead of corrupting state.

The per-proof blinding salt is generated here too and is deliberately
ephemeral: the circuit publishes its square, so reusing a salt across
proofs would make them linkable.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
import secrets
import struct
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305

from .algebra import CURVE_ORDER, Scalar
from .errors import (
    AuthenticationFailure,
    EntropyUnavailable,
    InvalidAttributeValue,
    IoFailure,
    UnknownAttribute,
    VaultLocked,
    WeakPassphrase,
)

MAGIC = b"SDV1"
FORMAT_VERSION = 1
KDF_SALT_LENGTH = 16
NONCE_LENGTH = 12
TAG_LENGTH = 16
MIN_PASSPHRASE_LENGTH = 8

DEFAULT_KDF_LOG2_N = 14  # 16 MiB working set
DEFAULT_KDF_R = 8
DEFAULT_KDF_P = 1

MIN_BIRTH_YEAR = 1900

_HEADER = struct.Struct(f"<4sH{KDF_SALT_LENGTH}sBBB{NONCE_LENGTH}sI")


@dataclass(frozen=True)
class VaultFile:
    """Parsed on-disk envelope."""

    format_version: int
    kdf_salt: bytes
    kdf_log2_n: int
    kdf_r: int
    kdf_p: int
    nonce: bytes
    ciphertext: bytes
    auth_tag: bytes

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(
            MAGIC,
            self.format_version,
            self.kdf_salt,
            self.kdf_log2_n,
            self.kdf_r,
            self.kdf_p,
            self.nonce,
            len(self.ciphertext),
        )
        return header + self.ciphertext + self.auth_tag

    @classmethod
    def from_bytes(cls, blob: bytes) -> "VaultFile":
        if len(blob) < _HEADER.size + TAG_LENGTH:
            raise AuthenticationFailure("vault file is truncated")
        magic, version, salt, log2_n, r, p, nonce, ct_len = _HEADER.unpack_from(blob)
        if magic != MAGIC:
            raise AuthenticationFailure("not a vault file (bad magic)")
        body = blob[_HEADER.size:]
        if len(body) != ct_len + TAG_LENGTH:
            raise AuthenticationFailure("vault file length mismatch")
        return cls(
            format_version=version,
            kdf_salt=salt,
            kdf_log2_n=log2_n,
            kdf_r=r,
            kdf_p=p,
            nonce=nonce,
            ciphertext=body[:ct_len],
            auth_tag=body[ct_len:],
        )

    def header_bytes(self) -> bytes:
        # magic through nonce; bound into the AEAD as associated data
        return _aad(
            self.kdf_salt,
            self.kdf_log2_n,
            self.kdf_r,
            self.kdf_p,
            self.nonce,
            self.format_version,
        )


def _aad(kdf_salt: bytes, log2_n: int, r: int, p: int, nonce: bytes, version: int) -> bytes:
    return (
        MAGIC
        + version.to_bytes(2, "little")
        + kdf_salt
        + bytes([log2_n, r, p])
        + nonce
    )


def _derive_key(passphrase: str, salt: bytes, log2_n: int, r: int, p: int) -> bytes:
    n = 1 << log2_n
    return hashlib.scrypt(
        passphrase.encode("utf-8"),
        salt=salt,
        n=n,
        r=r,
        p=p,
        dklen=32,
        maxmem=256 * r * n + (1 << 20),
    )


class Vault:
    """Handle to one encrypted attribute file."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)

    # --- lifecycle ---------------------------------------------------------

    @classmethod
    def create(
        cls,
        path: str | os.PathLike,
        passphrase: str,
        *,
        kdf_log2_n: int = DEFAULT_KDF_LOG2_N,
        kdf_r: int = DEFAULT_KDF_R,
        kdf_p: int = DEFAULT_KDF_P,
    ) -> "Vault":
        """Create an empty vault; fails if the passphrase is too short."""
        if len(passphrase) < MIN_PASSPHRASE_LENGTH:
            raise WeakPassphrase(
                f"passphrase must be at least {MIN_PASSPHRASE_LENGTH} characters"
            )
        vault = cls(path)
        with vault._locked():
            envelope = vault._seal(
                {},
                passphrase,
                kdf_salt=secrets.token_bytes(KDF_SALT_LENGTH),
                kdf_log2_n=kdf_log2_n,
                kdf_r=kdf_r,
                kdf_p=kdf_p,
            )
            vault._write_atomic(envelope.to_bytes())
        return vault

    def envelope(self) -> VaultFile:
        """Parse the on-disk envelope without decrypting it."""
        return VaultFile.from_bytes(self._read_bytes())

    # --- attribute operations ----------------------------------------------

    def put(self, passphrase: str, key: str, value) -> None:
        """Store an attribute, re-encrypting the whole map under a fresh nonce."""
        _validate_attribute(key, value)
        with self._locked():
            envelope = VaultFile.from_bytes(self._read_bytes())
            attributes = self._open(envelope, passphrase)
            attributes[key] = value
            sealed = self._seal(
                attributes,
                passphrase,
                kdf_salt=envelope.kdf_salt,
                kdf_log2_n=envelope.kdf_log2_n,
                kdf_r=envelope.kdf_r,
                kdf_p=envelope.kdf_p,
            )
            self._write_atomic(sealed.to_bytes())

    def get(self, passphrase: str, key: str):
        """Read one attribute; the file is left untouched."""
        with self._locked():
            attributes = self._open(self.envelope(), passphrase)
        if key not in attributes:
            raise UnknownAttribute(f"attribute {key!r} is not stored")
        return attributes[key]

    def attributes(self, passphrase: str) -> dict:
        """Decrypt and return the whole attribute map."""
        with self._locked():
            return self._open(self.envelope(), passphrase)

    # --- internals -----------------------------------------------------------

    def _seal(self, attributes: dict, passphrase: str, *, kdf_salt, kdf_log2_n, kdf_r, kdf_p) -> VaultFile:
        key = _derive_key(passphrase, kdf_salt, kdf_log2_n, kdf_r, kdf_p)
        nonce = secrets.token_bytes(NONCE_LENGTH)
        payload = json.dumps(attributes, sort_keys=True).encode("utf-8")
        aad = _aad(kdf_salt, kdf_log2_n, kdf_r, kdf_p, nonce, FORMAT_VERSION)
        sealed = ChaCha20Poly1305(key).encrypt(nonce, payload, aad)
        return VaultFile(
            format_version=FORMAT_VERSION,
            kdf_salt=kdf_salt,
            kdf_log2_n=kdf_log2_n,
            kdf_r=kdf_r,
            kdf_p=kdf_p,
            nonce=nonce,
            ciphertext=sealed[:-TAG_LENGTH],
            auth_tag=sealed[-TAG_LENGTH:],
        )

    def _open(self, envelope: VaultFile, passphrase: str) -> dict:
        key = _derive_key(
            passphrase,
            envelope.kdf_salt,
            envelope.kdf_log2_n,
            envelope.kdf_r,
            envelope.kdf_p,
        )
        try:
            payload = ChaCha20Poly1305(key).decrypt(
                envelope.nonce,
                envelope.ciphertext + envelope.auth_tag,
                envelope.header_bytes(),
            )
        except InvalidTag as exc:
            raise AuthenticationFailure(
                "wrong passphrase or tampered vault contents"
            ) from exc
        return json.loads(payload.decode("utf-8"))

    def _read_bytes(self) -> bytes:
        try:
            return self.path.read_bytes()
        except OSError as exc:
            raise IoFailure(f"cannot read vault file {self.path}: {exc}") from exc

    def _write_atomic(self, blob: bytes) -> None:
        tmp = self.path.with_name(self.path.name + f".tmp.{os.getpid()}")
        try:
            tmp.write_bytes(blob)
            os.replace(tmp, self.path)
            os.chmod(self.path, 0o600)
        except OSError as exc:
            tmp.unlink(missing_ok=True)
            raise IoFailure(f"cannot write vault file {self.path}: {exc}") from exc

    @contextmanager
    def _locked(self):
        lock_path = self.path.with_name(self.path.name + ".lock")
        try:
            fd = os.open(lock_path, os.O_CREAT | os.O_RDWR, 0o600)
        except OSError as exc:
            raise IoFailure(f"cannot open lock file {lock_path}: {exc}") from exc
        try:
            try:
                fcntl.flock(fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
            except BlockingIOError as exc:
                raise VaultLocked(
                    f"vault {self.path} is in use by another process"
                ) from exc
            yield
        finally:
            os.close(fd)


def _validate_attribute(key: str, value) -> None:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise InvalidAttributeValue(f"attribute {key!r} must be text or an integer")
    if key == "birthYear":
        current_year = time.gmtime().tm_year
        if not isinstance(value, int) or not MIN_BIRTH_YEAR <= value <= current_year:
            raise InvalidAttributeValue(
                f"birthYear must be an integer in [{MIN_BIRTH_YEAR}, {current_year}]"
            )


def generate_salt(rng=None) -> Scalar:
    """Uniform nonzero scalar for proof blinding.

    `rng` needs a getrandbits method; it defaults to the operating system
    CSPRNG.  Pass random.Random(seed) for a reproducible test sequence.
    A fresh salt must be drawn for every proof and never written to disk.
    """
    import random

    source = rng if rng is not None else random.SystemRandom()
    try:
        while True:
            candidate = source.getrandbits(256)
            if 0 < candidate < CURVE_ORDER:
                return Scalar(candidate)
    except (OSError, NotImplementedError, AttributeError) as exc:
        raise EntropyUnavailable(f"randomness source failed: {exc}") from exc
