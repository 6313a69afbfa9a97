"""
zk-betti - Deterministic Byte Streams

Canonical JSON (RFC 8785) for byte-identical output documents, and the
ChaCha20 counter-mode keystream behind every random variate the sampler draws.

Stream layout (stable, versioned by the domain tags below):
    key      = SHA-256(LM_KEY_TAG || seed as 8 big-endian bytes)
    nonce    = 16 zero bytes (32-bit block counter starts at 0)
    variate t = little-endian uint64 at keystream bytes [8t, 8t+8) >> 11, / 2**53

    trial seed = first 8 bytes (big-endian) of
                 SHA-256(TRIAL_TAG || master seed (8 BE bytes) || trial (8 BE bytes))
"""

import hashlib
from typing import Any, Dict, Union

import numpy as np
import rfc8785
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms

LM_KEY_TAG = b"zk-betti/lm/v1"
TRIAL_TAG = b"zk-betti/trial/v1"

SEED_BITS = 64
_NONCE = bytes(16)
_MANTISSA_SCALE = float(1 << 53)


def canonical_json(data: Union[Dict[str, Any], list]) -> bytes:
    """Serialize a document to canonical JSON (RFC 8785)."""
    return rfc8785.dumps(data)


def _seed_bytes(value: int) -> bytes:
    if not 0 <= value < (1 << SEED_BITS):
        raise ValueError(f"seed {value} outside the unsigned 64-bit range")
    return value.to_bytes(8, "big")


def stream_key(seed: int) -> bytes:
    """Derive the 256-bit ChaCha20 key for a 64-bit seed."""
    return hashlib.sha256(LM_KEY_TAG + _seed_bytes(seed)).digest()


def derive_trial_seed(master_seed: int, trial: int) -> int:
    """Mix (master seed, trial index) into an independent 64-bit seed."""
    if trial < 0:
        raise ValueError(f"trial index must be non-negative, got {trial}")
    digest = hashlib.sha256(TRIAL_TAG + _seed_bytes(master_seed) + _seed_bytes(trial)).digest()
    return int.from_bytes(digest[:8], "big")


def keystream(seed: int, nbytes: int) -> bytes:
    """Return the first ``nbytes`` of the ChaCha20 keystream for ``seed``."""
    encryptor = Cipher(algorithms.ChaCha20(stream_key(seed), _NONCE), mode=None).encryptor()
    return encryptor.update(bytes(nbytes))


def uniform_variates(seed: int, count: int) -> np.ndarray:
    """Return ``count`` uniform doubles in [0, 1) with 53 random bits each.

    The t-th variate depends only on (seed, t), so a longer request extends a
    shorter one without changing its prefix.
    """
    if count <= 0:
        return np.zeros(0, dtype=np.float64)
    words = np.frombuffer(keystream(seed, 8 * count), dtype="<u8")
    return (words >> np.uint64(11)).astype(np.float64) / _MANTISSA_SCALE
