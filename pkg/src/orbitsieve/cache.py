"""Sieve table cache file: compact, versioned, endian-pinned.

Layout: magic "MUTBL001" (8 bytes), little-endian u64 N, ceil(N/4) bytes
of 2-bit mu codes for n = 1..N ascending (00 -> 0, 01 -> +1, 10 -> -1,
11 reserved), the same layout for lambda (01 -> +1, 10 -> -1), then
ceil(N/8) prime-flag bits.  Within a byte, codes fill from the least
significant bits upward.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .arith import MobiusTable
from .errors import CorruptCacheError

MAGIC = b"MUTBL001"

__all__ = ["MAGIC", "cache_write", "cache_read"]


def _pack_codes(values: np.ndarray) -> bytes:
    # values in {-1, 0, 1}; code 0/1/2 packed four per byte, LSB first
    codes = np.zeros(len(values), dtype=np.uint8)
    codes[values == 1] = 1
    codes[values == -1] = 2
    pad = (-len(codes)) % 4
    if pad:
        codes = np.concatenate([codes, np.zeros(pad, dtype=np.uint8)])
    codes = codes.reshape(-1, 4)
    packed = codes[:, 0] | (codes[:, 1] << 2) | (codes[:, 2] << 4) | (codes[:, 3] << 6)
    return packed.astype(np.uint8).tobytes()


def _unpack_codes(buf: bytes, n: int, allow_zero: bool) -> np.ndarray:
    packed = np.frombuffer(buf, dtype=np.uint8)
    codes = np.empty((len(packed), 4), dtype=np.uint8)
    codes[:, 0] = packed & 3
    codes[:, 1] = (packed >> 2) & 3
    codes[:, 2] = (packed >> 4) & 3
    codes[:, 3] = (packed >> 6) & 3
    codes = codes.reshape(-1)[:n]
    if np.any(codes == 3):
        raise CorruptCacheError("reserved 2-bit code 11 present")
    if not allow_zero and np.any(codes == 0):
        raise CorruptCacheError("code 00 is invalid for the lambda block")
    out = np.zeros(n, dtype=np.int8)
    out[codes == 1] = 1
    out[codes == 2] = -1
    return out


def cache_write(table: MobiusTable, path) -> None:
    """Write the table; atomic (write-temp-then-rename)."""
    path = Path(path)
    n = table.limit
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<Q", n)
    blob += _pack_codes(table.mu[1 : n + 1])
    blob += _pack_codes(table.lam[1 : n + 1])
    blob += np.packbits(table.is_prime[1 : n + 1].astype(bool), bitorder="little").tobytes()
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(bytes(blob))
    os.replace(tmp, path)


def cache_read(path) -> MobiusTable:
    """Read a table; bit-exact round trip with cache_write."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < 16:
        raise CorruptCacheError(f"{path}: file shorter than the fixed header")
    magic = blob[:8]
    if magic != MAGIC:
        if magic[:5] == MAGIC[:5]:
            raise CorruptCacheError(
                f"{path}: version mismatch: file has {magic[5:].decode('ascii', 'replace')}, "
                f"reader supports {MAGIC[5:].decode('ascii')}"
            )
        raise CorruptCacheError(f"{path}: bad magic {magic!r}")
    n = struct.unpack("<Q", blob[8:16])[0]
    if n < 1:
        raise CorruptCacheError(f"{path}: stored N={n} is not positive")
    nbytes2 = (n + 3) // 4
    nbytes_p = (n + 7) // 8
    expected = 16 + 2 * nbytes2 + nbytes_p
    if len(blob) != expected:
        raise CorruptCacheError(
            f"{path}: truncated or padded: {len(blob)} bytes, expected {expected}"
        )
    off = 16
    mu_vals = _unpack_codes(blob[off : off + nbytes2], n, allow_zero=True)
    off += nbytes2
    lam_vals = _unpack_codes(blob[off : off + nbytes2], n, allow_zero=False)
    off += nbytes2
    bits = np.unpackbits(
        np.frombuffer(blob[off : off + nbytes_p], dtype=np.uint8), bitorder="little"
    )[:n]
    mu = np.zeros(n + 1, dtype=np.int8)
    lam = np.zeros(n + 1, dtype=np.int8)
    isp = np.zeros(n + 1, dtype=np.uint8)
    mu[1:] = mu_vals
    lam[1:] = lam_vals
    isp[1:] = bits
    return MobiusTable(limit=int(n), mu=mu, lam=lam, is_prime=isp)
