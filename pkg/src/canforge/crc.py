"""Transfer integrity checksum with a compiled kernel when available.

The wire checksum is CRC-16/CCITT-FALSE computed over the eight bytes of the
type's 64-bit signature in little-endian order followed by the transfer
payload.  The compiled kernel from canforge._speedups is selected at import;
set CANFORGE_PURE=1 (or call set_backend) to force the pure-Python table
implementation.
"""

from __future__ import annotations

import os
from functools import lru_cache

from . import _crc_py

_IMPLS = {"python": _crc_py.crc16_ccitt}

try:
    from . import _speedups
except ImportError:
    pass
else:
    _IMPLS["c"] = _speedups.crc16_ccitt

if os.environ.get("CANFORGE_PURE") or "c" not in _IMPLS:
    _backend = "python"
else:
    _backend = "c"
_crc16 = _IMPLS[_backend]


def backend() -> str:
    """Name of the active kernel: 'c' or 'python'."""
    return _backend


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def set_backend(name: str) -> None:
    """Switch kernels at runtime (used by tests and the benchmark)."""
    global _backend, _crc16
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _backend = name
    _crc16 = _IMPLS[name]


def crc16_ccitt(data: bytes, crc: int = 0xFFFF) -> int:
    """CRC-16/CCITT-FALSE over *data*, continuing from *crc*."""
    return _crc16(data, crc)


@lru_cache(maxsize=64)
def _signature_bytes(signature: int) -> bytes:
    if not 0 <= signature < (1 << 64):
        raise ValueError(f"signature {signature:#x} does not fit in 64 bits")
    return signature.to_bytes(8, "little")


def transfer_crc(signature: int, payload: bytes) -> int:
    """16-bit transfer checksum seeded by the type's 64-bit signature."""
    return _crc16(payload, _crc16(_signature_bytes(signature)))
