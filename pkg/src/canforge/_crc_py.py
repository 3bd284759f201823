"""Pure-Python CRC-16/CCITT-FALSE kernel (table-driven).

Polynomial 0x1021, initial value 0xFFFF, no input/output reflection, no
final XOR.  Fallback for environments where the compiled kernel in
canforge._speedups is unavailable.
"""


def _build_table() -> tuple[int, ...]:
    table = []
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ 0x1021) if crc & 0x8000 else (crc << 1)
            crc &= 0xFFFF
        table.append(crc)
    return tuple(table)


_TABLE = _build_table()


def crc16_ccitt(data: bytes, crc: int = 0xFFFF) -> int:
    """CRC-16/CCITT-FALSE over *data*, continuing from *crc*."""
    table = _TABLE
    for byte in data:
        crc = ((crc << 8) & 0xFF00) ^ table[(crc >> 8) ^ byte]
    return crc
