# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled CRC-16/CCITT-FALSE kernel.

Same contract as canforge._crc_py.crc16_ccitt; canforge.crc picks whichever
implementation imports successfully.
"""

from libc.stdint cimport uint8_t, uint16_t

cdef uint16_t[256] _TABLE


cdef void _init_table() noexcept:
    cdef int byte, bit
    cdef uint16_t crc
    for byte in range(256):
        crc = <uint16_t> (byte << 8)
        for bit in range(8):
            if crc & 0x8000:
                crc = <uint16_t> ((crc << 1) ^ 0x1021)
            else:
                crc = <uint16_t> (crc << 1)
        _TABLE[byte] = crc


_init_table()


def crc16_ccitt(data, unsigned int crc=0xFFFF):
    """CRC-16/CCITT-FALSE over *data*, continuing from *crc*."""
    cdef const uint8_t[:] view = data
    cdef Py_ssize_t i
    cdef Py_ssize_t n = view.shape[0]
    cdef uint16_t c = <uint16_t> crc
    for i in range(n):
        c = <uint16_t> ((c << 8) ^ _TABLE[(c >> 8) ^ view[i]])
    return c
