"""Header encoding and the flit transfer unit.

The on-chip transfer unit is a single flit: a 16-bit header plus a
payload of the configured data width.  The header packs three fields:

    bits [15:6]  tenant instance id   (10 bits, 0..1023)
    bits [5:1]   destination router   (5 bits, 0..31)
    bit  [0]     destination region side (0 = west, 1 = east)

The bit order is a simulator convention; only the field widths are
dictated by the wire format.
"""

from __future__ import annotations

from dataclasses import dataclass, field

VI_BITS = 10
ROUTER_BITS = 5
VR_BITS = 1
HEADER_BITS = VI_BITS + ROUTER_BITS + VR_BITS

VI_MAX = (1 << VI_BITS) - 1
ROUTER_MAX = (1 << ROUTER_BITS) - 1
VR_MAX = (1 << VR_BITS) - 1

# vi_id 0 is reserved as the "unallocated region" marker; tenants use 1..1023.
VI_UNALLOCATED = 0


class HeaderFieldError(ValueError):
    """A header field is outside its encodable range."""

    def __init__(self, field_name: str, value: int, limit: int):
        self.field_name = field_name
        self.value = value
        super().__init__(f"{field_name}={value} does not fit (max {limit})")


@dataclass(frozen=True)
class Header:
    """Destination/ownership fields carried by every routed flit."""

    vi_id: int
    router_id: int
    vr_id: int


def encode_header(h: Header) -> int:
    """Pack a header into its 16-bit wire word."""
    if not 0 <= h.vi_id <= VI_MAX:
        raise HeaderFieldError("vi_id", h.vi_id, VI_MAX)
    if not 0 <= h.router_id <= ROUTER_MAX:
        raise HeaderFieldError("router_id", h.router_id, ROUTER_MAX)
    if not 0 <= h.vr_id <= VR_MAX:
        raise HeaderFieldError("vr_id", h.vr_id, VR_MAX)
    return (h.vi_id << (ROUTER_BITS + VR_BITS)) | (h.router_id << VR_BITS) | h.vr_id


def decode_header(word: int) -> Header:
    """Unpack a 16-bit wire word.  Every word is decodable."""
    if not 0 <= word <= 0xFFFF:
        raise HeaderFieldError("word", word, 0xFFFF)
    return Header(
        vi_id=word >> (ROUTER_BITS + VR_BITS),
        router_id=(word >> VR_BITS) & ROUTER_MAX,
        vr_id=word & VR_MAX,
    )


@dataclass
class Flit:
    """One header + payload word in flight.

    The payload is an opaque integer of the configured width; the
    simulator never interprets it.  ``inject_cycle`` and ``flow_id``
    exist for metrics only and are not part of the wire format.
    """

    header: Header
    payload: int = 0
    inject_cycle: int = 0
    flow_id: str = ""
    src_vr: int = field(default=-1)
    pull_cycle: int = field(default=-1)

    def header_word(self) -> int:
        return encode_header(self.header)
