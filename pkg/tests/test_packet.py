"""Header codec tests: widths, exhaustive round trip, field errors."""

import pytest
from hypothesis import given, strategies as st

from vrnoc.packet import (HEADER_BITS, ROUTER_BITS, ROUTER_MAX, VI_BITS,
                          VI_MAX, VI_UNALLOCATED, VR_BITS, VR_MAX, Flit,
                          Header, HeaderFieldError, decode_header,
                          encode_header)


def test_field_widths():
    assert (VI_BITS, ROUTER_BITS, VR_BITS) == (10, 5, 1)
    assert HEADER_BITS == 16
    assert (VI_MAX, ROUTER_MAX, VR_MAX) == (1023, 31, 1)
    assert VI_UNALLOCATED == 0


def test_known_encoding():
    # vi 5 in bits [15:6], router 2 in [5:1], side 1 in [0]
    assert encode_header(Header(5, 2, 1)) == 0x0145
    assert encode_header(Header(0, 0, 0)) == 0x0000
    assert encode_header(Header(VI_MAX, ROUTER_MAX, VR_MAX)) == 0xFFFF


def test_exhaustive_round_trip():
    for word in range(1 << HEADER_BITS):
        assert encode_header(decode_header(word)) == word


def test_round_trip_preserves_fields():
    h = Header(vi_id=731, router_id=19, vr_id=0)
    assert decode_header(encode_header(h)) == h


@pytest.mark.parametrize("header", [
    Header(VI_MAX + 1, 0, 0),
    Header(-1, 0, 0),
    Header(0, ROUTER_MAX + 1, 0),
    Header(0, -1, 0),
    Header(0, 0, 2),
    Header(0, 0, -1),
])
def test_out_of_range_fields_rejected(header):
    with pytest.raises(HeaderFieldError):
        encode_header(header)


def test_error_names_offending_field():
    with pytest.raises(HeaderFieldError, match="vi_id=2000"):
        encode_header(Header(2000, 0, 0))


def test_decode_rejects_wide_words():
    with pytest.raises(HeaderFieldError):
        decode_header(1 << 16)
    with pytest.raises(HeaderFieldError):
        decode_header(-1)


@given(vi=st.integers(0, VI_MAX), router=st.integers(0, ROUTER_MAX),
       vr=st.integers(0, VR_MAX))
def test_any_valid_header_round_trips(vi, router, vr):
    h = Header(vi, router, vr)
    word = encode_header(h)
    assert 0 <= word < (1 << HEADER_BITS)
    assert decode_header(word) == h


def test_flit_header_word():
    flit = Flit(Header(5, 2, 1), payload=0xDEADBEEF, inject_cycle=7)
    assert flit.header_word() == 0x0145
    assert flit.payload == 0xDEADBEEF
    assert flit.pull_cycle == -1
