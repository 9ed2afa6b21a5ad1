"""Virtual-region wrapper, inject queue and access-monitor tests."""

import pytest

from vrnoc.packet import Header
from vrnoc.vregion import VirtualRegion, VrRegisters, VrStateError


def make_vr(vi=7, dest_router=2, dest_vr=1, depth=None):
    vr = VirtualRegion(vr_uid=0, router_id=0, side=0, queue_depth=depth)
    vr.configure(VrRegisters(dest_router_id=dest_router, dest_vr_id=dest_vr,
                             vi_id=vi))
    return vr


def test_wrapper_builds_header_from_registers():
    vr = make_vr(vi=7, dest_router=2, dest_vr=1)
    assert vr.inject(0xAB, cycle=0)
    flit = vr.inject_queue[0]
    assert flit.header == Header(7, 2, 1)
    assert flit.payload == 0xAB


def test_unallocated_region_cannot_inject():
    vr = VirtualRegion(vr_uid=0, router_id=0, side=0)
    with pytest.raises(VrStateError):
        vr.inject(1, cycle=0)


def test_configure_rejects_unallocated_marker():
    vr = VirtualRegion(vr_uid=0, router_id=0, side=0)
    with pytest.raises(VrStateError):
        vr.configure(VrRegisters(vi_id=0))


def test_register_ranges_checked():
    vr = VirtualRegion(vr_uid=0, router_id=0, side=0)
    with pytest.raises(VrStateError):
        vr.configure(VrRegisters(dest_router_id=32, vi_id=1))
    with pytest.raises(VrStateError):
        vr.configure(VrRegisters(dest_vr_id=2, vi_id=1))
    with pytest.raises(VrStateError):
        vr.configure(VrRegisters(vi_id=1024))


def test_reconfigure_only_affects_later_flits():
    """Headers snapshot the registers at enqueue time."""
    vr = make_vr(vi=7, dest_router=1, dest_vr=0)
    vr.inject(1, cycle=0)
    vr.configure(VrRegisters(dest_router_id=3, dest_vr_id=1, vi_id=7))
    vr.inject(2, cycle=1)
    old, new = vr.inject_queue
    assert old.header == Header(7, 1, 0)
    assert new.header == Header(7, 3, 1)


def test_pull_eligibility_is_one_cycle_delayed():
    """The queue's empty flag is registered: a flit enqueued at cycle t
    becomes visible to the router at t+1."""
    vr = make_vr()
    vr.inject(1, cycle=5)
    assert vr.head_if_eligible(5) is None
    assert vr.head_if_eligible(6) is not None


def test_bounded_queue_refuses_when_full():
    vr = make_vr(depth=2)
    assert vr.inject(1, cycle=0)
    assert vr.inject(2, cycle=0)
    assert not vr.inject(3, cycle=0)
    assert (vr.injected, vr.refused) == (2, 1)


def test_queue_conservation():
    vr = make_vr(depth=4)
    for i in range(8):
        vr.inject(i, cycle=i)
    pulled = [vr.pull(cycle=10), vr.pull(cycle=11)]
    assert vr.injected == vr.pulled + len(vr.inject_queue)
    assert pulled[0].pull_cycle == 10


def test_monitor_delivers_matching_tenant():
    vr = make_vr(vi=7)
    flit = vr_flit(vi=7, payload=99)
    assert vr.accept(flit, cycle=12)
    assert vr.user_sink == [(12, 99, "", 12)]
    assert (vr.accepted, vr.denied) == (1, 0)


def test_monitor_denies_foreign_tenant():
    vr = make_vr(vi=7)
    assert not vr.accept(vr_flit(vi=8), cycle=3)
    assert (vr.accepted, vr.denied) == (0, 1)


def test_monitor_denies_after_deallocation():
    vr = make_vr(vi=7)
    vr.deallocate()
    assert not vr.accept(vr_flit(vi=7), cycle=3)
    assert not vr.allocated


def test_header_stripped_before_user_sink():
    """User logic sees payloads only; no header reaches the sink."""
    vr = make_vr(vi=7)
    vr.accept(vr_flit(vi=7, payload=42), cycle=9)
    cycle, payload, flow, latency = vr.user_sink[0]
    assert payload == 42
    assert not isinstance(payload, Header)


def test_depth_statistics():
    vr = make_vr()
    vr.inject(1, cycle=0)
    vr.sample_depth()
    vr.inject(2, cycle=0)
    vr.sample_depth()
    assert vr.depth_max == 2
    assert vr.mean_depth() == pytest.approx(1.5)


def vr_flit(vi, payload=0):
    from vrnoc.packet import Flit
    return Flit(Header(vi, 0, 0), payload)
