"""Tenancy ledger tests: allocation, release, rewiring, exclusivity."""

import pytest

from vrnoc.packet import Flit, Header
from vrnoc.tenancy import AllocationEvent, TenancyError, TenancyLedger
from vrnoc.topology import TopologyConfig, build_topology
from vrnoc.vregion import VirtualRegion


def make_ledger(n=3):
    topo = build_topology(TopologyConfig(routers_per_column=n))
    vrs = [VirtualRegion(d.vr_uid, d.router_id, int(d.side)) for d in topo.vrs]
    return TenancyLedger(topo, vrs), vrs


def test_case_study_allocation_map():
    ledger, vrs = make_ledger(3)
    for vi, vr in ((1, 0), (2, 1), (3, 2), (4, 4), (5, 5)):
        ledger.allocate_vr(vi, vr)
    assert ledger.allocation_table() == {1: [0], 2: [1], 3: [2], 4: [4], 5: [5]}
    assert vrs[2].registers.vi_id == 3
    ledger.check_exclusive()


def test_double_allocation_conflicts():
    ledger, _ = make_ledger()
    ledger.allocate_vr(1, 0)
    with pytest.raises(TenancyError, match="already allocated"):
        ledger.allocate_vr(2, 0)


def test_tenant_id_range_enforced():
    ledger, _ = make_ledger()
    with pytest.raises(TenancyError):
        ledger.allocate_vr(0, 0)  # reserved unallocated marker
    with pytest.raises(TenancyError):
        ledger.allocate_vr(1024, 0)
    ledger.allocate_vr(1023, 0)


def test_release_denies_late_arrivals():
    ledger, vrs = make_ledger()
    ledger.allocate_vr(9, 4)
    assert vrs[4].accept(Flit(Header(9, 2, 0)), cycle=1)
    ledger.release_vr(9, 4)
    assert not vrs[4].accept(Flit(Header(9, 2, 0)), cycle=2)
    assert 4 not in ledger.owner


def test_release_requires_ownership():
    ledger, _ = make_ledger()
    ledger.allocate_vr(1, 0)
    with pytest.raises(TenancyError):
        ledger.release_vr(2, 0)
    with pytest.raises(TenancyError):
        ledger.release_vr(1, 3)


def test_wire_points_source_registers_at_destination():
    ledger, vrs = make_ledger()
    ledger.allocate_vr(3, 2)
    ledger.allocate_vr(3, 5)
    ledger.wire(3, 2, 5)
    regs = vrs[2].registers
    assert (regs.dest_router_id, regs.dest_vr_id, regs.vi_id) == (2, 1, 3)


def test_wire_refuses_cross_tenant_targets():
    ledger, _ = make_ledger()
    ledger.allocate_vr(3, 2)
    ledger.allocate_vr(4, 5)
    with pytest.raises(TenancyError, match="crosses tenant boundaries"):
        ledger.wire(3, 2, 5)


def test_elastic_extend_allocates_and_wires():
    ledger, vrs = make_ledger()
    ledger.allocate_vr(3, 2)
    ledger.elastic_extend(3, new_vr=3, src_vr=2)
    assert ledger.allocation_table()[3] == [2, 3]
    regs = vrs[2].registers
    assert (regs.dest_router_id, regs.dest_vr_id) == (1, 1)


def test_extend_requires_owned_source():
    ledger, _ = make_ledger()
    with pytest.raises(TenancyError):
        ledger.elastic_extend(3, new_vr=3, src_vr=2)


def test_event_application():
    ledger, vrs = make_ledger()
    ledger.apply(AllocationEvent(0, "allocate", 3, vr_id=2))
    ledger.apply(AllocationEvent(5, "extend", 3, vr_id=3, src_vr=2))
    ledger.apply(AllocationEvent(9, "wire", 3, src_vr=3, dst_vr=2))
    ledger.apply(AllocationEvent(12, "release", 3, vr_id=3))
    assert ledger.allocation_table() == {3: [2]}
    with pytest.raises(TenancyError, match="unknown event kind"):
        ledger.apply(AllocationEvent(0, "shrink", 3, vr_id=2))


def test_exclusivity_check_detects_corruption():
    ledger, _ = make_ledger()
    ledger.allocate_vr(1, 0)
    ledger.allocate_vr(2, 1)
    ledger.check_exclusive()
    ledger.instances[2].allocated_vrs.add(0)  # simulate state corruption
    with pytest.raises(TenancyError, match="owned by both"):
        ledger.check_exclusive()
