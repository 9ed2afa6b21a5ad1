"""Device-side tenancy: region allocation, release, runtime elasticity.

A virtual instance (tenant) owns a set of regions.  Allocation writes
the owner id into the region's wrapper registers; release clears them
back to the reserved unallocated marker so late flits are denied on
arrival.  Elastic extension allocates a fresh region to a running
tenant and rewires an existing region's egress registers to stream to
it through the NoC.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .packet import VI_MAX, VI_UNALLOCATED
from .topology import Side, Topology
from .vregion import VirtualRegion, VrRegisters


class TenancyError(RuntimeError):
    pass


@dataclass
class VirtualInstance:
    vi_id: int
    allocated_vrs: set[int] = field(default_factory=set)


@dataclass
class AllocationEvent:
    cycle: int
    kind: str  # allocate | release | extend | wire
    vi_id: int
    vr_id: Optional[int] = None
    src_vr: Optional[int] = None
    dst_vr: Optional[int] = None


class TenancyLedger:
    """Owns the VI table and applies the allocation timeline."""

    def __init__(self, topo: Topology, vrs: list[VirtualRegion]):
        self.topo = topo
        self.vrs = vrs
        self.instances: dict[int, VirtualInstance] = {}
        self.owner: dict[int, int] = {}  # vr uid -> vi id

    def _instance(self, vi_id: int) -> VirtualInstance:
        if not VI_UNALLOCATED < vi_id <= VI_MAX:
            raise TenancyError(f"vi id {vi_id} outside the tenant range 1..{VI_MAX}")
        return self.instances.setdefault(vi_id, VirtualInstance(vi_id))

    def allocate_vr(self, vi_id: int, vr_uid: int, cycle: int = 0) -> None:
        if vr_uid in self.owner:
            raise TenancyError(
                f"vr {vr_uid} already allocated to vi {self.owner[vr_uid]}")
        vi = self._instance(vi_id)
        vr = self.vrs[vr_uid]
        vr.registers = VrRegisters(vi_id=vi_id)
        vi.allocated_vrs.add(vr_uid)
        self.owner[vr_uid] = vi_id

    def release_vr(self, vi_id: int, vr_uid: int, cycle: int = 0) -> None:
        if self.owner.get(vr_uid) != vi_id:
            raise TenancyError(f"vi {vi_id} does not own vr {vr_uid}")
        self.vrs[vr_uid].deallocate()
        self.instances[vi_id].allocated_vrs.discard(vr_uid)
        del self.owner[vr_uid]

    def wire(self, vi_id: int, src_vr: int, dst_vr: int, cycle: int = 0) -> None:
        """Point src's egress registers at dst through the NoC."""
        if self.owner.get(src_vr) != vi_id:
            raise TenancyError(f"vi {vi_id} does not own source vr {src_vr}")
        if self.owner.get(dst_vr) != vi_id:
            raise TenancyError(
                f"wiring vr {src_vr} -> vr {dst_vr} crosses tenant boundaries")
        dst = self.topo.vr(dst_vr)
        self.vrs[src_vr].configure(VrRegisters(
            dest_router_id=dst.router_id,
            dest_vr_id=int(dst.side == Side.EAST),
            vi_id=vi_id))

    def elastic_extend(self, vi_id: int, new_vr: int, src_vr: int,
                       cycle: int = 0) -> None:
        if self.owner.get(src_vr) != vi_id:
            raise TenancyError(f"vi {vi_id} does not own source vr {src_vr}")
        self.allocate_vr(vi_id, new_vr, cycle)
        self.wire(vi_id, src_vr, new_vr, cycle)

    def apply(self, ev: AllocationEvent) -> None:
        if ev.kind == "allocate":
            self.allocate_vr(ev.vi_id, ev.vr_id, ev.cycle)
        elif ev.kind == "release":
            self.release_vr(ev.vi_id, ev.vr_id, ev.cycle)
        elif ev.kind == "wire":
            self.wire(ev.vi_id, ev.src_vr, ev.dst_vr, ev.cycle)
        elif ev.kind == "extend":
            self.elastic_extend(ev.vi_id, ev.vr_id, ev.src_vr, ev.cycle)
        else:
            raise TenancyError(f"unknown event kind {ev.kind!r}")

    def allocation_table(self) -> dict[int, list[int]]:
        return {vi.vi_id: sorted(vi.allocated_vrs)
                for vi in self.instances.values() if vi.allocated_vrs}

    def check_exclusive(self) -> None:
        claimed: dict[int, int] = {}
        for vi in self.instances.values():
            for vr in vi.allocated_vrs:
                if vr in claimed:
                    raise TenancyError(
                        f"vr {vr} owned by both vi {claimed[vr]} and vi {vi.vi_id}")
                claimed[vr] = vi.vi_id
