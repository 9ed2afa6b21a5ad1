"""Virtual FPGA region: wrapper registers, injection queue, access monitor.

User logic never touches headers.  On egress the wrapper builds the
header from hypervisor-written registers; on ingress the access monitor
drops any flit whose tenant id differs from the region's owner and
strips the header before handing the payload to the user sink.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .packet import Flit, Header, ROUTER_MAX, VI_MAX, VI_UNALLOCATED


class VrStateError(RuntimeError):
    """Operation on a region that is not allocated/configured for it."""


@dataclass
class VrRegisters:
    """Hypervisor-owned wrapper registers."""

    dest_router_id: int = 0
    dest_vr_id: int = 0
    vi_id: int = VI_UNALLOCATED

    def check(self) -> None:
        if not 0 <= self.dest_router_id <= ROUTER_MAX:
            raise VrStateError(f"dest_router_id {self.dest_router_id} out of range")
        if self.dest_vr_id not in (0, 1):
            raise VrStateError(f"dest_vr_id {self.dest_vr_id} out of range")
        if not 0 <= self.vi_id <= VI_MAX:
            raise VrStateError(f"vi_id {self.vi_id} out of range")


@dataclass
class VirtualRegion:
    vr_uid: int
    router_id: int
    side: int
    registers: VrRegisters = field(default_factory=VrRegisters)
    queue_depth: Optional[int] = None  # None = unbounded
    configured: bool = False

    def __post_init__(self):
        self.inject_queue: deque[Flit] = deque()
        self.user_sink: list[tuple[int, int, str, int]] = []  # (cycle, payload, flow, latency)
        self.accepted = 0
        self.denied = 0
        self.injected = 0
        self.refused = 0
        self.pulled = 0
        self.depth_samples = 0
        self.depth_total = 0
        self.depth_max = 0

    @property
    def allocated(self) -> bool:
        return self.registers.vi_id != VI_UNALLOCATED

    # -- hypervisor side -------------------------------------------------

    def configure(self, regs: VrRegisters) -> None:
        """Install wrapper registers; only affects flits built afterwards."""
        if regs.vi_id == VI_UNALLOCATED:
            raise VrStateError(f"vr {self.vr_uid}: cannot configure an unallocated region")
        regs.check()
        self.registers = regs
        self.configured = True

    def deallocate(self) -> None:
        self.registers = VrRegisters()
        self.configured = False

    # -- egress ----------------------------------------------------------

    def inject(self, payload: int, cycle: int, flow_id: str = "",
               header: Optional[Header] = None) -> bool:
        """Enqueue one egress flit; returns False when the queue is full.

        ``header`` is only for the adversarial test generator that
        bypasses the wrapper; normal traffic always uses the registers.
        """
        if header is None:
            if not (self.allocated and self.configured):
                raise VrStateError(f"vr {self.vr_uid} is not allocated/configured")
            header = Header(self.registers.vi_id,
                            self.registers.dest_router_id,
                            self.registers.dest_vr_id)
        if self.queue_depth is not None and len(self.inject_queue) >= self.queue_depth:
            self.refused += 1
            return False
        self.inject_queue.append(Flit(header, payload, cycle, flow_id, self.vr_uid))
        self.injected += 1
        return True

    def head_if_eligible(self, cycle: int) -> Optional[Flit]:
        """Head flit, if old enough to be pulled this cycle.

        The queue's empty flag is registered, so a flit becomes visible
        to the allocator the cycle after it was enqueued.
        """
        if self.inject_queue and self.inject_queue[0].inject_cycle < cycle:
            return self.inject_queue[0]
        return None

    def pull(self, cycle: int) -> Flit:
        flit = self.inject_queue.popleft()
        flit.pull_cycle = cycle
        self.pulled += 1
        return flit

    # -- ingress ---------------------------------------------------------

    def accept(self, flit: Flit, cycle: int) -> bool:
        """Access monitor: deliver the payload or deny the flit."""
        if self.allocated and flit.header.vi_id == self.registers.vi_id:
            self.user_sink.append((cycle, flit.payload, flit.flow_id,
                                   cycle - flit.inject_cycle))
            self.accepted += 1
            return True
        self.denied += 1
        return False

    def deliver_payload(self, payload: int, cycle: int, flow_id: str,
                        latency: int) -> None:
        """Header-less delivery (direct links and local compute flows)."""
        self.user_sink.append((cycle, payload, flow_id, latency))
        self.accepted += 1

    # -- metrics ---------------------------------------------------------

    def sample_depth(self) -> None:
        d = len(self.inject_queue)
        self.depth_samples += 1
        self.depth_total += d
        self.depth_max = max(self.depth_max, d)

    def mean_depth(self) -> float:
        return self.depth_total / self.depth_samples if self.depth_samples else 0.0
