"""Bufferless column-router model.

A router has up to four ports: north and south link ports toward the
neighbouring routers in the chain, and two region-facing ports (west
and east).  There are no input buffers; a flit waits at its source (a
region queue or the upstream router's output register) until this
router pulls it.  Each output channel has its own allocator: a
round-robin arbiter that admits one flit per cycle from the up-to
(radix-1) inputs that may legally reach it (an output is never fed
from its own port, so there is no self-loop through the crossbar).

Traversal is a two-stage pipeline per output: a flit granted at cycle
t sits in the crossbar stage, moves to the output register at t+1 and
is visible to the consumer at t+2.  Back-to-back grants sustain one
flit per cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional

from .packet import Flit

NUM_PORTS = 4


class Direction(IntEnum):
    NORTH = 0
    SOUTH = 1
    WEST_VR = 2
    EAST_VR = 3


class MisrouteError(Exception):
    """A flit's routing decision points at a port this router lacks."""


def route_decision(pkt_router_id: int, pkt_vr_id: int, self_router_id: int) -> Direction:
    """1-D routing: compare router ids, then pick the region side."""
    if pkt_router_id > self_router_id:
        return Direction.NORTH
    if pkt_router_id < self_router_id:
        return Direction.SOUTH
    if pkt_vr_id == 0:
        return Direction.WEST_VR
    return Direction.EAST_VR


def arbitrate(requests: set[int], rr_pointer: int, nports: int = NUM_PORTS) -> tuple[int, int]:
    """Grant the first requesting port at or after the pointer, cyclically.

    Returns (granted port, new pointer).  The pointer moves to the slot
    after the grant; callers keep the old pointer when no grant occurs.
    """
    if not requests:
        raise ValueError("arbitrate called with no requests")
    for step in range(nports):
        cand = (rr_pointer + step) % nports
        if cand in requests:
            return cand, (cand + 1) % nports
    raise ValueError(f"requests {requests} outside port range 0..{nports - 1}")


@dataclass
class RouterConfig:
    router_id: int
    ports: frozenset[Direction]

    @property
    def radix(self) -> int:
        return len(self.ports)


@dataclass
class RouterPlan:
    """One cycle's decisions, computed from a state snapshot."""

    emit: dict[Direction, Flit] = field(default_factory=dict)
    shift: list[Direction] = field(default_factory=list)
    grant: dict[Direction, int] = field(default_factory=dict)
    misroutes: list[tuple[int, Flit]] = field(default_factory=list)


@dataclass
class StepResult:
    emitted: dict[Direction, Flit]
    accepted: set[int]
    misrouted: list[Flit]


class Router:
    """State and per-cycle behaviour of one router."""

    def __init__(self, cfg: RouterConfig):
        self.cfg = cfg
        self.xbar: list[Optional[Flit]] = [None] * NUM_PORTS
        self.outreg: list[Optional[Flit]] = [None] * NUM_PORTS
        self.rr_ptr: list[int] = [0] * NUM_PORTS
        self.collisions: list[int] = [0] * NUM_PORTS
        self.occ = 0  # occupied crossbar + output-register slots

    # -- pure queries over the current snapshot -------------------------

    def route_output(self, flit: Flit) -> Direction:
        return route_decision(flit.header.router_id, flit.header.vr_id,
                              self.cfg.router_id)

    def offer_target(self, input_port: int, flit: Flit) -> Optional[Direction]:
        """Output the offered flit requests, or None if it misroutes here."""
        out = self.route_output(flit)
        if out not in self.cfg.ports or out == input_port:
            return None
        return out

    def requests_for(self, output: Direction,
                     offers: dict[int, Flit]) -> set[int]:
        return {p for p, f in offers.items()
                if self.offer_target(p, f) == output}

    def winner(self, output: Direction, offers: dict[int, Flit]) -> Optional[int]:
        reqs = self.requests_for(output, offers)
        if not reqs:
            return None
        grant, _ = arbitrate(reqs, self.rr_ptr[output])
        return grant

    def busy(self) -> bool:
        return self.occ > 0

    # -- plan / apply ----------------------------------------------------

    def plan(self, offers: dict[int, Flit],
             consume_ok: dict[Direction, bool]) -> RouterPlan:
        plan = RouterPlan()
        for p, f in offers.items():
            if self.offer_target(p, f) is None:
                plan.misroutes.append((p, f))
        for out in self.cfg.ports:
            held = self.outreg[out]
            emits = held is not None and consume_ok.get(out, True)
            if emits:
                plan.emit[out] = held
            shifts = self.xbar[out] is not None and (self.outreg[out] is None or emits)
            if shifts:
                plan.shift.append(out)
            space = self.xbar[out] is None or shifts
            reqs = self.requests_for(out, offers)
            if len(reqs) > 1:
                self.collisions[out] += 1
            if reqs and space:
                grant, _ = arbitrate(reqs, self.rr_ptr[out])
                plan.grant[out] = grant
        return plan

    def apply(self, plan: RouterPlan, offers: dict[int, Flit]) -> StepResult:
        accepted: set[int] = set()
        for out in plan.emit:
            self.outreg[out] = None
            self.occ -= 1
        for out in plan.shift:
            self.outreg[out] = self.xbar[out]
            self.xbar[out] = None
        for out, inp in plan.grant.items():
            self.xbar[out] = offers[inp]
            self.rr_ptr[out] = (inp + 1) % NUM_PORTS
            self.occ += 1
            accepted.add(inp)
        misrouted = []
        for inp, flit in plan.misroutes:
            accepted.add(inp)
            misrouted.append(flit)
        return StepResult(plan.emit, accepted, misrouted)

    def step(self, offers: dict[int, Flit],
             downstream_ready: Optional[dict[Direction, bool]] = None) -> StepResult:
        """Advance one cycle as a standalone unit (for direct testing).

        ``downstream_ready`` defaults to every consumer ready.
        """
        consume_ok = dict(downstream_ready or {})
        return self.apply(self.plan(offers, consume_ok), offers)

    def in_flight(self) -> int:
        return sum(f is not None for f in self.xbar) + \
            sum(f is not None for f in self.outreg)
