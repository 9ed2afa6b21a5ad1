"""Cycle-accurate simulator for a multi-tenant FPGA column NoC.

Virtual regions attach in pairs to a chain of reduced-radix bufferless
routers; a hypervisor-side ledger allocates regions to tenant instances
and rewires them at runtime, and per-region access monitors enforce
tenant isolation on every delivered flit.
"""

from .packet import (Flit, Header, HeaderFieldError, VI_UNALLOCATED,
                     decode_header, encode_header)
from .router import Direction, Router, RouterConfig, arbitrate, route_decision
from .topology import (Flavor, Side, Topology, TopologyConfig, TopologyError,
                       adjacent_vrs, build_topology, validate, walk_path)
from .vregion import VirtualRegion, VrRegisters, VrStateError
from .tenancy import AllocationEvent, TenancyError, TenancyLedger, VirtualInstance
from .engine import (MetricsReport, SimConfig, SimConfigError, Simulation,
                     TrafficProfile, bandwidth, run, sweep_injection)

__version__ = "0.1.0"

__all__ = [
    "Flit", "Header", "HeaderFieldError", "VI_UNALLOCATED",
    "decode_header", "encode_header",
    "Direction", "Router", "RouterConfig", "arbitrate", "route_decision",
    "Flavor", "Side", "Topology", "TopologyConfig", "TopologyError",
    "adjacent_vrs", "build_topology", "validate", "walk_path",
    "VirtualRegion", "VrRegisters", "VrStateError",
    "AllocationEvent", "TenancyError", "TenancyLedger", "VirtualInstance",
    "MetricsReport", "SimConfig", "SimConfigError", "Simulation",
    "TrafficProfile", "bandwidth", "run", "sweep_injection",
    "__version__",
]
