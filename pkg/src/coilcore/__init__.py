"""Coil-core meminductor simulation toolkit.

Device-level magnetization dynamics and constitutive curves, m-H
hysteresis loop generation, a netlist-driven series-RLC transient engine,
and the pulse-train resonance-learning (SPS) experiment built on top.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .amoeba import Event, SpsConfig, SpsReport, build_sps_stimulus, \
    detect_responses, run_sps
from .device import (CoilCoreParams, MagnetizationState, element_voltage,
                     flux_of_charge, flux_slope, integrate_magnetization,
                     magnetization_closed_form, magnetization_rate,
                     rho_and_L_constant_current, rho_variant_nested_tanh)
from .engine import (CircuitState, OdeSystem, SecondOrderMetrics,
                     analyze_second_order, compile_circuit, envelope,
                     measure_ringdown, simulate_transient)
from .errors import (CoilcoreError, ConfigError, DomainError, NetlistError,
                     SimulationError)
from .hysteresis import (BranchFit, Loop, LoopMetrics, LoopSample,
                         fit_tanh_branches, full_excursion_amplitude,
                         loop_metrics, loop_to_csv, simulate_mh_loop,
                         tanh_branch_model)
from .netlist import (CoilCoreInductor, CompiledCircuit, LinearInductor,
                      NetlistDocument, StaircaseInductor, format_netlist,
                      parse_netlist, validate_circuit)
from .trace import CANONICAL_COLUMNS, Trace
from .waveforms import Waveform

__all__ = [
    "BACKEND", "BranchFit", "CANONICAL_COLUMNS", "CircuitState",
    "CoilCoreInductor", "CoilCoreParams", "CoilcoreError", "CompiledCircuit",
    "ConfigError", "DomainError", "Event", "LinearInductor", "Loop",
    "LoopMetrics", "LoopSample", "MagnetizationState", "NetlistDocument",
    "NetlistError", "OdeSystem", "SecondOrderMetrics", "SimulationError",
    "SpsConfig", "SpsReport", "StaircaseInductor", "Trace", "Waveform",
    "analyze_second_order", "build_sps_stimulus", "compile_circuit",
    "detect_responses", "element_voltage", "envelope", "fit_tanh_branches",
    "flux_of_charge", "flux_slope", "format_netlist",
    "full_excursion_amplitude", "integrate_magnetization", "loop_metrics",
    "loop_to_csv", "magnetization_closed_form", "magnetization_rate",
    "measure_ringdown", "parse_netlist", "rho_and_L_constant_current",
    "rho_variant_nested_tanh", "run_sps", "simulate_mh_loop",
    "simulate_transient", "tanh_branch_model", "validate_circuit",
]
