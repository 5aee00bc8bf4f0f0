from .base import IsogenyOracle, OracleCapabilityError, VarietyHandle
from .concrete import ConcreteOracle, KernelInfo, StubOracle, identify_kernel
from .simulated import SimulatedOracle, SimulatedWorld

__all__ = ["IsogenyOracle", "OracleCapabilityError", "VarietyHandle", "ConcreteOracle", "StubOracle",
           "KernelInfo", "identify_kernel", "SimulatedOracle", "SimulatedWorld"]
