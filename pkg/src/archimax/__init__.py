"""Archimax copulas from Williamson and Pickands measures.

Quick start::

    from archimax import ArchimaxCopula, ExponentialWilliamson, independence_pickands
    c = ArchimaxCopula.from_measures(ExponentialWilliamson(), independence_pickands())
    c.cdf(0.3, 0.7)   # 0.21
"""
from .archimax import ArchimaxCopula, ComponentMasses, KernelAtom, KernelAtomList, LevelSetDescription
from .generator import ExponentialGenerator, Generator
from .measures import (
    CantorPart,
    DensitySegment,
    ExponentialWilliamson,
    MixedMeasure1D,
    ValidationReport,
    Violation,
    comonotone_pickands,
    independence_pickands,
    validate_pickands,
    validate_williamson,
)
from .pickands import PickandsFunction
from .sampler import SampleBatch, empirical_kendall, sample

__all__ = [
    "ArchimaxCopula", "CantorPart", "ComponentMasses", "DensitySegment", "ExponentialGenerator",
    "ExponentialWilliamson", "Generator", "KernelAtom", "KernelAtomList", "LevelSetDescription",
    "MixedMeasure1D", "PickandsFunction", "SampleBatch", "ValidationReport", "Violation",
    "comonotone_pickands", "empirical_kendall", "independence_pickands", "sample",
    "validate_pickands", "validate_williamson",
]
__version__ = "0.1.0"
