"""Numerical library for the scalar Fourier transform over the Heisenberg fan.

The package discretizes the joint spectrum of the sublaplacian and the
central derivative on the Heisenberg group (the "fan" of rays
tau = (2k+n)|lambda| plus its limiting ray), and implements the scalar-valued
Fourier transform indexed by it: forward and normalized transforms, the
inversion and Plancherel formulas, twisted convolution, the radial
Gelfand theory, Hecke-Bochner dimension shifts, truncated Weyl calculus, and
verification harnesses for the decay and uncertainty theorems.
"""

__version__ = "0.1.0"

from .fan import FanGrid, FanPoint, fan_distance, normalization, tau_of
from .field import (GridSpec, RadialProfile, SampledHField, SeparableHField,
                    ZField, central_transform, integrate_z, l2_norm_h, l2_norm_z)
from .gelfand import HeatKernel, gelfand_transform, spherical_function
from .hecke import HarmonicDegree, a_shift
from .strichartz import (StrichartzCoefficients, forward, inverse, normalize,
                         plancherel_pair, projector_residual, synthesize)
from .twisted import twisted_conv
from .weyl import WeylMatrix, group_fourier, weyl_transform

__all__ = [
    "__version__",
    "FanGrid", "FanPoint", "fan_distance", "normalization", "tau_of",
    "GridSpec", "RadialProfile", "SampledHField", "SeparableHField", "ZField",
    "central_transform", "integrate_z", "l2_norm_h", "l2_norm_z",
    "HeatKernel", "gelfand_transform", "spherical_function",
    "HarmonicDegree", "a_shift",
    "StrichartzCoefficients", "forward", "inverse", "normalize",
    "plancherel_pair", "projector_residual", "synthesize",
    "twisted_conv", "WeylMatrix", "group_fourier", "weyl_transform",
]
