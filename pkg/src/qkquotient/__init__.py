"""Exact and numerical tools for torus quaternion-Kähler quotients of HP^7 and HP^6."""

from .weights import OmegaMatrix, ThetaMatrix, minors_omega, minors_theta

__version__ = "0.1.0"

__all__ = ["ThetaMatrix", "OmegaMatrix", "minors_theta", "minors_omega", "__version__"]
