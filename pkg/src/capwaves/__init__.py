"""capwaves: a numerical laboratory for periodic 1-D gravity-capillary water waves."""

from .spectra import PhysicalParams

__version__ = "0.1.0"

__all__ = ["PhysicalParams", "__version__"]
