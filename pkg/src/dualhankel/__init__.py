"""Dual fractional Hankel transform and weighted slice Bergman spaces.

Modules:

- :mod:`quat`: quaternion arithmetic and slice decomposition
- :mod:`specfun`: gamma, Bessel ``I``, Laguerre polynomials and their zeros
- :mod:`quad`: Gauss rules for the half line and the unit interval, and disk rules
- :mod:`kernels`: the fractional Hankel kernel and the Bergman kernel
- :mod:`ops`: the transform, its adjoint and related operators
- :mod:`spectral`: singular values, Schatten sums and decay fits
- :mod:`cli`: the ``dualhankel`` command
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, DivergenceError, DomainError, SliceMismatchError
from .quat import Quaternion, SlicePoint
from .specfun import Params

__all__ = [
    "__version__",
    "Quaternion",
    "SlicePoint",
    "Params",
    "DomainError",
    "ConvergenceError",
    "DivergenceError",
    "SliceMismatchError",
]
