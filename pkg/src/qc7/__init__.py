"""qc7: exact-arithmetic quaternionic contact geometry in dimension seven.

Verifies the structure equations, Biquard connection, curvature constants,
pointwise and integral identity suites, and the sharp first-eigenvalue bound
lambda_1 = 4 of the sub-Laplacian on the unit 3-Sasakian sphere S^7, with a
flat quaternionic Heisenberg model as a second test bed.  All geometry is
exact rational arithmetic; floats appear only in eigensolver advisories.
"""

from .kernel import backend_name

__version__ = "0.1.0"

__all__ = ["backend_name", "__version__"]
