"""Backend selection for the scalar kernels.

The compiled extension is preferred.  Setting ``HYPERFRONT_PURE_PYTHON=1``
forces the pure-Python fallback, which is also used whenever the
extension failed to build.
"""
import os

if os.environ.get("HYPERFRONT_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _pykernels as _impl
        BACKEND = "python"

axial_velocity = _impl.axial_velocity
fluxes = _impl.fluxes
jacobians = _impl.jacobians
eigenvalues = _impl.eigenvalues
grad_lambda = _impl.grad_lambda
eigen = _impl.eigen
rarefaction = _impl.rarefaction
shock = _impl.shock
curve = _impl.curve
interior = _impl.interior
slip = _impl.slip
boundary = _impl.boundary

__all__ = ["BACKEND", "axial_velocity", "fluxes", "jacobians", "eigenvalues",
           "grad_lambda", "eigen", "rarefaction", "shock", "curve",
           "interior", "slip", "boundary"]
