"""Zero-shot CT super-resolution.

Thin Python layer over the compiled core: parallel-beam projection and
filtered back-projection, physics-consistent detector resampling, zero-shot
training of the unrolled reconstruction network, and image-quality metrics
(RMSE, SSIM, edge-method MTF).
"""

try:
    from ._sadir import *  # noqa: F401,F403  (installed wheel layout)
    from ._sadir import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: module sits on PYTHONPATH
    from _sadir import *  # noqa: F401,F403
    from _sadir import __doc__ as _core_doc  # noqa: F401

__version__ = "1.0.0"
