"""Free subgroups of order-automorphism groups of the rationals, with exact witnesses."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND  # noqa: E402
