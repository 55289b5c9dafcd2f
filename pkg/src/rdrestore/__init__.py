"""Image restoration with a coupled nonlocal reaction-diffusion system."""

from .degrade import NoiseSpec, add_gaussian_noise, degrade
from .diffusion import ModelParams, coeff_a, coeff_c, gray_indicator, texture_detector
from .grid import DomainError, GridGeometry
from .kernels import (Kernel, KernelSpectrum, adjoint_convolve, average_kernel, convolve,
                      disk_kernel, kernel_spectrum, motion_kernel)
from .metrics import psnr, ssim
from .solver import (CFLViolation, NumericalAbort, RunResult, SolverConfig,
                     amplification_factor, run)

__version__ = "0.1.0"
