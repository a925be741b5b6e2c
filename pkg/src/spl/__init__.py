"""Spatial profile losses: row/column cosine similarities over image
channels, gradients and colour spaces, with exact analytic derivatives,
plus the direct pixel optimisers and metrics built on them."""

from . import _threads

try:
    # must happen before numpy is first imported (see _threads)
    _threads.apply_thread_cap()
except ValueError:
    pass  # the CLI re-validates and reports; library import stays usable

from .diffops import GradientField, gradient, gradient_adjoint
from .errors import (ChannelError, FormatError, IoError, NonFiniteError,
                     RangeTagError, ShapeError, SplError,
                     UnknownObjectiveError)
from .image import (BT601, BT709, ColourMatrix, Image, RangeTag,
                    colour_matrix_by_name, load_image, rgb_to_yuv, save_image,
                    to_symmetric, to_unit, yuv_gradient_adjoint_chain)
from .loss import (LossConfig, LossGradient, LossReport, TermWeights,
                   alpha_identity_objective, cp_loss, gp_loss,
                   profile_similarity, profile_similarity_grad, spl_objective,
                   two_target_objective)
from .metrics import MetricReport, compute_metrics, mean_abs_diff, psnr, ssim
from .optimize import (AdamParams, OptimizerState, RunTrace, adam_step,
                       colour_transfer, reconstruct)
from .verify import GradCheckResult, finite_diff_gradient, gradcheck

__all__ = [
    "AdamParams", "BT601", "BT709", "ChannelError", "ColourMatrix",
    "FormatError", "GradCheckResult", "GradientField", "Image", "IoError",
    "LossConfig", "LossGradient", "LossReport", "MetricReport",
    "NonFiniteError", "OptimizerState", "RangeTag", "RangeTagError",
    "RunTrace", "ShapeError", "SplError", "TermWeights",
    "UnknownObjectiveError", "adam_step", "alpha_identity_objective",
    "colour_matrix_by_name", "colour_transfer", "compute_metrics", "cp_loss",
    "finite_diff_gradient", "gp_loss", "gradcheck", "gradient",
    "gradient_adjoint", "load_image", "mean_abs_diff",
    "profile_similarity", "profile_similarity_grad", "psnr", "reconstruct",
    "rgb_to_yuv", "save_image", "spl_objective", "ssim", "to_symmetric",
    "to_unit", "two_target_objective", "yuv_gradient_adjoint_chain",
]

__version__ = "0.1.0"
