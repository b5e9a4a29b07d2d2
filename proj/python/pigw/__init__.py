"""Permutation-invariant Gaussian matrix models for weight ensembles."""

from ._pigw import *  # noqa: F401,F403
from ._pigw import INVARIANT_COUNT, PARAM_COUNT, ModelParams, eval_all, fit_params

__all__ = ["INVARIANT_COUNT", "PARAM_COUNT", "ModelParams", "eval_all", "fit_params"]
