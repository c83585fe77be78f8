"""Analytic torsion of bounded generalized cones over flat tori."""

import json

from . import _core
from ._core import (
    ConeTorsionError,
    ConfigError,
    CrossSection,
    CutoffInsufficient,
    DomainError,
    InvalidArgument,
    PoleError,
    StiffnessError,
    Unsupported,
    ab_constant,
    coclosed_levels,
    flat_torus,
    harmonic_det,
    load_config,
    log_torsion_truncated,
    model_det_ratio,
    modified_bessel,
    olver_u,
    olver_v,
    res_term,
    rescale_torus,
    shifted_zeta,
    t_eta_lambda,
    top_term,
    tors_scaling_profile,
    tors_term,
    torsion_difference,
)

__version__ = _core.__version__


def log_torsion_cone(cs, **kwargs):
    """Torsion report for the bounded cone over ``cs`` as a dict."""
    return json.loads(_core.log_torsion_cone(cs, **kwargs))


def unit_torus(n=2, rank=1):
    import numpy as np

    return flat_torus(np.eye(n), rank)
