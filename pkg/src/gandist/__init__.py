"""Vanilla GAN and Wasserstein distances between discrete measures, with
explicit ReLU approximants and certificates."""

from .measures import DiscreteMeasure, NormSpec, empirical, new_discrete, pushforward, sample
from .transport import dual_potential, w1_exact
from .vanilla import (FunctionClassSpec, affine_example, erm_generator, ipm_distance, penalty_bounds,
                      sandwich_constants, vanilla_distance)
from .relunet import ReluNetwork, assemble
from .harness import ExperimentReport, power_bracket

__version__ = "0.1.0"
