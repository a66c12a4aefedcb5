"""Synthetic tasks and seeded random instances with known ground truth."""

from .gaussian import gen_gaussian_task
from .random_instances import (
    gen_random_classifier,
    gen_random_classifier_instance,
    gen_random_dataset,
    gen_random_instance,
    random_tiny_mlp,
)

__all__ = [
    "gen_gaussian_task",
    "gen_random_classifier",
    "gen_random_classifier_instance",
    "gen_random_dataset",
    "gen_random_instance",
    "random_tiny_mlp",
]
