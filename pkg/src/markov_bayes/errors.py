"""Exception types shared across the package.

Every library-raised error derives from :class:`MarkovBayesError` so callers
(and the command line front end) can distinguish input problems from
likelihood failures without string matching.
"""

from __future__ import annotations


class MarkovBayesError(Exception):
    """Base class for all errors raised by this package."""


class SpaceMismatch(MarkovBayesError):
    """Two kernels or states were combined over incompatible spaces."""


class UnknownLabel(MarkovBayesError):
    """An outcome label does not belong to the space it was used with."""


class NotAProductSpace(MarkovBayesError):
    """A joint-state operation was applied to a space with no recorded factors."""


class NotStatePreserving(MarkovBayesError):
    """A kernel does not push the source state forward to the claimed target state."""

    def __init__(self, message: str, pushforward=None):
        super().__init__(message)
        self.pushforward = pushforward


class ObjectMismatch(MarkovBayesError):
    """Morphisms were composed or paired along unequal objects."""


class ZeroLikelihoodObservation(MarkovBayesError):
    """A sequential update hit an observation with zero predictive mass."""

    def __init__(self, step: int, label: str):
        super().__init__(
            f"observation {label!r} at step {step} has zero mass under the "
            f"current predictive distribution; the posterior is undefined there"
        )
        self.step = step
        self.label = label


class ZeroLikelihoodBatch(MarkovBayesError):
    """A batch update's observation tuple has zero mass under the prior predictive."""


class RankDeficient(MarkovBayesError):
    """A design or covariance matrix is singular or numerically unusable."""


class DimensionMismatch(MarkovBayesError):
    """Vector or matrix dimensions do not agree."""
