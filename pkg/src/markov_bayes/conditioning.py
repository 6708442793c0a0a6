"""Joint states, disintegration, and exact Bayesian inversion.

The central construction: a state ``pi`` on ``X`` and a kernel ``f: X -> Y``
determine a joint state on ``X (x) Y``; going the other way, a joint state
splits into a marginal and a conditional channel.  Bayesian inversion turns
``f`` around against ``pi``.  Wherever a conditional is undefined because the
conditioning event has probability zero, the row is filled with the uniform
distribution; that fixed choice makes inverses canonical and lets equality
of conditionals be tested with ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAProductSpace, SpaceMismatch
from .finstoch import (
    RAT0,
    Kernel,
    FinSpace,
    State,
    compose,
    copy,
    identity,
    product,
    state,
    tensor,
    uniform_row,
)


@dataclass(frozen=True)
class Support:
    """The set of labels a state gives positive probability."""

    space: FinSpace
    members: frozenset[str]


@dataclass(frozen=True)
class Disintegration:
    """A joint state split into its first marginal and the induced channel."""

    marginal: State
    channel: Kernel


def _require_state(pi: Kernel) -> None:
    if not pi.is_state():
        raise SpaceMismatch(f"{pi!r} is not a state")


def support(pi: State) -> Support:
    _require_state(pi)
    members = frozenset(
        label for label, p in zip(pi.target.elements, pi.probs) if p
    )
    return Support(pi.target, members)


def canonicalize(f: Kernel, pi: State) -> Kernel:
    """Replace every row of ``f`` outside the support of ``pi`` with uniform.

    This picks a fixed representative of the class of kernels that agree
    almost surely under ``pi``.
    """
    _require_state(pi)
    if pi.target != f.source:
        raise SpaceMismatch(
            f"state on {pi.target.name!r} cannot canonicalize {f!r}"
        )
    filler = uniform_row(len(f.target))
    rows = tuple(
        row if p else filler for p, row in zip(pi.probs, f.rows)
    )
    if rows == f.rows:
        return f
    return Kernel(f.source, f.target, rows)


def jointify(pi: State, f: Kernel) -> State:
    """The joint state on ``X (x) Y`` of ``pi`` on ``X`` and ``f: X -> Y``.

    Built by copying the ``X`` outcome and feeding one copy through ``f``,
    so the result weighs ``(x, y)`` by ``pi(x) * f(x)(y)``.
    """
    _require_state(pi)
    if pi.target != f.source:
        raise SpaceMismatch(
            f"state on {pi.target.name!r} does not match source of {f!r}"
        )
    x = f.source
    return compose(pi, compose(copy(x), tensor(identity(x), f)))


def disintegrate(omega: State) -> Disintegration:
    """Split a joint state into its first marginal and a conditional channel.

    The channel row at a marginal-zero point is uniform.  Any two channels
    that disintegrate the same joint state agree wherever the marginal is
    positive, so the uniform fill makes the result unique outright.
    """
    _require_state(omega)
    if omega.target.factors is None:
        raise NotAProductSpace(
            f"space {omega.target.name!r} has no recorded product structure"
        )
    x, y = omega.target.factors
    ny = len(y)
    probs = omega.probs
    marg = []
    rows = []
    for i in range(len(x)):
        block = probs[i * ny : (i + 1) * ny]
        total = sum(block, RAT0)
        marg.append(total)
        if total:
            rows.append(tuple(p / total for p in block))
        else:
            rows.append(uniform_row(ny))
    return Disintegration(
        marginal=state(x, marg), channel=Kernel(x, y, tuple(rows))
    )


def invert(f: Kernel, pi: State) -> Kernel:
    """The Bayesian inverse of ``f: X -> Y`` with respect to ``pi`` on ``X``.

    The row of the result at ``y`` is the conditional of ``x`` given ``y``
    under the joint state of ``pi`` and ``f``; rows at outputs the
    pushforward never produces are uniform.
    """
    _require_state(pi)
    if pi.target != f.source:
        raise SpaceMismatch(
            f"state on {pi.target.name!r} does not match source of {f!r}"
        )
    push = compose(pi, f).probs
    priors = pi.probs
    nx = len(f.source)
    rows = []
    for j, mass in enumerate(push):
        if mass:
            rows.append(
                tuple(f.rows[i][j] * priors[i] / mass for i in range(nx))
            )
        else:
            rows.append(uniform_row(nx))
    return Kernel(f.target, f.source, tuple(rows))


def as_equal(f: Kernel, g: Kernel, pi: State) -> bool:
    """Whether ``f`` and ``g`` agree almost surely under ``pi``.

    Defined as equality of the two joint states built from ``pi``, which is
    the same as the rows of ``f`` and ``g`` agreeing on the support of
    ``pi``.
    """
    if f.source != g.source or f.target != g.target:
        raise SpaceMismatch(f"{f!r} and {g!r} live over different spaces")
    return jointify(pi, f) == jointify(pi, g)


def is_uniquely_invertible_at(f: Kernel, pi: State, y: str) -> bool:
    """Whether the pushforward of ``pi`` through ``f`` gives ``y`` positive mass.

    Exactly at such outputs every Bayesian inverse of ``f`` has the same
    row, so conditioning on ``y`` is unambiguous.
    """
    _require_state(pi)
    if pi.target != f.source:
        raise SpaceMismatch(
            f"state on {pi.target.name!r} does not match source of {f!r}"
        )
    j = f.target.index(y)
    return compose(pi, f).probs[j] != 0


def condition(s: Kernel) -> Kernel:
    """Turn ``s: A -> X (x) Y`` into the conditional ``X (x) A -> Y``.

    Each input ``a`` names a joint distribution; the result reads off the
    conditional of ``Y`` given ``X = x`` inside it, with the uniform fill at
    pairs ``(x, a)`` whose marginal probability is zero.
    """
    if s.target.factors is None:
        raise NotAProductSpace(
            f"target {s.target.name!r} of {s!r} has no recorded product structure"
        )
    x, y = s.target.factors
    a = s.source
    channels = [
        disintegrate(state(s.target, row)).channel for row in s.rows
    ]
    src = product(x, a)
    na = len(a)
    rows = tuple(
        channels[i % na].rows[i // na] for i in range(len(src))
    )
    return Kernel(src, y, rows)
