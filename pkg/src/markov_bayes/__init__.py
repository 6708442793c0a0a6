"""Exact finite Markov kernels, Bayesian inversion, and lens-shaped learners."""

from .errors import (
    DimensionMismatch,
    MarkovBayesError,
    NotAProductSpace,
    NotStatePreserving,
    ObjectMismatch,
    RankDeficient,
    SpaceMismatch,
    UnknownLabel,
    ZeroLikelihoodBatch,
    ZeroLikelihoodObservation,
)
from .finstoch import (
    UNIT,
    FinSpace,
    Kernel,
    State,
    associator,
    associator_inv,
    compose,
    copy,
    delta,
    discard,
    format_rat,
    identity,
    interchanger,
    left_unitor,
    left_unitor_inv,
    pair_label,
    parse_rat,
    product,
    relabel,
    right_unitor,
    right_unitor_inv,
    state,
    state_tensor,
    swap,
    tensor,
    uniform_row,
    uniform_state,
)
from .conditioning import (
    Disintegration,
    Support,
    as_equal,
    canonicalize,
    condition,
    disintegrate,
    invert,
    is_uniquely_invertible_at,
    jointify,
    support,
)
from .ps import (
    PS_UNIT,
    PSMorphism,
    PSObject,
    dagger,
    ps_associator,
    ps_associator_inv,
    ps_compose,
    ps_identity,
    ps_induced,
    ps_left_unitor,
    ps_left_unitor_inv,
    ps_morphism,
    ps_right_unitor,
    ps_right_unitor_inv,
    ps_tensor,
)
from .paralens import (
    LensMorphism,
    ParaLensMorphism,
    ParaMorphism,
    bayes_learn,
    bayes_lens,
    lens_compose,
    lens_embed,
    lens_identity,
    lens_reparametrize,
    para_compose,
    para_embed,
    para_identity,
    para_lens_compose,
    reparametrize,
)
from .learning import (
    Model,
    PosteriorTrace,
    TrainingSet,
    batch_update,
    batch_update_factorized,
    batch_update_literal,
    full_predictive,
    joint_channel,
    observation_space,
    output_marginal,
    output_marginal_mismatch,
    posterior_channel,
    predictive,
    replicated_joint_channel,
    sequential_update,
)
from .gauss import (
    GaussChannel,
    GaussPosterior,
    RegressionData,
    fit_posterior,
    gauss_batch,
    gauss_sequential,
    map_estimate,
    predictive_density,
)

__all__ = [name for name in dir() if not name.startswith("_")]
