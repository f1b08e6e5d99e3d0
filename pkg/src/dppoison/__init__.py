"""Data-poisoning attacks on differentially private ERM learners.

The package has three layers:

* victims: regularized logistic regression and norm-constrained ridge
  regression, privatized by objective or output perturbation
  (:mod:`dppoison.learners`, :mod:`dppoison.core`);
* attacks: item selection and (stochastic) gradient descent on the
  poisoned items' coordinates, driven by implicit differentiation of the
  trained model (:mod:`dppoison.gradients`, :mod:`dppoison.attacks`);
* analysis: closed-form lower bounds on the achievable attack cost and
  the minimum poisoning budget, plus a Monte-Carlo experiment harness
  (:mod:`dppoison.bounds`, :mod:`dppoison.harness`).
"""

from .attacks import (
    AttackConfig,
    AttackMode,
    AttackTrace,
    SelectionMethod,
    relaxed_attack,
    run_attack,
    deep_scores,
    select_deep,
    select_shallow,
    shallow_scores,
    top_k_indices,
)
from .bounds import (
    BoundQuery,
    lower_bound_approx,
    lower_bound_pure,
    min_items_approx,
    min_items_pure,
)
from .core import (
    BaseLearner,
    CostSpec,
    Dataset,
    Goal,
    LabeledItem,
    Mechanism,
    ModelParams,
    Sign,
    VictimSpec,
    eval_cost,
    modification_distance,
    modification_distances,
    project_item,
    sigmoid,
    softplus,
)
from .gradients import (
    ItemGradient,
    batch_item_gradients,
    cost_gradient,
    finite_difference_oracle,
    grad_obj_logistic,
    grad_obj_ridge,
    grad_out_logistic,
    grad_out_ridge,
)
from .learners import (
    DEFAULT_SETTINGS,
    SolverError,
    SolverSettings,
    sample_noise,
    train_base_logistic,
    train_base_ridge_constrained,
    train_mechanism,
    train_objective_perturbed_logistic,
)
from .rng import subseed, substream

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "AttackMode",
    "AttackTrace",
    "BaseLearner",
    "BoundQuery",
    "CostSpec",
    "Dataset",
    "DEFAULT_SETTINGS",
    "Goal",
    "ItemGradient",
    "LabeledItem",
    "Mechanism",
    "ModelParams",
    "SelectionMethod",
    "Sign",
    "SolverError",
    "SolverSettings",
    "VictimSpec",
    "batch_item_gradients",
    "cost_gradient",
    "eval_cost",
    "finite_difference_oracle",
    "grad_obj_logistic",
    "grad_obj_ridge",
    "grad_out_logistic",
    "grad_out_ridge",
    "lower_bound_approx",
    "lower_bound_pure",
    "min_items_approx",
    "min_items_pure",
    "modification_distance",
    "modification_distances",
    "project_item",
    "sigmoid",
    "softplus",
    "relaxed_attack",
    "run_attack",
    "sample_noise",
    "deep_scores",
    "select_deep",
    "select_shallow",
    "shallow_scores",
    "subseed",
    "substream",
    "top_k_indices",
    "train_base_logistic",
    "train_base_ridge_constrained",
    "train_mechanism",
    "train_objective_perturbed_logistic",
    "__version__",
]
