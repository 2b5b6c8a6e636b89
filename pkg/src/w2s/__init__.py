"""Sample-efficient voting classifiers from weak learners.

Train with `train_optimal` (majority of boosted majorities over overlapping
sub-samples), `adaboost_star_nu` (margin-target boosting), or plain
`adaboost`. `subvote` holds the sparse sub-voter estimators and tail-bound
verifiers; `hardness` builds instances where every m-sample learner must err.
"""

from ._kernel import BACKEND, available_backends
from .boost import adaboost, adaboost_star_nu, boosting_round, round_budget
from .core import (ConstantHypothesis, Dataset, MajorityOfMajorities,
                   SampleDistribution, Stump, TableHypothesis,
                   VotingClassifier, ZeroVoter, hard_label, hard_labels,
                   load_dataset_csv, margin, margins, min_margin,
                   save_dataset_csv, zero_one_loss)
from .errors import (CheckFailureError, ContractViolationError,
                     GeneratorInfeasibleError, InputError,
                     MarginShortfallError, W2SError, WeakLearnerError)
from .hardness import (HardInstance, bayes_floor, build_domain, build_instance,
                       certify_concept, hard_distribution, hard_weak_learner)
from .harness import (ExperimentConfig, SyntheticConcept, gen_dataset,
                      random_concept, run_curve, spot_check_strong_bound)
from .optimal import OptimalLearnerConfig, train_optimal
from .rng import derive_rng, seed_sequence
from .subsample import SubsamplePlan, plan_for, sub_sample
from .subvote import (LemmaReport, LtEstimate, estimate_Lt,
                      exact_error_probability, sample_g, verify_deviation_tail,
                      verify_loss_sandwich, verify_margin_loss,
                      verify_smallness_tail)
from .weak import (ExhaustiveLearner, StumpLearner, WeakLearnerContract,
                   call_weak_learner, train_stump, weighted_edge)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "available_backends",
    "adaboost", "adaboost_star_nu", "boosting_round", "round_budget",
    "ConstantHypothesis", "Dataset", "MajorityOfMajorities",
    "SampleDistribution", "Stump", "TableHypothesis", "VotingClassifier",
    "ZeroVoter", "hard_label", "hard_labels", "load_dataset_csv", "margin",
    "margins", "min_margin", "save_dataset_csv", "zero_one_loss",
    "CheckFailureError", "ContractViolationError", "GeneratorInfeasibleError",
    "InputError", "MarginShortfallError", "W2SError", "WeakLearnerError",
    "HardInstance", "bayes_floor", "build_domain", "build_instance",
    "certify_concept", "hard_distribution", "hard_weak_learner",
    "ExperimentConfig", "SyntheticConcept", "gen_dataset", "random_concept",
    "run_curve", "spot_check_strong_bound",
    "OptimalLearnerConfig", "train_optimal",
    "derive_rng", "seed_sequence",
    "SubsamplePlan", "plan_for", "sub_sample",
    "LemmaReport", "LtEstimate", "estimate_Lt", "exact_error_probability",
    "sample_g", "verify_deviation_tail", "verify_loss_sandwich",
    "verify_margin_loss", "verify_smallness_tail",
    "ExhaustiveLearner", "StumpLearner", "WeakLearnerContract",
    "call_weak_learner", "train_stump", "weighted_edge",
    "__version__",
]
