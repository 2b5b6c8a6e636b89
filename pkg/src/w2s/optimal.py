"""The sample-optimal strong learner.

Train one margin-boosted voter per recursive sub-sample and predict by the
unweighted sign-majority of those voters. Voter i trains on index set i of
the plan with per-voter seed cfg.seed XOR i; excess samples beyond the
power-of-4 cutoff are ignored.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .boost import adaboost_star_nu
from .core import MajorityOfMajorities
from .errors import ContractViolationError, InputError
from .rng import derive_rng
from .subsample import plan_for
from .weak import StumpLearner


@dataclass(frozen=True)
class OptimalLearnerConfig:
    gamma: float
    nu: float = None
    learner: str = "stump"
    seed: int = 0
    threads: int = None

    def __post_init__(self):
        if not 0.0 < self.gamma < 0.5:
            raise InputError("gamma must be in (0, 1/2)")
        if self.nu is not None and not 0.0 < self.nu <= self.gamma:
            raise InputError("nu must be in (0, gamma]")
        if self.threads is not None and self.threads < 1:
            raise InputError("threads must be positive")

    @property
    def resolved_nu(self):
        return self.gamma / 2.0 if self.nu is None else self.nu


def _thread_count(cfg):
    if cfg.threads is not None:
        return cfg.threads
    return max(1, int(os.environ.get("W2S_THREADS", "1")))


def train_optimal(dataset, cfg, learner=None, return_info=False):
    """MajorityOfMajorities over one boosted voter per sub-sample.

    Contract violations inside a voter are re-raised with the offending
    sub-sample index prepended.
    """
    if learner is None:
        if cfg.learner != "stump":
            raise InputError(f"unknown built-in learner {cfg.learner!r}")
        learner = StumpLearner()
    plan = plan_for(len(dataset))

    def train_one(i):
        sub = dataset.subset(plan.index_sets[i])
        rng = derive_rng(cfg.seed ^ i, "optimal.voter")
        try:
            return adaboost_star_nu(sub, learner, cfg.gamma, cfg.resolved_nu,
                                    rng=rng, return_info=True)
        except ContractViolationError as exc:
            err = type(exc)(f"sub-sample {i}: {exc}")
            err.__dict__.update(exc.__dict__)
            raise err from exc

    threads = _thread_count(cfg)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(train_one, range(plan.k)))
    else:
        results = [train_one(i) for i in range(plan.k)]
    model = MajorityOfMajorities([voter for voter, _ in results])
    if return_info:
        infos = [info for _, info in results]
        return model, {"plan": plan, "voters": infos,
                       "min_margin": min(info["min_margin"] for info in infos)}
    return model
