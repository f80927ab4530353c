"""Deterministic synthetic interaction corpus.

Emulates a population of analytics users driving an AutoML-style assistant:
users with hidden preferences request tasks over synthetic datasets, pick
intents consistent with the dataset's target type (with a small noise rate
for discretization-style use cases), metrics and algorithm constraints drawn
from intent-compatible pools, linear workflows ending in a matching
predictor, and biased feedback scores. The same seed always produces a
byte-identical corpus.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from . import schema as sc
from .profiling import DatasetProfile, dataset_iri, profile_triples
from .store import Graph, Term, Triple, iri, lit

EXPERTISE_LEVELS = ("novice", "intermediate", "expert")

# metric -> sampling range for pseudo evaluation results
METRIC_RANGES = {
    "da:Accuracy": (0.5, 1.0),
    "da:F1-Score": (0.4, 1.0),
    "da:AUC": (0.5, 1.0),
    "da:Precision": (0.4, 1.0),
    "da:Recall": (0.4, 1.0),
    "da:R2": (0.0, 1.0),
    "da:MSE": (0.01, 100.0),
    "da:RMSE": (0.1, 10.0),
    "da:MAE": (0.1, 10.0),
    "da:Silhouette": (0.0, 1.0),
}


class SynthError(Exception):
    pass


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 7
    n_users: int = 40
    n_datasets_cat: int = 68
    n_datasets_num: int = 28
    tasks_per_dataset: int = 5
    constraint_rate: float = 0.4
    preference_rate: float = 0.3
    max_steps: int = 3
    intent_noise: float = 0.05

    def __post_init__(self):
        for rate_name in ("constraint_rate", "preference_rate", "intent_noise"):
            rate = getattr(self, rate_name)
            if not 0.0 <= rate <= 1.0:
                raise SynthError(f"{rate_name} must lie in [0, 1]")
        for count_name in (
            "n_users",
            "n_datasets_cat",
            "n_datasets_num",
            "tasks_per_dataset",
            "max_steps",
        ):
            if getattr(self, count_name) < 1:
                raise SynthError(f"{count_name} must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "SynthConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise SynthError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _log_uniform(rng: random.Random, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def synth_dataset_profiles(cfg: SynthConfig) -> list:
    """Synthetic dataset profiles: log-uniform sizes, valid field splits."""
    rng = random.Random(cfg.seed * 31 + 1)
    profiles = []
    for kind, count in (("cat", cfg.n_datasets_cat), ("num", cfg.n_datasets_num)):
        for i in range(count):
            n_instances = int(round(_log_uniform(rng, 50, 100_000)))
            n_features = int(round(_log_uniform(rng, 2, 500)))
            n_numeric = rng.randint(0, n_features)
            pct_missing = 0.0 if rng.random() < 0.6 else round(rng.uniform(0.0, 0.3), 4)
            common = dict(
                name=f"synth-{kind}-{i:03d}",
                n_instances=n_instances,
                n_features=n_features,
                n_numeric=n_numeric,
                n_categorical=n_features - n_numeric,
                pct_missing=pct_missing,
            )
            if kind == "cat":
                profiles.append(
                    DatasetProfile(
                        target_type="categorical",
                        n_classes=rng.randint(2, 12),
                        imbalance=round(_log_uniform(rng, 1.0, 20.0), 4),
                        **common,
                    )
                )
            else:
                profiles.append(
                    DatasetProfile(
                        target_type="numerical",
                        std_target=round(_log_uniform(rng, 0.1, 1000.0), 4),
                        **common,
                    )
                )
    return profiles


@dataclass
class _UserModel:
    entity: Term
    expertise: str
    bias: float  # shifts feedback scores
    preferred_metric: dict  # ml_task -> metric
    preferred_predictor: dict  # ml_task -> algorithm


def _build_users(schema: sc.Schema, cfg: SynthConfig, rng: random.Random) -> list:
    users = []
    tasks_with_algorithms = [
        t for t in schema.all_ml_tasks() if schema.predictors_for(t)
    ]
    for i in range(cfg.n_users):
        preferred_metric = {}
        preferred_predictor = {}
        for task in tasks_with_algorithms:
            metrics = sorted(schema.metrics_for(task), key=lambda t: t.value)
            predictors = sorted(schema.predictors_for(task), key=lambda t: t.value)
            if metrics:
                preferred_metric[task] = rng.choice(metrics)
            preferred_predictor[task] = rng.choice(predictors)
        users.append(
            _UserModel(
                entity=iri(f"da:user/u{i:03d}"),
                expertise=rng.choice(EXPERTISE_LEVELS),
                bias=rng.uniform(-1.0, 1.0),
                preferred_metric=preferred_metric,
                preferred_predictor=preferred_predictor,
            )
        )
    return users


def _weighted_choice(rng: random.Random, items: list, weights: list):
    return rng.choices(items, weights=weights, k=1)[0]


def _choose_preprocessor(schema: sc.Schema, rng: random.Random, excluded: set) -> Optional[Term]:
    pool = sorted(schema.preprocessors() - excluded, key=lambda t: t.value)
    if not pool:
        return None
    # not preprocessing at all shows up frequently in AutoML outputs
    weights = [3.0 if p.value == "da:NoPreprocessing" else 1.0 for p in pool]
    return _weighted_choice(rng, pool, weights)


def synthesize(schema: sc.Schema, cfg: SynthConfig) -> Graph:
    """Generate the full corpus graph: ontology, users, datasets and tasks."""
    rng = random.Random(cfg.seed)
    g = schema.graph.copy()

    users = _build_users(schema, cfg, rng)
    for u in users:
        g.add(Triple(u.entity, sc.RDF_TYPE, sc.USER))
        g.add(Triple(u.entity, sc.EXPERTISE_LEVEL, lit(u.expertise)))

    profiles = synth_dataset_profiles(cfg)
    for p in profiles:
        g.add_all(profile_triples(p, reify=True))

    hyperparams = sorted(
        (t.subject for t in schema.graph.triples(r=sc.RDF_TYPE, o=sc.HYPERPARAMETER)),
        key=lambda t: t.value,
    )
    mistask_pool = (sc.CLASSIFICATION, sc.REGRESSION, sc.CLUSTERING)

    task_counter = 0
    for p in profiles:
        ds = dataset_iri(p.name)
        consistent = sc.CLASSIFICATION if p.target_type == "categorical" else sc.REGRESSION
        for _ in range(cfg.tasks_per_dataset):
            task_counter += 1
            user = rng.choice(users)
            ml_task = consistent
            if rng.random() < cfg.intent_noise:
                ml_task = rng.choice([t for t in mistask_pool if t != consistent])
            _emit_task(g, schema, cfg, rng, task_counter, user, ds, ml_task, hyperparams)
    return g


def _emit_task(g, schema, cfg, rng, n, user, ds, ml_task, hyperparams):
    task = iri(f"da:task/t{n:05d}")
    wf = iri(f"da:workflow/t{n:05d}")
    g.add(Triple(task, sc.RDF_TYPE, sc.TASK))
    g.add(Triple(task, sc.REQUESTED_BY, user.entity))
    g.add(Triple(task, sc.HAS_INTENT, ml_task))
    g.add(Triple(task, sc.USES_DATASET, ds))
    g.add(Triple(task, sc.ACHIEVED_BY, wf))

    metrics = sorted(schema.metrics_for(ml_task), key=lambda t: t.value)
    preferred = user.preferred_metric.get(ml_task)
    if preferred is not None and rng.random() < 0.7:
        metric = preferred
    else:
        metric = rng.choice(metrics)
    g.add(Triple(task, sc.HAS_REQUIREMENT, metric))

    # up to two algorithm constraints, drawn from the intent's closure
    pool = sorted(schema.algorithms_for(ml_task), key=lambda t: t.value)
    used_algorithms = set()
    excluded = set()
    required = []
    for slot in range(2):
        if rng.random() >= cfg.constraint_rate:
            continue
        candidates = [a for a in pool if a not in used_algorithms]
        if not candidates:
            break
        favorite = user.preferred_predictor.get(ml_task)
        if favorite in candidates and rng.random() < 0.6:
            algorithm = favorite
        else:
            algorithm = rng.choice(candidates)
        used_algorithms.add(algorithm)
        mode = "use" if rng.random() < 0.8 else "exclude"
        if mode == "use":
            required.append(algorithm)
        else:
            excluded.add(algorithm)
        c = iri(f"da:constraint/t{n:05d}/c{slot}")
        g.add(Triple(task, sc.HAS_CONSTRAINT, c))
        g.add(Triple(c, sc.RDF_TYPE, sc.ALGORITHM_CONSTRAINT))
        g.add(Triple(c, sc.ON_ALGORITHM, algorithm))
        g.add(Triple(c, sc.CONSTRAINT_MODE, lit(mode)))
        g.add(Triple(c, sc.IS_HARD, lit(rng.random() >= cfg.preference_rate)))

    g.add(Triple(wf, sc.RDF_TYPE, sc.WORKFLOW))

    predictor = _pick_predictor(schema, rng, user, ml_task, required, excluded)
    n_steps = rng.randint(1, cfg.max_steps)
    step_algorithms = []
    required_preprocessors = [
        a for a in required if schema.algorithm_kind(a) == "preprocessor"
    ]
    for _ in range(n_steps - 1):
        if required_preprocessors:
            step_algorithms.append(required_preprocessors.pop(0))
        else:
            pre = _choose_preprocessor(schema, rng, excluded)
            if pre is not None:
                step_algorithms.append(pre)
    step_algorithms.append(predictor)

    steps = [iri(f"da:step/t{n:05d}/s{j}") for j in range(len(step_algorithms))]
    for step, algorithm in zip(steps, step_algorithms):
        g.add(Triple(wf, sc.HAS_STEP, step))
        g.add(Triple(step, sc.RDF_TYPE, sc.STEP))
        g.add(Triple(step, sc.USES_ALGORITHM, algorithm))
    for a, b in zip(steps, steps[1:]):
        g.add(Triple(a, sc.FOLLOWED_BY, b))
    if hyperparams and rng.random() < 0.5:
        g.add(Triple(steps[-1], sc.HAS_HYPERPARAMETER, rng.choice(hyperparams)))

    quality = rng.random()
    if predictor == user.preferred_predictor.get(ml_task):
        quality = min(1.0, quality + 0.3)
    lo, hi = METRIC_RANGES[metric.value]
    value = lo + quality * (hi - lo)
    ev = iri(f"da:eval/t{n:05d}")
    g.add(Triple(wf, sc.HAS_EVALUATION, ev))
    g.add(Triple(ev, sc.RDF_TYPE, sc.MODEL_EVALUATION))
    g.add(Triple(ev, sc.EVALUATES_METRIC, metric))
    g.add(Triple(ev, sc.EVALUATION_VALUE, lit(round(value, 6))))

    fb = iri(f"da:feedback/t{n:05d}")
    score = 3.0 + user.bias + (quality - 0.5) * 2.0 + rng.gauss(0.0, 0.5)
    score = max(1, min(5, int(round(score))))
    g.add(Triple(wf, sc.HAS_FEEDBACK, fb))
    g.add(Triple(fb, sc.RDF_TYPE, sc.FEEDBACK))
    g.add(Triple(fb, sc.FEEDBACK_SCORE, lit(score)))


def _pick_predictor(schema, rng, user, ml_task, required, excluded):
    required_predictors = [
        a for a in required if schema.algorithm_kind(a) == "predictor"
    ]
    if required_predictors:
        return required_predictors[0]
    pool = sorted(schema.predictors_for(ml_task) - excluded, key=lambda t: t.value)
    if not pool:
        pool = sorted(schema.predictors_for(ml_task), key=lambda t: t.value)
    favorite = user.preferred_predictor.get(ml_task)
    if favorite in pool and rng.random() < 0.7:
        return favorite
    return rng.choice(pool)


def corpus_stats(schema: sc.Schema, g: Graph) -> dict:
    """Triple counts by source category: schema, meta features, experiments."""
    schema_set = set(schema.graph)
    char_classes = g.subclass_closure(sc.DATASET_CHARACTERISTICS)
    types: dict = {}
    for t in g.triples(r=sc.RDF_TYPE):
        types.setdefault(t.subject, set()).add(t.object)

    def category(t: Triple) -> str:
        if t in schema_set:
            return "schema"
        subject_types = types.get(t.subject, set())
        if sc.DATASET in subject_types or subject_types & char_classes:
            return "meta_features"
        if sc.USER in subject_types:
            return "users"
        return "experiments"

    counts = {"schema": 0, "meta_features": 0, "users": 0, "experiments": 0}
    for t in g:
        counts[category(t)] += 1
    counts["total"] = len(g)
    return counts
