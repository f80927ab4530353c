"""Hard-coded data-analytics ontology and validation of triples against it.

Declares the classes, properties (with domain/range and functional flags),
the four-level goal hierarchy (intents, ML tasks, algorithms, library
implementations) and the constraint taxonomy. The schema is immutable once
built and can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .store import (
    RDF_TYPE,
    RDFS_SUBCLASS_OF,
    Graph,
    Term,
    Triple,
    iri,
    lit,
)

# -- vocabulary ---------------------------------------------------------------

RDFS_CLASS = iri("rdfs:Class")
RDF_PROPERTY = iri("rdf:Property")
RDFS_DOMAIN = iri("rdfs:domain")
RDFS_RANGE = iri("rdfs:range")
FUNCTIONAL = iri("da:functional")

# core classes
TASK = iri("da:Task")
USER = iri("da:User")
INTENT = iri("da:Intent")
WORKFLOW = iri("da:Workflow")
DATASET = iri("da:Dataset")
STEP = iri("da:Step")
ALGORITHM = iri("da:Algorithm")
IMPLEMENTATION = iri("da:Implementation")
HYPERPARAMETER = iri("da:Hyperparameter")
CONSTRAINT = iri("da:Constraint")
ALGORITHM_CONSTRAINT = iri("da:AlgorithmConstraint")
HYPERPARAMETER_CONSTRAINT = iri("da:HyperparameterConstraint")
WORKFLOW_CONSTRAINT = iri("da:WorkflowConstraint")
EVALUATION_REQUIREMENT = iri("da:EvaluationRequirement")
MODEL_EVALUATION = iri("da:ModelEvaluation")
FEEDBACK = iri("da:Feedback")
DATASET_CHARACTERISTICS = iri("da:DatasetCharacteristics")

# characteristic subclasses, one per extracted metafeature
CH_INSTANCES = iri("da:NumberOfInstances")
CH_FEATURES = iri("da:NumberOfFeatures")
CH_NUMERIC = iri("da:NumberOfNumericFeatures")
CH_CATEGORICAL = iri("da:NumberOfCategoricalFeatures")
CH_MISSING = iri("da:MissingValueRatio")
CH_CLASSES = iri("da:NumberOfClasses")
CH_IMBALANCE = iri("da:TargetImbalance")
CH_STD = iri("da:TargetStandardDeviation")
CH_TARGET_TYPE = iri("da:TargetType")

# core properties
REQUESTED_BY = iri("da:requestedBy")
HAS_INTENT = iri("da:hasIntent")
HAS_REQUIREMENT = iri("da:hasRequirement")
HAS_CONSTRAINT = iri("da:hasConstraint")
USES_DATASET = iri("da:usesDataset")
ACHIEVED_BY = iri("da:achievedBy")
HAS_STEP = iri("da:hasStep")
FOLLOWED_BY = iri("da:followedBy")
USES_ALGORITHM = iri("da:usesAlgorithm")
HAS_HYPERPARAMETER = iri("da:hasHyperparameter")
HAS_FEEDBACK = iri("da:hasFeedback")
HAS_EVALUATION = iri("da:hasEvaluation")
HAS_CHARACTERISTIC = iri("da:hasCharacteristic")
IS_HARD = iri("da:isHard")
ON_ALGORITHM = iri("da:onAlgorithm")
CONSTRAINT_MODE = iri("da:constraintMode")
ON_HYPERPARAMETER = iri("da:onHyperparameter")
COMPARATOR = iri("da:comparator")
LIMIT_VALUE = iri("da:limitValue")
RESOURCE_KEY = iri("da:resourceKey")
RESOURCE_LIMIT = iri("da:resourceLimit")
FEEDBACK_SCORE = iri("da:feedbackScore")
FEEDBACK_TAG = iri("da:feedbackTag")
EVALUATES_METRIC = iri("da:evaluatesMetric")
EVALUATION_VALUE = iri("da:evaluationValue")
EXPERTISE_LEVEL = iri("da:expertiseLevel")
PARAMETER_OF = iri("da:parameterOf")

# hierarchy edges
REFINES_INTENT = iri("da:refinesIntent")
ADDRESSES_TASK = iri("da:addressesTask")
IMPLEMENTS_ALGORITHM = iri("da:implementsAlgorithm")
FOR_TASK = iri("da:forTask")
ALGORITHM_KIND = iri("da:algorithmKind")

# scalar dataset metafeature properties
DATASET_NAME = iri("da:datasetName")
NUM_INSTANCES = iri("da:numberOfInstances")
NUM_FEATURES = iri("da:numberOfFeatures")
NUM_NUMERIC = iri("da:numberOfNumericFeatures")
NUM_CATEGORICAL = iri("da:numberOfCategoricalFeatures")
MISSING_RATIO = iri("da:missingValueRatio")
NUM_CLASSES = iri("da:numberOfClasses")
TARGET_IMBALANCE = iri("da:targetImbalance")
TARGET_STD = iri("da:targetStandardDeviation")
TARGET_TYPE = iri("da:targetType")

# DMOP-style algorithm traits (recorded as plain facts, drive no logic)
HANDLES_CATEGORICAL = iri("da:handlesCategoricalFeatures")
HANDLES_CONTINUOUS = iri("da:handlesContinuousFeatures")
TOLERATES_IRRELEVANT = iri("da:toleratesIrrelevantFeatures")

# intent roots
DESCRIBE = iri("da:Describe")
ASSESS = iri("da:Assess")
EXPLAIN = iri("da:Explain")
PREDICT = iri("da:Predict")
SUGGEST = iri("da:Suggest")

# ML tasks
CLASSIFICATION = iri("da:Classification")
REGRESSION = iri("da:Regression")
FORECASTING = iri("da:Forecasting")
CLUSTERING = iri("da:Clustering")
SUMMARIZE = iri("da:Summarize")
ANALYZE = iri("da:Analyze")
VALIDATE = iri("da:Validate")
COMPARE = iri("da:Compare")

INTENT_ROOTS = (DESCRIBE, ASSESS, EXPLAIN, PREDICT, SUGGEST)
ML_TASKS = (
    CLASSIFICATION,
    REGRESSION,
    FORECASTING,
    CLUSTERING,
    SUMMARIZE,
    ANALYZE,
    VALIDATE,
    COMPARE,
)


class SchemaError(Exception):
    """Raised when the hard-coded ontology itself is inconsistent."""


@dataclass(frozen=True)
class ClassDef:
    iri: Term
    superclass: Optional[Term] = None


@dataclass(frozen=True)
class PropertyDef:
    iri: Term
    domain: Term
    range: Union[Term, str]  # a class IRI or a literal datatype name
    functional: bool = False


@dataclass(frozen=True)
class IntentNode:
    iri: Term
    level: str  # intent | ml_task | algorithm | implementation
    parents: tuple = ()


@dataclass(frozen=True)
class Violation:
    """A failed schema constraint; a value, not an exception."""

    constraint: str  # unknown-relation | domain | range | functional
    triple: Triple
    detail: str

    def __str__(self):
        return f"{self.constraint}: {self.detail} in {self.triple!r}"


_CLASSES = (
    ClassDef(TASK),
    ClassDef(USER),
    ClassDef(INTENT),
    ClassDef(WORKFLOW),
    ClassDef(DATASET),
    ClassDef(STEP),
    ClassDef(ALGORITHM),
    ClassDef(IMPLEMENTATION),
    ClassDef(HYPERPARAMETER),
    ClassDef(CONSTRAINT),
    ClassDef(ALGORITHM_CONSTRAINT, CONSTRAINT),
    ClassDef(HYPERPARAMETER_CONSTRAINT, CONSTRAINT),
    ClassDef(WORKFLOW_CONSTRAINT, CONSTRAINT),
    ClassDef(EVALUATION_REQUIREMENT),
    ClassDef(MODEL_EVALUATION),
    ClassDef(FEEDBACK),
    ClassDef(DATASET_CHARACTERISTICS),
    ClassDef(CH_INSTANCES, DATASET_CHARACTERISTICS),
    ClassDef(CH_FEATURES, DATASET_CHARACTERISTICS),
    ClassDef(CH_NUMERIC, DATASET_CHARACTERISTICS),
    ClassDef(CH_CATEGORICAL, DATASET_CHARACTERISTICS),
    ClassDef(CH_MISSING, DATASET_CHARACTERISTICS),
    ClassDef(CH_CLASSES, DATASET_CHARACTERISTICS),
    ClassDef(CH_IMBALANCE, DATASET_CHARACTERISTICS),
    ClassDef(CH_STD, DATASET_CHARACTERISTICS),
    ClassDef(CH_TARGET_TYPE, DATASET_CHARACTERISTICS),
)

_PROPERTIES = (
    PropertyDef(REQUESTED_BY, TASK, USER, functional=True),
    PropertyDef(HAS_INTENT, TASK, INTENT, functional=True),
    PropertyDef(HAS_REQUIREMENT, TASK, EVALUATION_REQUIREMENT),
    PropertyDef(HAS_CONSTRAINT, TASK, CONSTRAINT),
    PropertyDef(USES_DATASET, TASK, DATASET, functional=True),
    PropertyDef(ACHIEVED_BY, TASK, WORKFLOW, functional=True),
    PropertyDef(HAS_STEP, WORKFLOW, STEP),
    PropertyDef(FOLLOWED_BY, STEP, STEP),
    PropertyDef(USES_ALGORITHM, STEP, ALGORITHM, functional=True),
    PropertyDef(HAS_HYPERPARAMETER, STEP, HYPERPARAMETER),
    PropertyDef(HAS_FEEDBACK, WORKFLOW, FEEDBACK, functional=True),
    PropertyDef(HAS_EVALUATION, WORKFLOW, MODEL_EVALUATION, functional=True),
    PropertyDef(HAS_CHARACTERISTIC, DATASET, DATASET_CHARACTERISTICS),
    PropertyDef(IS_HARD, CONSTRAINT, "boolean", functional=True),
    PropertyDef(ON_ALGORITHM, ALGORITHM_CONSTRAINT, ALGORITHM, functional=True),
    PropertyDef(CONSTRAINT_MODE, ALGORITHM_CONSTRAINT, "string", functional=True),
    PropertyDef(ON_HYPERPARAMETER, HYPERPARAMETER_CONSTRAINT, HYPERPARAMETER, functional=True),
    PropertyDef(COMPARATOR, HYPERPARAMETER_CONSTRAINT, "string", functional=True),
    PropertyDef(LIMIT_VALUE, HYPERPARAMETER_CONSTRAINT, "float", functional=True),
    PropertyDef(RESOURCE_KEY, WORKFLOW_CONSTRAINT, "string", functional=True),
    PropertyDef(RESOURCE_LIMIT, WORKFLOW_CONSTRAINT, "float", functional=True),
    PropertyDef(FEEDBACK_SCORE, FEEDBACK, "integer", functional=True),
    PropertyDef(FEEDBACK_TAG, FEEDBACK, "string"),
    PropertyDef(EVALUATES_METRIC, MODEL_EVALUATION, EVALUATION_REQUIREMENT, functional=True),
    PropertyDef(EVALUATION_VALUE, MODEL_EVALUATION, "float", functional=True),
    PropertyDef(EXPERTISE_LEVEL, USER, "string", functional=True),
    PropertyDef(PARAMETER_OF, HYPERPARAMETER, ALGORITHM),
    PropertyDef(REFINES_INTENT, INTENT, INTENT, functional=True),
    PropertyDef(ADDRESSES_TASK, ALGORITHM, INTENT),
    PropertyDef(IMPLEMENTS_ALGORITHM, IMPLEMENTATION, ALGORITHM),
    PropertyDef(FOR_TASK, EVALUATION_REQUIREMENT, INTENT),
    PropertyDef(ALGORITHM_KIND, ALGORITHM, "string", functional=True),
    PropertyDef(DATASET_NAME, DATASET, "string", functional=True),
    PropertyDef(NUM_INSTANCES, DATASET, "integer", functional=True),
    PropertyDef(NUM_FEATURES, DATASET, "integer", functional=True),
    PropertyDef(NUM_NUMERIC, DATASET, "integer", functional=True),
    PropertyDef(NUM_CATEGORICAL, DATASET, "integer", functional=True),
    PropertyDef(MISSING_RATIO, DATASET, "float", functional=True),
    PropertyDef(NUM_CLASSES, DATASET, "integer", functional=True),
    PropertyDef(TARGET_IMBALANCE, DATASET, "float", functional=True),
    PropertyDef(TARGET_STD, DATASET, "float", functional=True),
    PropertyDef(TARGET_TYPE, DATASET, "string", functional=True),
    PropertyDef(HANDLES_CATEGORICAL, ALGORITHM, "boolean", functional=True),
    PropertyDef(HANDLES_CONTINUOUS, ALGORITHM, "boolean", functional=True),
    PropertyDef(TOLERATES_IRRELEVANT, ALGORITHM, "boolean", functional=True),
)

# task -> intent root
_TASK_PARENTS = {
    CLASSIFICATION: PREDICT,
    REGRESSION: PREDICT,
    FORECASTING: PREDICT,
    CLUSTERING: DESCRIBE,
    SUMMARIZE: EXPLAIN,
    ANALYZE: EXPLAIN,
    VALIDATE: ASSESS,
    COMPARE: ASSESS,
}

_PREDICTOR = "predictor"
_PREPROCESSOR = "preprocessor"

# algorithm -> (kind, ml-task parents, sklearn-style implementation path)
_ALGORITHMS = {
    iri("da:SVC"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.svm.SVC"),
    iri("da:KNeighborsClassifier"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.neighbors.KNeighborsClassifier"),
    iri("da:LogisticRegression"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.linear_model.LogisticRegression"),
    iri("da:RandomForest"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.ensemble.RandomForestClassifier"),
    iri("da:MLPClassifier"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.neural_network.MLPClassifier"),
    iri("da:DecisionTree"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.tree.DecisionTreeClassifier"),
    iri("da:GaussianNB"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.naive_bayes.GaussianNB"),
    iri("da:GradientBoostingClassifier"): (_PREDICTOR, (CLASSIFICATION,), "sklearn.ensemble.GradientBoostingClassifier"),
    iri("da:SVR"): (_PREDICTOR, (REGRESSION,), "sklearn.svm.SVR"),
    iri("da:SGDRegressor"): (_PREDICTOR, (REGRESSION,), "sklearn.linear_model.SGDRegressor"),
    iri("da:KNeighborsRegressor"): (_PREDICTOR, (REGRESSION,), "sklearn.neighbors.KNeighborsRegressor"),
    iri("da:MLPRegressor"): (_PREDICTOR, (REGRESSION,), "sklearn.neural_network.MLPRegressor"),
    iri("da:RandomForestRegressor"): (_PREDICTOR, (REGRESSION,), "sklearn.ensemble.RandomForestRegressor"),
    # dual-intent example: explains via coefficients, predicts via fit
    iri("da:LinearRegression"): (_PREDICTOR, (REGRESSION, ANALYZE), "sklearn.linear_model.LinearRegression"),
    iri("da:KMeans"): (_PREDICTOR, (CLUSTERING,), "sklearn.cluster.KMeans"),
    iri("da:DBSCAN"): (_PREDICTOR, (CLUSTERING,), "sklearn.cluster.DBSCAN"),
    iri("da:Normalizer"): (_PREPROCESSOR, (CLASSIFICATION, REGRESSION, CLUSTERING), "sklearn.preprocessing.Normalizer"),
    iri("da:StandardScaler"): (_PREPROCESSOR, (CLASSIFICATION, REGRESSION, CLUSTERING), "sklearn.preprocessing.StandardScaler"),
    iri("da:MinMaxScaler"): (_PREPROCESSOR, (CLASSIFICATION, REGRESSION, CLUSTERING), "sklearn.preprocessing.MinMaxScaler"),
    iri("da:PCA"): (_PREPROCESSOR, (CLASSIFICATION, REGRESSION, CLUSTERING), "sklearn.decomposition.PCA"),
    iri("da:NoPreprocessing"): (_PREPROCESSOR, (CLASSIFICATION, REGRESSION, CLUSTERING), "sklearn.pipeline.passthrough"),
}

# metric -> applicable ML tasks
_METRICS = {
    iri("da:Accuracy"): (CLASSIFICATION,),
    iri("da:F1-Score"): (CLASSIFICATION,),
    iri("da:AUC"): (CLASSIFICATION,),
    iri("da:Precision"): (CLASSIFICATION,),
    iri("da:Recall"): (CLASSIFICATION,),
    iri("da:R2"): (REGRESSION,),
    iri("da:MSE"): (REGRESSION,),
    iri("da:RMSE"): (REGRESSION,),
    iri("da:MAE"): (REGRESSION,),
    iri("da:Silhouette"): (CLUSTERING,),
}

_HYPERPARAMETERS = {
    iri("da:hp/C"): (iri("da:SVC"), iri("da:SVR"), iri("da:LogisticRegression")),
    iri("da:hp/kernel"): (iri("da:SVC"), iri("da:SVR")),
    iri("da:hp/n_neighbors"): (iri("da:KNeighborsClassifier"), iri("da:KNeighborsRegressor")),
    iri("da:hp/n_estimators"): (iri("da:RandomForest"), iri("da:RandomForestRegressor")),
    iri("da:hp/alpha"): (iri("da:SGDRegressor"), iri("da:MLPRegressor")),
    iri("da:hp/max_depth"): (iri("da:DecisionTree"), iri("da:RandomForest")),
}

_TRAITS = (
    Triple(iri("da:RandomForest"), HANDLES_CATEGORICAL, lit(True)),
    Triple(iri("da:RandomForest"), TOLERATES_IRRELEVANT, lit(True)),
    Triple(iri("da:DecisionTree"), HANDLES_CATEGORICAL, lit(True)),
    Triple(iri("da:LogisticRegression"), HANDLES_CONTINUOUS, lit(True)),
    Triple(iri("da:SVC"), HANDLES_CONTINUOUS, lit(True)),
)


def _schema_triples() -> list:
    out = []
    for c in _CLASSES:
        out.append(Triple(c.iri, RDF_TYPE, RDFS_CLASS))
        if c.superclass is not None:
            out.append(Triple(c.iri, RDFS_SUBCLASS_OF, c.superclass))
    for p in _PROPERTIES:
        out.append(Triple(p.iri, RDF_TYPE, RDF_PROPERTY))
        out.append(Triple(p.iri, RDFS_DOMAIN, p.domain))
        rng = p.range if isinstance(p.range, Term) else iri(f"xsd:{p.range}")
        out.append(Triple(p.iri, RDFS_RANGE, rng))
        out.append(Triple(p.iri, FUNCTIONAL, lit(p.functional)))
    for root in INTENT_ROOTS:
        out.append(Triple(root, RDF_TYPE, INTENT))
    for task, parent in _TASK_PARENTS.items():
        out.append(Triple(task, RDF_TYPE, INTENT))
        out.append(Triple(task, REFINES_INTENT, parent))
    for alg, (kind, parents, impl_path) in _ALGORITHMS.items():
        out.append(Triple(alg, RDF_TYPE, ALGORITHM))
        out.append(Triple(alg, ALGORITHM_KIND, lit(kind)))
        for parent in parents:
            out.append(Triple(alg, ADDRESSES_TASK, parent))
        impl = iri(f"da:{impl_path}")
        out.append(Triple(impl, RDF_TYPE, IMPLEMENTATION))
        out.append(Triple(impl, IMPLEMENTS_ALGORITHM, alg))
    for metric, tasks in _METRICS.items():
        out.append(Triple(metric, RDF_TYPE, EVALUATION_REQUIREMENT))
        for task in tasks:
            out.append(Triple(metric, FOR_TASK, task))
    for hp, algs in _HYPERPARAMETERS.items():
        out.append(Triple(hp, RDF_TYPE, HYPERPARAMETER))
        for alg in algs:
            out.append(Triple(hp, PARAMETER_OF, alg))
    out.extend(_TRAITS)
    return out


def bootstrap_schema() -> Graph:
    """A fresh graph holding the full hard-coded ontology."""
    return Graph(_schema_triples())


class Schema:
    """The bootstrapped ontology plus lookup tables and triple validation."""

    def __init__(self):
        self._graph = bootstrap_schema()
        self._classes = {c.iri: c for c in _CLASSES}
        self._properties = {p.iri: p for p in _PROPERTIES}
        self._ancestors = self._build_class_ancestors()
        self._check_acyclic_hierarchy()

    @property
    def graph(self) -> Graph:
        return self._graph

    def _build_class_ancestors(self) -> dict:
        ancestors = {}
        for c in _CLASSES:
            chain = {c.iri}
            cur = c
            seen = {c.iri}
            while cur.superclass is not None:
                if cur.superclass in seen:
                    raise SchemaError(f"subclass cycle at {cur.superclass!r}")
                seen.add(cur.superclass)
                chain.add(cur.superclass)
                cur = self._classes_by(cur.superclass)
            ancestors[c.iri] = chain
        return ancestors

    def _classes_by(self, term: Term) -> ClassDef:
        try:
            return {c.iri: c for c in _CLASSES}[term]
        except KeyError:
            raise SchemaError(f"undeclared superclass {term!r}") from None

    def _check_acyclic_hierarchy(self):
        # Kahn-style topological pass over the goal hierarchy edges.
        edges = []
        for task, parent in _TASK_PARENTS.items():
            edges.append((task, parent))
        for alg, (_, parents, _) in _ALGORITHMS.items():
            edges.extend((alg, p) for p in parents)
        nodes = {n for e in edges for n in e} | set(INTENT_ROOTS)
        out_deg = {n: 0 for n in nodes}
        incoming = {n: [] for n in nodes}
        for child, parent in edges:
            out_deg[child] += 1
            incoming[parent].append(child)
        queue = [n for n, d in out_deg.items() if d == 0]
        visited = 0
        while queue:
            n = queue.pop()
            visited += 1
            for child in incoming[n]:
                out_deg[child] -= 1
                if out_deg[child] == 0:
                    queue.append(child)
        if visited != len(nodes):
            raise SchemaError("goal hierarchy contains a cycle")

    # -- property metadata ----------------------------------------------------

    def property_def(self, p: Term) -> Optional[PropertyDef]:
        return self._properties.get(p)

    def range_of(self, p: Term) -> Union[Term, str, None]:
        pd = self._properties.get(p)
        return pd.range if pd else None

    def domain_of(self, p: Term) -> Optional[Term]:
        pd = self._properties.get(p)
        return pd.domain if pd else None

    def is_declared_class(self, c: Term) -> bool:
        return c in self._classes

    def class_defs(self) -> tuple:
        return _CLASSES

    def property_defs(self) -> tuple:
        return _PROPERTIES

    # -- validation -------------------------------------------------------------

    def validate(self, t: Triple, context: Optional[Graph] = None) -> Optional[Violation]:
        """Check one triple against the ontology; None means it is fine."""
        violations = self.validate_batch([t], context)
        return violations[0] if violations else None

    def validate_batch(
        self, triples: Iterable[Triple], context: Optional[Graph] = None
    ) -> list:
        """Check triples as a group, so type declarations inside the batch count.

        Functional-property duplicates are detected both against the context
        graph and within the batch itself.
        """
        batch = list(triples)
        types = self._type_lookup(batch, context)
        seen_functional: dict = {}
        violations = []
        for t in batch:
            v = self._validate_one(t, types, context, seen_functional)
            if v is not None:
                violations.append(v)
        return violations

    def _type_lookup(self, batch, context) -> dict:
        types: dict = {}

        def record(s, c):
            types.setdefault(s, set()).add(c)

        for t in self._graph.triples(r=RDF_TYPE):
            record(t.subject, t.object)
        if context is not None:
            for t in context.triples(r=RDF_TYPE):
                record(t.subject, t.object)
        for t in batch:
            if t.relation == RDF_TYPE:
                record(t.subject, t.object)
        return types

    def _instance_of(self, entity: Term, cls: Term, types: dict) -> bool:
        for declared in types.get(entity, ()):
            if cls in self._ancestors.get(declared, {declared}):
                return True
        return False

    def _validate_one(self, t, types, context, seen_functional) -> Optional[Violation]:
        p = t.relation
        if p == RDF_TYPE:
            if not t.object.is_iri or t.object not in self._classes and t.object != RDFS_CLASS and t.object != RDF_PROPERTY:
                return Violation("range", t, f"{t.object!r} is not a declared class")
            return None
        if p in (RDFS_SUBCLASS_OF, RDFS_DOMAIN, RDFS_RANGE, FUNCTIONAL):
            # schema-structural triples are emitted only by the bootstrap
            return None
        pd = self._properties.get(p)
        if pd is None:
            return Violation("unknown-relation", t, f"relation {p!r} is not declared")
        if not self._instance_of(t.subject, pd.domain, types):
            return Violation(
                "domain", t, f"subject is not an instance of {pd.domain!r}"
            )
        if isinstance(pd.range, str):
            if not t.object.is_literal or t.object.datatype != pd.range:
                return Violation("range", t, f"object must be a {pd.range} literal")
        else:
            if not t.object.is_iri or not self._instance_of(t.object, pd.range, types):
                return Violation(
                    "range", t, f"object is not an instance of {pd.range!r}"
                )
        if pd.functional:
            key = (t.subject, p)
            existing = seen_functional.get(key)
            if existing is None and context is not None:
                for prior in context.triples(s=t.subject, r=p):
                    existing = prior.object
                    break
            if existing is not None and existing != t.object:
                return Violation(
                    "functional", t, f"{p!r} already set to {existing!r}"
                )
            seen_functional.setdefault(key, t.object)
        return None

    # -- goal hierarchy queries -------------------------------------------------

    def intent_nodes(self) -> list:
        nodes = [IntentNode(r, "intent") for r in INTENT_ROOTS]
        nodes += [IntentNode(t, "ml_task", (p,)) for t, p in _TASK_PARENTS.items()]
        for alg, (_, parents, impl_path) in _ALGORITHMS.items():
            nodes.append(IntentNode(alg, "algorithm", tuple(parents)))
            nodes.append(IntentNode(iri(f"da:{impl_path}"), "implementation", (alg,)))
        return nodes

    def level_of(self, node: Term) -> Optional[str]:
        if node in INTENT_ROOTS:
            return "intent"
        if node in _TASK_PARENTS:
            return "ml_task"
        if node in _ALGORITHMS:
            return "algorithm"
        for _, (_, _, impl_path) in _ALGORITHMS.items():
            if node == iri(f"da:{impl_path}"):
                return "implementation"
        return None

    def ml_tasks_under(self, node: Term) -> set:
        """ML tasks at or below an intent root; a task maps to itself."""
        if node in _TASK_PARENTS:
            return {node}
        if node in INTENT_ROOTS:
            return {t for t, p in _TASK_PARENTS.items() if p == node}
        return set()

    def algorithms_for(self, node: Term) -> set:
        """Descendant closure of a goal node at the algorithm level."""
        if node in _ALGORITHMS:
            return {node}
        tasks = self.ml_tasks_under(node)
        if not tasks:
            return set()
        return {
            alg
            for alg, (_, parents, _) in _ALGORITHMS.items()
            if tasks.intersection(parents)
        }

    def intents_for(self, node: Term) -> set:
        """Root intents reachable upward from a goal node."""
        if node in INTENT_ROOTS:
            return {node}
        if node in _TASK_PARENTS:
            return {_TASK_PARENTS[node]}
        if node in _ALGORITHMS:
            out = set()
            for task in _ALGORITHMS[node][1]:
                out.add(_TASK_PARENTS[task])
            return out
        for alg, (_, _, impl_path) in _ALGORITHMS.items():
            if node == iri(f"da:{impl_path}"):
                return self.intents_for(alg)
        return set()

    def metrics_for(self, node: Term) -> set:
        """Evaluation metrics applicable to an intent root or ML task."""
        tasks = self.ml_tasks_under(node)
        if not tasks:
            return set()
        return {m for m, ts in _METRICS.items() if tasks.intersection(ts)}

    def predictors_for(self, node: Term) -> set:
        return {
            a
            for a in self.algorithms_for(node)
            if _ALGORITHMS[a][0] == _PREDICTOR
        }

    def preprocessors(self) -> set:
        return {a for a, (kind, _, _) in _ALGORITHMS.items() if kind == _PREPROCESSOR}

    def algorithm_kind(self, alg: Term) -> Optional[str]:
        info = _ALGORITHMS.get(alg)
        return info[0] if info else None

    def all_algorithms(self) -> set:
        return set(_ALGORITHMS)

    def all_metrics(self) -> set:
        return set(_METRICS)

    def all_ml_tasks(self) -> tuple:
        return ML_TASKS

    def metafeature_property_iris(self) -> set:
        return {
            DATASET_NAME,
            NUM_INSTANCES,
            NUM_FEATURES,
            NUM_NUMERIC,
            NUM_CATEGORICAL,
            MISSING_RATIO,
            NUM_CLASSES,
            TARGET_IMBALANCE,
            TARGET_STD,
            TARGET_TYPE,
        }
