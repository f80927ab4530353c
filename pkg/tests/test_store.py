import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgassist.store import (
    Filter,
    Graph,
    ParseError,
    Pattern,
    PatternError,
    Term,
    TermError,
    Triple,
    TripleError,
    Var,
    format_triple,
    iri,
    lit,
    load_ntriples,
    parse_ntriples,
    save_ntriples,
    RDF_TYPE,
    RDFS_SUBCLASS_OF,
)

HAS_INTENT = iri("ex:hasIntent")
REQUESTED_BY = iri("ex:requestedBy")
CLASSIFICATION = iri("ex:Classification")
REGRESSION = iri("ex:Regression")


def task(n):
    return iri(f"ex:task{n}")


@pytest.fixture
def three_task_store():
    g = Graph()
    g.add(Triple(task(1), HAS_INTENT, CLASSIFICATION))
    g.add(Triple(task(2), HAS_INTENT, CLASSIFICATION))
    g.add(Triple(task(3), HAS_INTENT, REGRESSION))
    g.add(Triple(task(1), REQUESTED_BY, iri("ex:u1")))
    g.add(Triple(task(3), REQUESTED_BY, iri("ex:u1")))
    g.add(Triple(task(2), REQUESTED_BY, iri("ex:u2")))
    return g


class TestTerm:
    def test_iri_rejects_whitespace(self):
        with pytest.raises(TermError):
            iri("ex:has intent")

    def test_iri_rejects_empty(self):
        with pytest.raises(TermError):
            iri("")

    def test_literal_lexical_check(self):
        with pytest.raises(TermError):
            lit("abc", "integer")
        with pytest.raises(TermError):
            Term("literal", "maybe", "boolean")

    def test_lit_inference(self):
        assert lit(5).datatype == "integer"
        assert lit(1.5).datatype == "float"
        assert lit(True).value == "true"
        assert lit("x").datatype == "string"

    def test_as_python_round_trip(self):
        assert lit(42).as_python() == 42
        assert lit(2.5).as_python() == 2.5
        assert lit(False).as_python() is False


class TestAddTriple:
    def test_insert_then_read_identity(self, three_task_store):
        pattern = Pattern([(iri("ex:taskA"), HAS_INTENT, Var("x"))])
        g = Graph()
        g.add(Triple(iri("ex:taskA"), HAS_INTENT, CLASSIFICATION))
        assert g.match(pattern) == [{Var("x"): CLASSIFICATION}]

    def test_set_semantics(self):
        g = Graph()
        t = Triple(task(1), HAS_INTENT, CLASSIFICATION)
        g.add(t)
        g.add(t)
        assert len(g) == 1

    def test_relation_as_literal_rejected(self):
        with pytest.raises(TripleError) as excinfo:
            Triple(task(1), lit("hasIntent"), CLASSIFICATION)
        assert excinfo.value.position == "relation"

    def test_literal_subject_rejected(self):
        with pytest.raises(TripleError) as excinfo:
            Triple(lit("x"), HAS_INTENT, CLASSIFICATION)
        assert excinfo.value.position == "subject"

    def test_retrievable_via_all_indexes(self):
        g = Graph()
        t = Triple(task(1), HAS_INTENT, CLASSIFICATION)
        g.add(t)
        assert list(g.triples(s=task(1))) == [t]
        assert list(g.triples(r=HAS_INTENT)) == [t]
        assert list(g.triples(o=CLASSIFICATION)) == [t]


class TestMatch:
    def test_single_atom(self, three_task_store):
        pattern = Pattern([(Var("t"), HAS_INTENT, CLASSIFICATION)])
        bindings = three_task_store.match(pattern)
        assert [b[Var("t")] for b in bindings] == [task(1), task(2)]

    def test_empty_graph_any_pattern(self):
        pattern = Pattern([(Var("t"), HAS_INTENT, Var("x"))])
        assert Graph().match(pattern) == []

    def test_two_atom_join(self, three_task_store):
        pattern = Pattern(
            [
                (Var("t"), REQUESTED_BY, iri("ex:u1")),
                (Var("t"), HAS_INTENT, Var("i")),
            ]
        )
        # hand enumeration: u1 owns task1 (classification) and task3 (regression)
        bindings = three_task_store.match(pattern)
        assert len(bindings) == 2
        one_match = Pattern(
            [
                (Var("t"), REQUESTED_BY, iri("ex:u2")),
                (Var("t"), HAS_INTENT, Var("i")),
            ]
        )
        assert three_task_store.match(one_match) == [
            {Var("t"): task(2), Var("i"): CLASSIFICATION}
        ]

    def test_ground_pattern_containment(self, three_task_store):
        stored = Pattern([(task(1), HAS_INTENT, CLASSIFICATION)])
        assert three_task_store.match(stored) == [{}]
        absent = Pattern([(task(1), HAS_INTENT, REGRESSION)])
        assert three_task_store.match(absent) == []

    def test_filter_on_numeric_literal(self):
        size = iri("ex:size")
        g = Graph()
        g.add(Triple(task(1), size, lit(10)))
        g.add(Triple(task(2), size, lit(200)))
        pattern = Pattern(
            [(Var("t"), size, Var("n"))],
            filters=[Filter(Var("n"), ">=", lit(100))],
        )
        assert g.match(pattern) == [{Var("t"): task(2), Var("n"): lit(200)}]

    def test_filter_variable_must_appear(self):
        with pytest.raises(PatternError):
            Pattern(
                [(Var("t"), HAS_INTENT, Var("x"))],
                filters=[Filter(Var("missing"), "==", lit(1))],
            )

    def test_repeated_variable_in_atom(self):
        loves = iri("ex:relatedTo")
        g = Graph()
        g.add(Triple(task(1), loves, task(1)))
        g.add(Triple(task(1), loves, task(2)))
        pattern = Pattern([(Var("x"), loves, Var("x"))])
        assert g.match(pattern) == [{Var("x"): task(1)}]

    def test_deterministic_order(self, three_task_store):
        pattern = Pattern([(Var("t"), HAS_INTENT, Var("i"))])
        expected = three_task_store.match(pattern)
        for _ in range(5):
            assert three_task_store.match(pattern) == expected

    def test_limit(self, three_task_store):
        pattern = Pattern([(Var("t"), HAS_INTENT, Var("i"))], limit=2)
        assert len(three_task_store.match(pattern)) == 2


class TestRankByFrequency:
    def test_hand_counts(self):
        metric = iri("ex:hasMetric")
        g = Graph()
        for n, m in [(1, "Accuracy"), (2, "Accuracy"), (3, "Accuracy"), (4, "F1")]:
            g.add(Triple(task(n), metric, iri(f"ex:{m}")))
        pattern = Pattern([(Var("t"), metric, Var("m"))])
        ranked = g.rank_by_frequency(pattern, Var("m"), k=5)
        assert ranked == [(iri("ex:Accuracy"), 3), (iri("ex:F1"), 1)]

    def test_tie_break_lexicographic(self):
        metric = iri("ex:hasMetric")
        g = Graph()
        g.add(Triple(task(1), metric, iri("ex:Zeta")))
        g.add(Triple(task(2), metric, iri("ex:Alpha")))
        pattern = Pattern([(Var("t"), metric, Var("m"))])
        ranked = g.rank_by_frequency(pattern, Var("m"), k=5)
        assert ranked == [(iri("ex:Alpha"), 1), (iri("ex:Zeta"), 1)]

    def test_no_matches_is_empty_not_error(self):
        pattern = Pattern([(Var("t"), HAS_INTENT, Var("m"))])
        assert Graph().rank_by_frequency(pattern, Var("m"), k=3) == []

    def test_truncates_to_k(self):
        metric = iri("ex:hasMetric")
        g = Graph()
        for n in range(5):
            g.add(Triple(task(n), metric, iri(f"ex:m{n}")))
        pattern = Pattern([(Var("t"), metric, Var("m"))])
        assert len(g.rank_by_frequency(pattern, Var("m"), k=2)) == 2


class TestInstancesOf:
    def test_transitive_subclass(self):
        g = Graph()
        g.add(Triple(iri("ex:Animal"), RDF_TYPE, iri("rdfs:Class")))
        g.add(Triple(iri("ex:Dog"), RDFS_SUBCLASS_OF, iri("ex:Animal")))
        g.add(Triple(iri("ex:Puppy"), RDFS_SUBCLASS_OF, iri("ex:Dog")))
        g.add(Triple(iri("ex:rex"), RDF_TYPE, iri("ex:Puppy")))
        assert iri("ex:rex") in g.instances_of(iri("ex:Animal"))

    def test_unknown_class_empty(self):
        assert Graph().instances_of(iri("ex:Nothing")) == set()


class TestPersistence:
    def test_empty_round_trip(self, tmp_path):
        path = tmp_path / "empty.nt"
        save_ntriples(Graph(), path)
        assert path.read_text() == ""
        assert len(load_ntriples(path)) == 0

    def test_ten_triple_round_trip(self, tmp_path, three_task_store):
        g = three_task_store
        g.add(Triple(task(9), iri("ex:size"), lit(42)))
        g.add(Triple(task(9), iri("ex:missing"), lit(0.25)))
        g.add(Triple(task(9), iri("ex:isHard"), lit(True)))
        g.add(Triple(task(9), iri("ex:label"), lit('tricky "quoted"\nline')))
        path = tmp_path / "g.nt"
        save_ntriples(g, path)
        assert load_ntriples(path) == g

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "bad.nt"
        path.write_text(
            "<ex:a> <ex:b> <ex:c> .\n"
            "<ex:a> <ex:b> <ex:d> .\n"
            "this is not a triple\n"
        )
        with pytest.raises(ParseError) as excinfo:
            load_ntriples(path)
        assert excinfo.value.line_no == 3
        assert "line 3" in str(excinfo.value)

    def test_save_is_deterministic(self, tmp_path, three_task_store):
        p1, p2 = tmp_path / "a.nt", tmp_path / "b.nt"
        save_ntriples(three_task_store, p1)
        save_ntriples(three_task_store.copy(), p2)
        assert p1.read_bytes() == p2.read_bytes()


# -- property tests -----------------------------------------------------------

iris = st.text(
    alphabet=st.characters(
        codec="utf-8",
        exclude_characters='<>"\\ \t\n\r',
        exclude_categories=("Cs", "Cc", "Zs", "Zl", "Zp"),
    ),
    min_size=1,
    max_size=12,
).map(iri)

literals = st.one_of(
    st.integers(-10**9, 10**9).map(lit),
    st.floats(allow_nan=False, allow_infinity=False, width=64).map(lit),
    st.booleans().map(lit),
    st.text(max_size=20).map(lit),
)

triples_st = st.builds(Triple, iris, iris, st.one_of(iris, literals))


@given(st.lists(triples_st, max_size=60))
@settings(max_examples=60, deadline=None)
def test_round_trip_property(ts):
    g = Graph(ts)
    assert parse_ntriples("\n".join(sorted(map(__import__("kgassist.store", fromlist=["format_triple"]).format_triple, g))) + "\n" if len(g) else "") == g


@given(st.lists(triples_st, min_size=1, max_size=40), st.integers(0, 39))
@settings(max_examples=60, deadline=None)
def test_set_semantics_property(ts, idx):
    g = Graph(ts)
    t = ts[idx % len(ts)]
    before = len(g.add(t))
    assert len(g.add(t)) == before


def test_large_random_round_trip(tmp_path):
    rng = random.Random(20240811)
    g = Graph()
    while len(g) < 1200:
        s = iri(f"n:e{rng.randrange(400)}")
        r = iri(f"n:r{rng.randrange(12)}")
        kind = rng.randrange(4)
        if kind == 0:
            o = iri(f"n:e{rng.randrange(400)}")
        elif kind == 1:
            o = lit(rng.randrange(-1000, 1000))
        elif kind == 2:
            o = lit(rng.uniform(-10, 10))
        else:
            o = lit(rng.choice(["alpha", "be ta", 'quo"te', "tab\there"]))
        g.add(Triple(s, r, o))
    path = tmp_path / "large.nt"
    save_ntriples(g, path)
    assert load_ntriples(path) == g


def test_index_coherence():
    rng = random.Random(7)
    g = Graph()
    for _ in range(300):
        g.add(
            Triple(
                iri(f"n:e{rng.randrange(30)}"),
                iri(f"n:r{rng.randrange(5)}"),
                iri(f"n:e{rng.randrange(30)}"),
            )
        )
    # every (s, r, o) restriction must agree with a brute-force scan
    for _ in range(100):
        s = iri(f"n:e{rng.randrange(30)}") if rng.random() < 0.7 else None
        r = iri(f"n:r{rng.randrange(5)}") if rng.random() < 0.7 else None
        o = iri(f"n:e{rng.randrange(30)}") if rng.random() < 0.7 else None
        got = set(g.triples(s=s, r=r, o=o))
        want = {
            t
            for t in g
            if (s is None or t.subject == s)
            and (r is None or t.relation == r)
            and (o is None or t.object == o)
        }
        assert got == want
