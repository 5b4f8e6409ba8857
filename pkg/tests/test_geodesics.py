"""Generating sets, word-metric balls, and geodesic language tests.

Sphere sizes and stratum counts below are frozen from the naive oracle
(exhaustive word enumeration) in oracles.py.
"""

import pytest

from geolang.geodesics import (
    DuplicateElement,
    GenSet,
    IdentityLetter,
    NotGenerating,
    ResourceCap,
    ball,
    full_ball,
    geodesic_language,
    is_geodesic,
    validate_genset,
)
from geolang.groups import (
    BS12Engine,
    ExtensionEngine,
    Presentation,
    TableEngine,
    ZmSemidirectEngine,
    ZnC2Engine,
    presentation_engine,
    q8_table,
    s3_table,
    trivial_table,
)
from geolang.words import GeolangError, format_word, invert_word

from oracles import naive_genset_distances, naive_geodesic_words


D8_PRESENTATION = Presentation(
    ["a", "b", "t"], ["a a", "b b", "a b a b a b a b", "a b a b t"]
)


def q8_ij_genset():
    return validate_genset(TableEngine(q8_table()), [("i", "i"), ("j", "j")])


def d8_engine():
    return presentation_engine(D8_PRESENTATION, 1000)


class TestValidateGenset:
    def test_q8_closure(self):
        genset = q8_ij_genset()
        assert [l.name for l in genset.alphabet] == ["i", "i^-1", "j", "j^-1"]
        assert genset.evaluate_key(genset.parse("i i")) == "-1"

    def test_explicit_elements_pair_up(self):
        engine = TableEngine(q8_table())
        genset = validate_genset(
            engine, [("i", "i"), ("-i", "-i"), ("j", "j"), ("-j", "-j")]
        )
        assert [l.name for l in genset.alphabet] == ["i", "-i", "j", "-j"]
        i = genset.letter("i")
        assert genset.alphabet.inverse(i).name == "-i"

    def test_word_images(self):
        engine = ZmSemidirectEngine(5, 3, None, t_name="x")
        genset = validate_genset(engine, [("u", "a x"), ("v", "x a")])
        assert [l.name for l in genset.alphabet] == ["u", "u^-1", "v", "v^-1"]

    def test_involution_images_self_invert(self):
        engine = ZnC2Engine(1, ("invert", 1))
        genset = validate_genset(engine, [("x", "x1"), ("y", "y")])
        assert [l.name for l in genset.alphabet] == ["x", "x^-1", "y"]
        y = genset.letter("y")
        assert y.is_involution

    def test_identity_image_rejected(self):
        engine = TableEngine(q8_table())
        with pytest.raises(IdentityLetter):
            validate_genset(engine, [("z", "i i^-1"), ("j", "j")])

    def test_duplicate_elements_rejected(self):
        engine = TableEngine(q8_table())
        with pytest.raises(DuplicateElement):
            validate_genset(engine, [("u", "i"), ("v", "i"), ("j", "j")])

    def test_not_generating_rejected(self):
        engine = TableEngine(q8_table())
        with pytest.raises(NotGenerating):
            validate_genset(engine, [("i", "i")])

    def test_inverse_image_consistency(self):
        genset = q8_ij_genset()
        for letter in genset.alphabet:
            inverse = genset.alphabet.inverse(letter)
            assert genset.element_state(inverse) == genset.engine.evaluate_state(
                invert_word(genset.images[letter])
            )


class TestBall:
    def test_q8_spheres(self):
        dmap = ball(q8_ij_genset(), 2)
        assert dmap.sphere_sizes() == (1, 4, 3)
        assert len(dmap) == 8

    def test_bs12_radius_1(self):
        engine = BS12Engine()
        genset = validate_genset(engine, [("a", "a"), ("t", "t")])
        assert ball(genset, 1).sphere_sizes() == (1, 4)

    def test_znc2_radius_2(self):
        engine = ZnC2Engine(1, ("invert", 1))
        genset = validate_genset(engine, [("x", "x1"), ("y", "y")])
        assert ball(genset, 2).sphere_sizes() == (1, 3, 4)

    def test_sphere_keys_sorted(self):
        dmap = ball(q8_ij_genset(), 2)
        for keys in dmap.spheres:
            assert keys == sorted(keys)

    def test_resource_cap(self):
        engine = BS12Engine()
        genset = validate_genset(engine, [("a", "a"), ("t", "t")])
        with pytest.raises(ResourceCap):
            ball(genset, 12, cap=100)

    def test_export_lines(self):
        engine = ZnC2Engine(1, ("invert", 1))
        genset = validate_genset(engine, [("x", "x1"), ("y", "y")])
        lines = list(ball(genset, 1).export_lines())
        assert lines[0] == "0\t0;0"
        assert all("\t" in line for line in lines)

    def test_matches_naive_oracle(self):
        cases = [
            q8_ij_genset(),
            validate_genset(BS12Engine(), [("a", "a"), ("t", "t")]),
            validate_genset(
                ZnC2Engine(2, ("swap", 1, 2)),
                [("x1", "x1"), ("x2", "x2"), ("y", "y")],
            ),
            validate_genset(
                ZmSemidirectEngine(5, 3, None, t_name="x"),
                [("u", "a x"), ("v", "x a")],
            ),
        ]
        for genset in cases:
            naive = naive_genset_distances(genset, 4)
            dmap = ball(genset, 4)
            assert dmap._dist_states == naive


class TestIsGeodesic:
    def test_d8_aba(self):
        engine = d8_engine()
        genset = validate_genset(engine, [("a", "a"), ("b", "b")])
        assert is_geodesic(genset, genset.parse("a b a"))

    def test_bs12_conjugate(self):
        genset = validate_genset(BS12Engine(), [("a", "a"), ("t", "t")])
        assert is_geodesic(genset, genset.parse("t^-1 a t"))

    def test_cancellation_not_geodesic(self):
        genset = q8_ij_genset()
        assert not is_geodesic(genset, genset.parse("i i^-1"))

    def test_empty_word(self):
        genset = q8_ij_genset()
        assert is_geodesic(genset, ())


class TestGeodesicLanguage:
    def test_q8_exact(self):
        geo = geodesic_language(q8_ij_genset(), exact=True)
        # three distance-2 elements, each with four spellings (oracle-frozen)
        assert geo.stratum_sizes() == (1, 4, 12)
        assert geo.complete
        assert geo.diameter == 2

    def test_q8_matches_oracle(self):
        genset = q8_ij_genset()
        geo = geodesic_language(genset, exact=True)
        assert geo.word_set() == naive_geodesic_words(genset, 2)

    def test_d8_three_involutions(self):
        engine = d8_engine()
        genset = validate_genset(engine, [("a", "a"), ("b", "b"), ("t", "t")])
        geo = geodesic_language(genset, exact=True)
        assert geo.stratum_sizes() == (1, 3, 6)
        words = {format_word(w) for w in geo.words()}
        assert words == {"1", "a", "b", "t", "a b", "b a", "a t", "t a", "b t", "t b"}

    def test_whole_group_genset(self):
        s3 = s3_table()
        engine = TableEngine(s3)
        pairs = [
            (s3.names[x], s3.names[x]) for x in range(s3.order) if x != s3.id
        ]
        geo = geodesic_language(validate_genset(engine, pairs), exact=True)
        assert geo.stratum_sizes() == (1, 5)
        assert geo.diameter == 1

    def test_bounded_infinite(self):
        genset = validate_genset(BS12Engine(), [("a", "a"), ("t", "t")])
        geo = geodesic_language(genset, maxlen=3)
        assert not geo.complete
        assert geo.diameter is None
        assert geo.word_set() == naive_geodesic_words(genset, 3)

    def test_bounded_beyond_diameter_is_complete(self):
        geo = geodesic_language(q8_ij_genset(), maxlen=5)
        assert geo.complete
        assert geo.diameter == 2

    def test_exact_needs_finite_engine(self):
        genset = validate_genset(BS12Engine(), [("a", "a"), ("t", "t")])
        with pytest.raises(GeolangError):
            geodesic_language(genset, exact=True)

    def test_trivial_group(self):
        engine = ExtensionEngine(trivial_table(), 2)
        genset = validate_genset(engine, [("t1", "t1"), ("t2", "t2")])
        geo = geodesic_language(genset, maxlen=3)
        sizes = geo.stratum_sizes()
        assert sizes[0] == 1 and sizes[1] == 4


class TestClosureProperties:
    def exact_languages(self):
        engine = d8_engine()
        yield geodesic_language(q8_ij_genset(), exact=True)
        yield geodesic_language(
            validate_genset(engine, [("a", "a"), ("b", "b"), ("t", "t")]), exact=True
        )
        yield geodesic_language(
            validate_genset(engine, [("a", "a"), ("b", "b")]), exact=True
        )

    def bounded_languages(self):
        yield geodesic_language(
            validate_genset(BS12Engine(), [("a", "a"), ("t", "t")]), maxlen=4
        )
        yield geodesic_language(
            validate_genset(
                ZnC2Engine(2, ("swap", 1, 2)),
                [("x1", "x1"), ("x2", "x2"), ("y", "y")],
            ),
            maxlen=4,
        )

    def test_factor_closure(self):
        for geo in list(self.exact_languages()) + list(self.bounded_languages()):
            for word in geo.words():
                for i in range(len(word)):
                    for j in range(i, len(word) + 1):
                        assert word[i:j] in geo

    def test_inverse_closure(self):
        for geo in list(self.exact_languages()) + list(self.bounded_languages()):
            for word in geo.words():
                assert invert_word(word) in geo

    def test_every_stratum_word_has_matching_distance(self):
        for geo in self.exact_languages():
            dmap = full_ball(geo.genset)
            for word in geo.words():
                state = geo.genset.evaluate_state(word)
                assert dmap.distance_state(state) == len(word)
