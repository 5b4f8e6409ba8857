"""Engine arithmetic, coset enumeration, and fingerprint tests."""

import random

import pytest

from geolang.groups import (
    BS12Engine,
    CapExceeded,
    CosetEnumerator,
    ExtensionEngine,
    FiniteGroupTable,
    GeolangError,
    Presentation,
    ProductEngine,
    TableEngine,
    UnsupportedEngine,
    ZmSemidirectEngine,
    ZnC2Engine,
    abelian_invariants,
    check_homomorphism,
    coset_enumerate,
    cyclic_table,
    direct_product,
    engine_to_table,
    evaluate,
    fingerprint,
    presentation_engine,
    q8_table,
    rho_normal_form,
    s3_table,
    sl2_z3_table,
    table_from_lines,
    trivial_table,
    trivial_table as _trivial,
)
from geolang.words import format_word, invert_word, parse_word


Q8_PRESENTATION = Presentation(
    ["i", "j", "k"], ["i j k^-1", "j k i^-1", "k i j^-1", "i i i i"]
)


def bp(text, engine):
    return parse_word(text, engine.builtin_alphabet)


class TestFiniteGroupTable:
    def test_q8_shape(self):
        t = q8_table()
        assert t.order == 8
        assert t.names[t.id] == "1"
        assert t.element_order(t.names.index("i")) == 4
        assert t.element_order(t.names.index("-1")) == 2

    def test_rejects_non_associative(self):
        with pytest.raises(GeolangError):
            FiniteGroupTable([[0, 1], [1, 1]])

    def test_rejects_no_identity(self):
        with pytest.raises(GeolangError):
            FiniteGroupTable([[0, 1], [0, 1]])

    def test_export_roundtrip(self):
        t = s3_table()
        again = table_from_lines(t.export_lines(), names=t.names)
        assert again.mult == t.mult
        assert again.id == t.id


class TestFingerprint:
    def test_q8(self):
        fp = fingerprint(q8_table())
        assert fp.order == 8
        assert not fp.abelian
        assert dict(fp.element_orders) == {1: 1, 2: 1, 4: 6}
        assert fp.center_order == 2

    def test_cyclic6_times_cyclic2(self):
        fp = fingerprint(direct_product(cyclic_table(6), cyclic_table(2)))
        assert fp.order == 12
        assert fp.abelian
        assert fp.abelianization == (6, 2)

    def test_sl2_z3(self):
        fp = fingerprint(sl2_z3_table())
        assert fp.order == 24
        assert dict(fp.element_orders)[2] == 1

    def test_abelian_invariants_samples(self):
        assert abelian_invariants(cyclic_table(12)) == (12,)
        assert abelian_invariants(direct_product(cyclic_table(2), cyclic_table(2))) == (2, 2)
        assert abelian_invariants(trivial_table()) == ()

    def test_isomorphic_construction_paths_agree(self):
        enumerated = coset_enumerate(Q8_PRESENTATION, 1000)
        assert fingerprint(enumerated) == fingerprint(q8_table())


class TestCosetEnumeration:
    def test_q8_conjugation_cell(self):
        p = Presentation(["a", "b"], ["a b a^-1 b", "b a b^-1 a"])
        t = coset_enumerate(p, 1000)
        assert t.order == 8
        assert fingerprint(t) == fingerprint(q8_table())

    def test_q8_ijk(self):
        assert coset_enumerate(Q8_PRESENTATION, 1000).order == 8

    def test_infinite_hits_cap(self):
        p = Presentation(["a", "t"], ["t a t^-1 a^-1 a^-1"])
        with pytest.raises(CapExceeded) as err:
            coset_enumerate(p, 10**4)
        assert err.value.enumerator is not None

    def test_deterministic(self):
        p = Presentation(["a", "b"], ["a a", "b b b", "a b a b a b a b"])
        t1 = coset_enumerate(p, 1000)
        t2 = coset_enumerate(p, 1000)
        assert t1.mult == t2.mult
        assert t1.names == t2.names

    def test_s3_names_shortlex(self):
        p = Presentation(["a", "b"], ["a a", "b b", "a b a b a b"])
        t = coset_enumerate(p, 100)
        assert t.order == 6
        assert set(t.names) == {"1", "a", "b", "a b", "b a", "a b a"}

    def test_trace_identifies_equal_words(self):
        p = Presentation(["a", "b"], ["a a", "b b", "a b a b a b"])
        enum = CosetEnumerator(p, 100)
        enum.run()
        aba = parse_word("a b a", p.alphabet)
        bab = parse_word("b a b", p.alphabet)
        assert enum.trace(aba) == enum.trace(bab)
        assert enum.trace(parse_word("a", p.alphabet)) != enum.trace(bab)


class TestEngines:
    def test_q8_table_engine_evaluate(self):
        engine = TableEngine(q8_table())
        assert evaluate(engine, bp("i j", engine)) == "k"
        assert evaluate(engine, bp("i i", engine)) == "-1"

    def test_presentation_engine_letters(self):
        engine = presentation_engine(Q8_PRESENTATION, 1000)
        names = [l.name for l in engine.builtin_alphabet]
        assert names[:2] == ["i", "i^-1"]
        assert evaluate(engine, bp("i j", engine)) == evaluate(engine, bp("k", engine))

    def test_bs12_defining_relation(self):
        engine = BS12Engine()
        assert evaluate(engine, bp("t a t^-1", engine)) == evaluate(
            engine, bp("a a", engine)
        )

    def test_bs12_affine_composition_associative(self):
        engine = BS12Engine()
        rng = random.Random(7)
        letters = list(engine.builtin_alphabet)
        for _ in range(200):
            w = [rng.choice(letters) for _ in range(12)]
            cut1, cut2 = sorted((rng.randrange(13), rng.randrange(13)))
            full = engine.evaluate_state(tuple(w))
            # evaluating in pieces agrees with evaluating the whole word
            state = engine.identity_state()
            for piece in (w[:cut1], w[cut1:cut2], w[cut2:]):
                for letter in piece:
                    state = engine.act_state(
                        state, engine.builtin_alphabet.index(letter)
                    )
            assert state == full

    def test_znc2_defining_action(self):
        engine = ZnC2Engine(1, ("invert", 1))
        state = engine.evaluate_state(bp("y x1", engine))
        assert state == ((-1,), 1)
        assert evaluate(engine, bp("y x1", engine)) == "-1;1"

    def test_znc2_y_involution(self):
        for phi in (("invert", 2), ("swap", 1, 2)):
            engine = ZnC2Engine(2, phi)
            assert engine.evaluate_state(bp("y y", engine)) == engine.identity_state()
            for k in ("x1", "x2"):
                conj = engine.evaluate_state(bp(f"y {k} y", engine))
                assert conj == engine.evaluate_state(
                    engine.normal_form_state(conj)
                )

    def test_znc2_swap_conjugation(self):
        engine = ZnC2Engine(2, ("swap", 1, 2))
        assert engine.evaluate_state(bp("y x1 y", engine)) == ((0, 1), 0)

    def test_zm_semidirect_defining_relation(self):
        for n, s, t_order in ((5, 3, None), (9, 4, 3), (7, 2, 3), (3, 2, None)):
            engine = ZmSemidirectEngine(n, s, t_order)
            lhs = engine.evaluate_state(bp("t a t^-1", engine))
            rhs = engine.evaluate_state(bp(" ".join(["a"] * s), engine))
            assert lhs == rhs
            assert (
                engine.evaluate_state(bp(" ".join(["a"] * n), engine))
                == engine.identity_state()
            )
            if t_order:
                assert (
                    engine.evaluate_state(bp(" ".join(["t"] * t_order), engine))
                    == engine.identity_state()
                )

    def test_zm_semidirect_x_names(self):
        engine = ZmSemidirectEngine(5, 3, None, a_name="a", t_name="x")
        assert engine.evaluate_state(bp("x a", engine)) == engine.evaluate_state(
            bp("a a a x", engine)
        )

    def test_zm_semidirect_rejects_bad_params(self):
        with pytest.raises(GeolangError):
            ZmSemidirectEngine(6, 2, None)
        with pytest.raises(GeolangError):
            ZmSemidirectEngine(5, 3, 3)

    def test_product_engine(self):
        q8 = TableEngine(q8_table())
        prod = ProductEngine(q8, q8)
        assert prod.order == 64
        key = evaluate(prod, bp("i_1 j_2", prod))
        assert key == "(i, j)"

    def test_extension_engine_conjugation(self):
        inversion = (0, 2, 1)  # inverts the order-3 cyclic table
        engine = ExtensionEngine(cyclic_table(3), 1, [inversion])
        lhs = engine.evaluate_state(bp("t g t^-1", engine))
        rhs = engine.evaluate_state(bp("g2", engine))
        assert lhs == rhs

    def test_extension_rejects_non_automorphism(self):
        with pytest.raises(GeolangError):
            ExtensionEngine(cyclic_table(3), 1, [(1, 0, 2)])

    def test_extension_rejects_non_commuting(self):
        s3 = s3_table()
        # conjugation by two non-commuting elements
        def conj(g):
            return tuple(
                s3.mult[s3.mult[g][x]][s3.inv[g]] for x in range(s3.order)
            )

        a = s3.names.index("p102")
        b = s3.names.index("p021")
        with pytest.raises(GeolangError):
            ExtensionEngine(s3, 2, [conj(a), conj(b)])

    def test_engine_letter_cancellation(self):
        engines = [
            TableEngine(q8_table()),
            BS12Engine(),
            ZnC2Engine(2, ("swap", 1, 2)),
            ZmSemidirectEngine(5, 3, None),
            ExtensionEngine(s3_table(), 1),
        ]
        rng = random.Random(11)
        for engine in engines:
            letters = list(engine.builtin_alphabet)
            for _ in range(200):
                word = tuple(rng.choice(letters) for _ in range(rng.randrange(8)))
                state = engine.evaluate_state(word)
                for letter in letters:
                    appended = word + (letter, letter.inverse)
                    assert engine.evaluate_state(appended) == state

    def test_key_level_contract(self):
        engine = ZnC2Engine(1, ("invert", 1))
        key = engine.identity_key()
        key = engine.act(key, "x1")
        key = engine.act(key, "y")
        assert key == "1;1"
        with pytest.raises(GeolangError):
            engine.act("99;0", "x1")


class TestNormalForms:
    def test_bs12_conjugate(self):
        engine = BS12Engine()
        key = evaluate(engine, bp("t^-1 a t", engine))
        assert format_word(rho_normal_form(engine, key)) == "t^-1 a t"

    def test_bs12_roundtrip_ball(self):
        engine = BS12Engine()
        states = {engine.identity_state()}
        frontier = [engine.identity_state()]
        for _ in range(5):
            nxt = []
            for s in frontier:
                for i in range(len(engine.builtin_alphabet)):
                    s2 = engine.act_state(s, i)
                    if s2 not in states:
                        states.add(s2)
                        nxt.append(s2)
            frontier = nxt
        for s in states:
            word = engine.normal_form_state(s)
            assert engine.evaluate_state(word) == s

    def test_zm_semidirect_xa(self):
        engine = ZmSemidirectEngine(5, 3, None, t_name="x")
        key = evaluate(engine, bp("x a", engine))
        assert format_word(rho_normal_form(engine, key)) == "a a a x"

    def test_znc2_yx(self):
        engine = ZnC2Engine(1, ("invert", 1))
        key = evaluate(engine, bp("y x1", engine))
        assert format_word(rho_normal_form(engine, key)) == "x1^-1 y"

    def test_roundtrip_radius_5(self):
        engines = [
            ZnC2Engine(2, ("swap", 1, 2)),
            ZnC2Engine(1, ("invert", 1)),
            ZmSemidirectEngine(9, 4, 3),
            ZmSemidirectEngine(3, 2, None),
        ]
        for engine in engines:
            states = {engine.identity_state()}
            frontier = [engine.identity_state()]
            for _ in range(5):
                nxt = []
                for s in frontier:
                    for i in range(len(engine.builtin_alphabet)):
                        s2 = engine.act_state(s, i)
                        if s2 not in states:
                            states.add(s2)
                            nxt.append(s2)
                frontier = nxt
            for s in states:
                assert engine.evaluate_state(engine.normal_form_state(s)) == s

    def test_unsupported_for_tables(self):
        engine = TableEngine(q8_table())
        key = engine.identity_key()
        with pytest.raises(UnsupportedEngine):
            rho_normal_form(engine, key)


class TestHomomorphisms:
    def test_bs12_cell(self):
        p = Presentation(
            ["a", "b"], ["a b a^-1 b^-1 a", "b a b^-1 a^-1 a^-1"]
        )  # aba^-1 = a^-1 b, bab^-1 = a^2
        target = BS12Engine()
        assert check_homomorphism(p, target, {"a": "a", "b": "t"})

    def test_q8_to_z2_fails(self):
        target = TableEngine(cyclic_table(2))
        images = {"i": "g", "j": "g", "k": "g"}
        assert not check_homomorphism(Q8_PRESENTATION, target, images)

    def test_z3_semidirect_quotient(self):
        p = Presentation(["a", "x"], ["a a a", "x a x^-1 a"])
        target = ZmSemidirectEngine(3, 2, None, t_name="x")
        assert check_homomorphism(p, target, {"a": "a", "x": "x"})


class TestProductsAndConversions:
    def test_direct_product_orders(self):
        assert direct_product(q8_table(), q8_table()).order == 64
        z6 = direct_product(cyclic_table(2), cyclic_table(3))
        assert z6.order == 6
        assert abelian_invariants(z6) == (6,)

    def test_product_with_trivial(self):
        s3 = s3_table()
        prod = direct_product(s3, _trivial())
        assert fingerprint(prod) == fingerprint(s3)

    def test_engine_to_table(self):
        engine = ZmSemidirectEngine(9, 4, 3)
        table = engine_to_table(engine)
        assert table.order == 27
        fp = fingerprint(table)
        assert not fp.abelian
        assert dict(fp.element_orders).get(9, 0) > 0
