"""Witness-construction tests: surveys, extensions, selections, lifts, cells."""

import pytest

from geolang.classify import NotPE, PE, recheck_certificate
from geolang.geodesics import is_geodesic, validate_genset
from geolang.groups import (
    BS12Engine,
    ExtensionEngine,
    ProductEngine,
    TableEngine,
    ZmSemidirectEngine,
    ZnC2Engine,
    cyclic_table,
    q8_table,
    s3_table,
    trivial_table,
)
from geolang.witnesses import (
    BadParams,
    LiftCertificate,
    MismatchedCell,
    SelectionFailed,
    Table1Report,
    build_quotient_spec,
    cannon_report,
    extension_genset,
    lift_witness,
    q8_survey,
    quotient_family_witness,
    sample_znc2_gensets,
    standard_witnesses,
    table1_report,
    znc2_generates,
    znc2_standard_generators_within,
    znc2_witness,
)
from geolang.words import format_word

from oracles import naive_genset_distances


class TestQ8Survey:
    def test_counts_and_verdicts(self):
        report = q8_survey()
        assert report.total_subsets == 16
        assert report.generating_count == 8
        assert report.all_pe
        generating = [e for e in report.entries if e.generating]
        assert len(generating) == 8
        for entry in generating:
            assert isinstance(entry.verdict, PE)
            assert entry.cancellation_pairs_forbidden

    def test_matches_subset_oracle(self):
        # independent oracle: subset closure inside the multiplication table
        table = q8_table()
        atoms = [("-1",), ("i", "-i"), ("j", "-j"), ("k", "-k")]
        expected = set()
        for mask in range(1, 16):
            names = tuple(
                n for bit, atom in enumerate(atoms) if mask & (1 << bit) for n in atom
            )
            elements = {table.names.index(n) for n in names}
            if len(table.subgroup_closure(elements)) == table.order:
                expected.add(names)
        report = q8_survey()
        got = {e.element_names for e in report.entries if e.generating}
        assert got == expected


class TestExtensionConstruction:
    def test_z2_by_z(self):
        result = extension_genset(cyclic_table(2), 1, bound=6)
        assert result.matches
        names = {format_word(w) for w in result.forbidden.sorted_words()}
        assert names == {"g g", "t t^-1", "t^-1 t"}

    def test_s3_by_z(self):
        result = extension_genset(s3_table(), 1, bound=6)
        assert result.matches
        assert len(result.forbidden) == 25 + 2

    def test_z3_inversion_action(self):
        result = extension_genset(cyclic_table(3), 1, actions=[(0, 2, 1)], bound=6)
        assert result.matches

    def test_q8_rank_two(self):
        result = extension_genset(q8_table(), 2, bound=4)
        assert result.matches
        assert len(result.forbidden) == 49 + 4


class TestZnC2Generation:
    def engine(self, n=1):
        return ZnC2Engine(n, ("invert", 1))

    def test_standard_set_generates(self):
        genset = validate_genset(self.engine(), [("x", "x1"), ("y", "y")])
        assert znc2_generates(genset)
        assert znc2_standard_generators_within(genset)

    def test_index_two_sublattice_rejected(self):
        engine = self.engine()
        genset = validate_genset(engine, [("u", "x1 x1"), ("y", "y")])
        assert not znc2_generates(genset)

    def test_no_twisted_letter_rejected(self):
        engine = ZnC2Engine(2, ("swap", 1, 2))
        genset = validate_genset(engine, [("u", "x1"), ("v", "x2")])
        assert not znc2_generates(genset)

    def test_sampler_yields_valid_sets(self):
        sets = sample_znc2_gensets(2, ("swap", 1, 2), count=5, seed=3)
        assert len(sets) == 5
        for genset in sets:
            assert znc2_generates(genset)


class TestZnC2Witness:
    def test_worked_invert_standard(self):
        engine = ZnC2Engine(1, ("invert", 1))
        genset = validate_genset(engine, [("x", "x1"), ("y", "y")])
        cert = znc2_witness(1, ("invert", 1), genset)
        assert cert.subcase == "1A"
        assert format_word(cert.verdict.witness) == "x y x^-1"
        assert genset.evaluate_state(cert.verdict.witness) == ((2,), 1)
        assert recheck_certificate(genset, cert.verdict)

    def test_worked_swap_standard(self):
        engine = ZnC2Engine(2, ("swap", 1, 2))
        genset = validate_genset(
            engine, [("x1", "x1"), ("x2", "x2"), ("y", "y")]
        )
        cert = znc2_witness(2, ("swap", 1, 2), genset)
        assert cert.subcase == "2A"
        assert format_word(cert.verdict.witness) == "x1 y x1^-1"
        assert genset.evaluate_state(cert.verdict.witness) == ((1, -1), 1)

    def test_worked_all_involutions(self):
        engine = ZnC2Engine(1, ("invert", 1))
        genset = validate_genset(engine, [("u", "x1 y"), ("y", "y")])
        cert = znc2_witness(1, ("invert", 1), genset)
        assert cert.subcase == "1B"
        assert cert.a.name == "u"
        assert cert.b.name == "y"
        assert genset.evaluate_state(cert.verdict.witness) == ((2,), 1)

    def test_random_sets_never_fail(self):
        for n, phi in [(1, ("invert", 1)), (2, ("swap", 1, 2))]:
            for genset in sample_znc2_gensets(n, phi, count=15, seed=17):
                cert = znc2_witness(n, phi, genset)
                naive = naive_genset_distances(genset, 3)
                state = genset.evaluate_state(cert.verdict.witness)
                assert naive[state] == 3

    def test_rejects_wrong_engine(self):
        engine = ZnC2Engine(1, ("invert", 1))
        genset = validate_genset(engine, [("x", "x1"), ("y", "y")])
        with pytest.raises(Exception):
            znc2_witness(2, ("swap", 1, 2), genset)


class TestQuotientFamilies:
    def test_z5_case_e(self):
        cert = quotient_family_witness("Z5_caseE", m=1)
        assert isinstance(cert.verdict, NotPE)
        assert format_word(cert.verdict.witness) == "ax xa ax^-1"
        # distance exactly three, already verified geodesic by construction
        assert is_geodesic(cert.genset, cert.verdict.witness)

    def test_bsquot_z3_witness_element(self):
        cert = quotient_family_witness("BSquot_Z", n=3)
        state = cert.genset.evaluate_state(cert.verdict.witness)
        # the witness equals the twist generator itself: normal form (0, 1)
        assert state == (0, 1)

    def test_bsquot_finite_flags(self):
        assert not quotient_family_witness(
            "BSquot_finite", n=15, m=4
        ).outside_recorded_derivation
        assert quotient_family_witness(
            "BSquot_finite", n=5, m=4
        ).outside_recorded_derivation

    def test_bad_params(self):
        with pytest.raises(BadParams):
            quotient_family_witness("BSquot_Z", n=4)
        with pytest.raises(BadParams):
            quotient_family_witness("BSquot_finite", n=7, m=3)
        with pytest.raises(BadParams):
            quotient_family_witness("BSquot_finite", n=9, m=4)
        with pytest.raises(BadParams):
            quotient_family_witness("Z5_caseE", m=0)
        with pytest.raises(BadParams):
            quotient_family_witness("nope")

    def test_s3_involutions(self):
        cert = quotient_family_witness("S3_inv")
        assert format_word(cert.verdict.witness) == "a b a"


class TestStandardWitnesses:
    def test_all_distance_three(self):
        for label, genset, cert in standard_witnesses():
            verdict = cert if isinstance(cert, NotPE) else cert.verdict
            assert isinstance(verdict, NotPE), label
            assert len(verdict.witness) == 3, label
            assert is_geodesic(genset, verdict.witness), label
            assert recheck_certificate(genset, verdict), label


class TestLifting:
    def test_s3_times_z(self):
        s3 = s3_table()
        engine = ExtensionEngine(s3, 1)
        a_name = s3.names[s3.names.index("p021")]
        b_name = s3.names[s3.names.index("p102")]
        source = validate_genset(
            engine, [("a", a_name), ("b", b_name), ("t", "t")]
        )
        target = TableEngine(s3)
        spec = build_quotient_spec(
            source, target, {"a": a_name, "b": b_name, "t": ""}
        )
        cert = lift_witness(spec, "a b a")
        assert isinstance(cert, LiftCertificate)
        assert format_word(cert.lifted) == "a b a"
        assert is_geodesic(source, cert.lifted)

    def test_bs12_onto_z3_semidirect(self):
        source = validate_genset(
            BS12Engine(), [("at", "a t"), ("ta", "t a")]
        )
        target = ZmSemidirectEngine(3, 2, None)
        spec = build_quotient_spec(source, target, {"at": "a t", "ta": "t a"})
        cert = lift_witness(spec, "at ta at^-1")
        assert format_word(cert.lifted) == "at ta at^-1"
        assert is_geodesic(source, cert.lifted)

    def test_product_projection(self):
        phi = ("swap", 1, 2)
        znc2 = ZnC2Engine(2, phi)
        prod = ProductEngine(znc2, TableEngine(cyclic_table(2)))
        source = validate_genset(
            prod,
            [("x1", "x1_1"), ("x2", "x2_1"), ("y", "y_1"), ("z", "g_2")],
        )
        spec = build_quotient_spec(
            prod_source := source,
            znc2,
            {"x1": "x1", "x2": "x2", "y": "y", "z": ""},
        )
        inner = validate_genset(znc2, [("x1", "x1"), ("x2", "x2"), ("y", "y")])
        witness = znc2_witness(2, phi, inner).verdict.witness
        cert = lift_witness(spec, format_word(witness))
        assert is_geodesic(prod_source, cert.lifted)

    def test_rejects_non_geodesic_quotient_witness(self):
        source = validate_genset(BS12Engine(), [("a", "a"), ("t", "t")])
        target = ZmSemidirectEngine(3, 2, None)
        spec = build_quotient_spec(source, target, {"a": "a", "t": "t"})
        # the conjugate collapses to a single letter in the quotient
        with pytest.raises(Exception):
            lift_witness(spec, "t^-1 a t")

    def test_rejects_non_homomorphism(self):
        source = validate_genset(BS12Engine(), [("a", "a"), ("t", "t")])
        target = ZmSemidirectEngine(5, 3, None)
        with pytest.raises(Exception):
            build_quotient_spec(source, target, {"a": "a", "t": "t"})


@pytest.fixture(scope="module")
def table1():
    return table1_report()


class TestTable1:
    # Four cells recorded as Z/6xZ/2 are refuted by enumeration: the two
    # relations force abelianization Z/4, and the presented group is the
    # dicyclic group of order 12.  Everything else reproduces exactly.
    REFUTED = {
        ("b^-1 a^-1", "b^-1"),
        ("a^-1 b", "b^-1"),
        ("a^-1", "a^-1 b^-1"),
        ("a^-1", "b^-1 a"),
    }

    def test_counts(self, table1):
        total, passed, partial, failed = table1.counts()
        assert total == 49
        assert failed == 4
        assert partial == 12
        assert passed == 33
        assert table1.summary() == "total=49 pass=33 partial=12 fail=4"

    def test_refuted_cells_are_the_recorded_erratum(self, table1):
        failing = {
            (c.row_word, c.col_word): c for c in table1.cells if not c.ok
        }
        assert set(failing) == self.REFUTED
        for cell in failing.values():
            assert cell.claim == "Z/6xZ/2"
            assert cell.order == 12  # order itself agrees
            assert "abelianization (4,)" in cell.note

    def test_orders_all_match_recorded_orders(self, table1):
        # even the refuted cells have the recorded order 12
        claim_orders = {
            "Q8": 8, "1": 1, "SL(2,3)": 24, "Z/2": 2, "S3": 6, "Z/5": 5,
            "Z/6": 6, "Z/3": 3, "Z/9:Z/3": 27, "Z/6xZ/2": 12,
        }
        for cell in table1.cells:
            if cell.order is not None:
                assert cell.order == claim_orders[cell.claim]

    def test_known_cells(self, table1):
        by_key = {(c.row_word, c.col_word): c for c in table1.cells}
        q8 = by_key[("a^-1", "b^-1")]
        assert q8.claim == "Q8" and q8.order == 8 and q8.ok
        one = by_key[("b^-1 a", "a^-1 b")]
        assert one.claim == "1" and one.order == 1 and one.ok
        z9 = by_key[("a^-1 a^-1", "b^-1 b^-1")]
        assert z9.claim == "Z/9:Z/3" and z9.order == 27 and z9.gap_id == "[27,4]"
        sl = by_key[("b^-1 a^-1", "a^-1 b^-1")]
        assert sl.claim == "SL(2,3)" and sl.order == 24 and sl.gap_id == "[24,3]"
        bs = by_key[("a a", "a^-1 b")]
        assert bs.claim == "BS(1,2)" and bs.partial and bs.order is None

    def test_transposed_cells_agree(self, table1):
        by_key = {(c.row_word, c.col_word): c for c in table1.cells}
        rows, cols = report_words()
        for r in range(7):
            for c in range(7):
                cell = by_key[(rows[r], cols[c])]
                mirror = by_key[(rows[c], cols[r])]
                assert cell.claim == mirror.claim
                assert cell.order == mirror.order
                assert cell.ok == mirror.ok

    def test_strict_mode_raises(self):
        with pytest.raises(MismatchedCell):
            table1_report(strict=True)


def report_words():
    from geolang.witnesses import _COL_CHOICES, _ROW_CHOICES

    return _ROW_CHOICES, _COL_CHOICES


class TestCannon:
    def test_report(self):
        report = cannon_report(maxlen=4)
        assert report.standard_sizes[0] == 1
        assert report.extended_sizes[0] == 1
        assert isinstance(report.standard_certificate.verdict, NotPE)
        assert isinstance(report.extended_certificate.verdict, NotPE)
        assert (
            format_word(report.extended_certificate.verdict.witness)
            == "c t c^-1"
        )
