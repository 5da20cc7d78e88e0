import json

import pytest

from sweepwords.errors import InvalidInput
from sweepwords.exactalg import Matrix, MatrixTuple, big_integer, prime_field
from sweepwords.genericity import DEFAULT_PRIME
from sweepwords.witness import (
    build_and_verify,
    build_witness,
    reported_constants,
    verify_witness,
)
from sweepwords.words import build_word_grid


class TestBuildWitness:
    def test_n2_support_and_exponents(self):
        spec, t = build_witness(2, 2)
        assert spec.support == {(1, 1, 1): 0, (2, 1, 2): 1, (2, 2, 1): 2}
        assert spec.base == 9  # 2 * d * n^2 + 1 with d = 1
        assert spec.m_constant == 8  # 2! * (2^1)^2
        x, y = t.matrices
        assert x.rows() == [[1, 0], [0, 0]]
        assert y.rows() == [[0, 9], [81, 0]]

    def test_base_hint_respected(self):
        spec, _ = build_witness(2, 2, base_hint=10)
        assert spec.base == 10
        spec, _ = build_witness(2, 2, base_hint=5)
        assert spec.base == 9

    def test_base_override_bypasses_formula(self):
        spec, _ = build_witness(2, 2, base_override=2)
        assert spec.base == 2
        with pytest.raises(InvalidInput):
            build_witness(2, 2, base_override=1)

    def test_exponents_are_distinct(self):
        for n in range(2, 7):
            spec, _ = build_witness(n, 2)
            exps = list(spec.support.values())
            assert sorted(exps) == list(range(len(exps)))

    def test_support_positions_match_certificate_variables(self):
        from sweepwords.words import certificate_monomial

        for n in (3, 4, 6):
            spec, _ = build_witness(n, 2)
            assert set(spec.support) == set(certificate_monomial(n, 2).exponents)


class TestVerifyWitness:
    def test_n2_base_ten_discriminant(self):
        spec, t = build_witness(2, 2, base_hint=10)
        value = verify_witness(t, build_word_grid(2, 2))
        # upper-triangular evaluation: product of B^0*B^0, B^0*B^1,
        # B^0*B^2, B^1*B^2 = B^6
        assert value == 10**6

    def test_all_zero_tuple_gives_zero(self):
        ring = big_integer()
        zero = Matrix.zeros(2, ring)
        assert verify_witness(MatrixTuple((zero, zero)), build_word_grid(2, 2)) == 0

    def test_n3_is_nonzero(self):
        _, t = build_witness(3, 2)
        assert verify_witness(t, build_word_grid(3, 2)) != 0

    def test_requires_integer_ring(self):
        ring = prime_field(101)
        t = MatrixTuple((Matrix.identity(2, ring), Matrix.identity(2, ring)))
        with pytest.raises(InvalidInput):
            verify_witness(t, build_word_grid(2, 2))


class TestBuildAndVerify:
    def test_no_escalations_needed_at_small_sizes(self):
        for n in (2, 3, 4):
            report, _ = build_and_verify(n, 2)
            assert report.certified
            assert report.escalations == 0

    def test_escalation_squares_the_base(self):
        calls = []

        def flaky(t, grid):
            calls.append(t.matrices[1].entries)
            return 0 if len(calls) <= 2 else verify_witness(t, grid)

        report, _ = build_and_verify(2, 2, base_override=10, _verifier=flaky)
        assert report.escalations == 2
        assert report.spec.base == 10**4  # squared twice
        assert report.certified

    def test_gives_up_after_max_escalations(self):
        report, _ = build_and_verify(
            2, 2, base_override=10, max_escalations=2, _verifier=lambda t, g: 0
        )
        assert not report.certified
        assert report.escalations == 2

    def test_reproducible_byte_for_byte(self):
        a, _ = build_and_verify(4, 2)
        b, _ = build_and_verify(4, 2)
        assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(
            b.to_json(), sort_keys=True
        )

    def test_reduction_mod_prime_agrees(self):
        p = DEFAULT_PRIME
        pring = prime_field(p)
        for n in (2, 3, 4):
            report, t = build_and_verify(n, 2)
            reduced = MatrixTuple(
                tuple(Matrix.from_rows(m.rows(), pring) for m in t.matrices)
            )
            grid = build_word_grid(n, 2)
            from sweepwords.exactalg import discriminant
            from sweepwords.genericity import evaluate_words

            dp = discriminant(evaluate_words(grid.flatten(), reduced))
            assert dp == report.discriminant % p


class TestReportedConstants:
    def test_n2(self):
        data = reported_constants(2, 2)
        assert data["m_constant"] == "8"
        assert data["c_values"] == [3]
        assert data["gbar"] == 2

    def test_n4(self):
        data = reported_constants(4, 2)
        # s = 2 term: 2 * gbar * (gbar - 1) + 1 = 5 for gbar = 2
        assert data["c_values"] == [3, 5]
        assert data["c_sum"] == 8

    def test_n8(self):
        data = reported_constants(8, 2)
        assert data["c_values"] == [3, 5, 10]
        assert data["as_printed"] is True
