import random

import pytest

from lpilab.checkers import (
    al_verify,
    bounds_from_d,
    check_group_identity,
    check_lpi,
    finite_annihilator,
    idempotent_centrality,
    infinite_counterexample,
    minimal_polynomial,
    nil_exponent_search,
    quotient_pi_check,
    s3_expand,
    square_zero_nilpotency,
    vandermonde_nil,
)
from lpilab.errors import CapExceeded, PreconditionError, SolveError
from lpilab.freegroup import Word
from lpilab.group_algebra import LaurentElement, gi_to_lpi, standard_polynomial
from lpilab.matrix_algebra import Matrix, evaluate, matrix_unit, parse_algebra
from lpilab.rings import ZZ, PrimeField, UniPoly, unipoly_eval

f2 = PrimeField(2)
M2F2 = parse_algebra("M2@Fp:2")


def test_check_lpi_standard_identity_holds():
    v = check_lpi(M2F2, standard_polynomial(4), mode="exhaustive")
    assert v.holds()
    assert v.evaluations == 16**4


def test_check_lpi_s3_counterexample_and_reverify():
    v = check_lpi(M2F2, standard_polynomial(3), mode="exhaustive")
    assert v.outcome == "counterexample"
    # first violating triple in enumeration order, found independently by
    # a brute-force sweep: (e22, e21, e12) evaluating to e11
    assert v.evaluations == 293
    assignment = v.witness["assignment"]
    assert assignment[1] == Matrix(f2, [[0, 0], [0, 1]])
    assert assignment[2] == matrix_unit(f2, 2, 2, 1)
    assert assignment[3] == matrix_unit(f2, 2, 1, 2)
    assert v.witness["value"] == matrix_unit(f2, 2, 1, 1)
    revalue = evaluate(standard_polynomial(3), assignment)
    assert revalue == v.witness["value"]


def test_check_lpi_units_ground_for_negative_exponents():
    # GL_2(F_2) has order 6, so u^-6 = 1 on every unit; the negative
    # exponent restricts the scan to the 6 units
    e = gi_to_lpi(Word.gen(1, -6))
    v = check_lpi(M2F2, e, mode="exhaustive")
    assert v.holds()
    assert v.details["ground"] == "units"
    assert v.evaluations == 6


def test_check_lpi_element_ground_without_negative_exponents():
    # without inverses the scan covers all 16 elements and 1 - x1^6
    # genuinely dies at x1 = 0
    e = gi_to_lpi(Word.gen(1, 6))
    v = check_lpi(M2F2, e, mode="exhaustive")
    assert v.outcome == "counterexample"
    assert v.details["ground"] == "elements"
    assert v.witness["assignment"][1].is_zero()


def test_check_lpi_prefilter_on_nonzero_coefficient_sum():
    e = LaurentElement(ZZ, [(Word(), 1), (Word.gen(1), -1), (Word.gen(1, 2), 1)])
    v = check_lpi(M2F2, e)
    assert v.outcome == "counterexample"
    assert v.evaluations == 1
    assert "prefilter" in v.details
    assert v.witness["value"] == M2F2.identity()


def test_check_lpi_random_mode_is_seeded():
    a = check_lpi(M2F2, standard_polynomial(3), mode="random", budget=200, seed=5)
    b = check_lpi(M2F2, standard_polynomial(3), mode="random", budget=200, seed=5)
    assert a.outcome == b.outcome
    assert a.evaluations == b.evaluations
    if a.outcome == "counterexample":
        assert a.witness["assignment"] == b.witness["assignment"]


def test_check_lpi_workers_agree_with_single_process():
    v1 = check_lpi(M2F2, standard_polynomial(3), workers=1)
    v2 = check_lpi(M2F2, standard_polynomial(3), workers=2)
    assert v1.outcome == v2.outcome == "counterexample"
    assert v1.witness["assignment"] == v2.witness["assignment"]


def test_check_lpi_zero_element():
    assert check_lpi(M2F2, LaurentElement.zero(ZZ)).holds()


def test_check_lpi_cap():
    with pytest.raises(CapExceeded):
        check_lpi(M2F2, standard_polynomial(4), cap=1000)


def test_al_verify_holds_exactly():
    v = al_verify(2, 2)
    assert v.holds()
    assert v.evaluations == 65536
    assert v.details["tuple_space"] == 65536


def test_al_verify_random():
    v = al_verify(2, 3, mode="random", budget=50, seed=1)
    assert v.holds()
    assert v.evaluations == 50


def test_al_verify_workers_match():
    v = al_verify(2, 2, workers=2)
    assert v.holds()
    assert v.evaluations == 65536


def test_check_group_identity():
    v = check_group_identity(M2F2, Word.gen(1, 6))
    assert v.holds() and v.evaluations == 6
    v = check_group_identity(M2F2, Word.gen(1, 2))
    assert v.outcome == "counterexample"
    # first unit whose square is not the identity, by enumeration order
    assert v.witness["assignment"][1] == Matrix(f2, [[0, 1], [1, 1]])
    assert check_group_identity(M2F2, Word()).holds()


def test_check_group_identity_random():
    v = check_group_identity(M2F2, Word.gen(1, 2), mode="random", budget=400, seed=3)
    assert v.outcome == "counterexample"
    w = v.witness["assignment"][1]
    assert w.mul(w) != M2F2.identity()


def test_minimal_polynomial_cases():
    e11 = matrix_unit(f2, 2, 1, 1)
    assert minimal_polynomial(e11) == UniPoly(f2, [0, 1, 1])       # X^2 + X
    ident = M2F2.identity()
    assert minimal_polynomial(ident) == UniPoly(f2, [1, 1])        # X + 1
    e12 = matrix_unit(f2, 2, 1, 2)
    assert minimal_polynomial(e12) == UniPoly(f2, [0, 0, 1])       # X^2
    m = Matrix(f2, [[0, 1], [1, 1]])
    assert minimal_polynomial(m) == UniPoly(f2, [1, 1, 1])
    z = Matrix(ZZ, [[2, 1], [0, 2]])
    mu = minimal_polynomial(z)
    assert mu == UniPoly(ZZ, [4, -4, 1])  # (X - 2)^2
    assert unipoly_eval(mu, z).is_zero()


def test_minimal_polynomial_annihilates_seeded():
    rng = random.Random(17)
    alg = parse_algebra("M3@Fp:5")
    for _ in range(40):
        m = alg.sample_element(rng)
        mu = minimal_polynomial(m)
        assert unipoly_eval(mu, m).is_zero()
        assert mu.coeff(mu.degree) == 1


def test_nilbound_triangular_families_hold():
    v = nil_exponent_search(parse_algebra("T2@Fp:2"))
    assert v.holds()
    assert v.details["minimal_m_nilpotent"] == 2
    assert v.details["non_nilpotent"] == 0
    assert v.details["quadruples"] == 416
    v3 = nil_exponent_search(parse_algebra("T3@Fp:2"))
    assert v3.holds()
    assert v3.details["minimal_m_nilpotent"] == 2
    assert v3.details["quadruples"] == 242688


def test_nilbound_full_matrices_find_non_nilpotent_products():
    """The full 2x2 algebra genuinely contains quadruples with a^2 = bc = 0
    whose product bacu is not nilpotent (b = c = e12, a = e21, u = e21
    gives bacu = e11 up to ordering), so the verdict must be a
    counterexample with the skipped products counted."""
    v = nil_exponent_search(M2F2)
    assert v.outcome == "counterexample"
    assert v.details["non_nilpotent"] == 432
    assert v.details["minimal_m_nilpotent"] == 2
    assert v.details["quadruples"] == 3712
    w = v.witness
    assert w["a"].mul(w["a"]).is_zero()
    assert w["b"].mul(w["c"]).is_zero()
    product = w["b"].mul(w["a"]).mul(w["c"]).mul(w["u"])
    assert product == w["bacu"]
    assert not product.power(2).is_zero()


def test_nilbound_m_max_cutoff():
    # T3 contains nilpotent products; with m_max below their index the
    # verdict flips to a counterexample carrying an index witness
    v = nil_exponent_search(parse_algebra("T3@Fp:2"), m_max=1)
    assert v.outcome == "counterexample"
    w = v.witness
    assert not w["bacu"].is_zero()  # index above 1


def test_nilbound_random_mode():
    v = nil_exponent_search(parse_algebra("T2@Fp:2"), mode="random", budget=300, seed=8)
    assert v.holds()
    assert v.details["minimal_m_nilpotent"] <= 2


def test_square_zero_nilpotency():
    v = square_zero_nilpotency(M2F2, 1)
    assert v.holds()
    assert v.details["checked"] == 10
    assert v.details["skipped_non_nilpotent"] == 6
    v3 = square_zero_nilpotency(parse_algebra("T3@Fp:2"), 1)
    assert v3.holds()


def test_vandermonde_nil_components():
    f101 = PrimeField(101)
    f = UniPoly(f101, [7, 2, 0, 5])
    v = Matrix(f101, [[1, 2, 3], [0, 1, 4], [5, 0, 1]])
    u = Matrix(f101, [[2, 1, 0], [1, 0, 1], [3, 2, 1]])
    comps, verdict = vandermonde_nil(f, v, u, [1, 2, 3])
    vu = v.mul(u)
    assert comps == [vu.power(i).scale(f.coeff(i)) for i in (1, 2, 3)]
    assert verdict.holds()


def test_vandermonde_nil_detects_nilpotent_product():
    # vu = e12 is nilpotent of index 2, so with f = X^2 both positive
    # components vanish and the closing check (vu)^2 = 0 fires
    f = UniPoly(ZZ, [0, 0, 1])
    v = matrix_unit(ZZ, 2, 1, 2)
    u = Matrix(ZZ, [[0, 0], [0, 1]])
    comps, verdict = vandermonde_nil(f, v, u, [1, 2])
    assert all(c.is_zero() for c in comps)
    assert verdict.holds()
    assert verdict.details["vu_power_zero"] is True


def test_vandermonde_nil_rejects_bad_lambdas():
    f = UniPoly(f2, [1, 1])
    v = u = matrix_unit(f2, 2, 1, 2)
    with pytest.raises(PreconditionError):
        vandermonde_nil(f, v, u, [0])
    with pytest.raises(PreconditionError):
        vandermonde_nil(f, v, u, [1, 1])
    with pytest.raises(PreconditionError):
        vandermonde_nil(f, v, u, [1, 2])  # only one nonzero scalar in F2


def test_finite_annihilator_m2f2():
    res = finite_annihilator(M2F2)
    # enumerated independently: distinct cycle shapes (1,2) (1,3) (1,4) (2,3)
    assert res.g == UniPoly(f2, [0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1])
    assert res.g.degree == 12
    assert [f for f, _ in res.factors] == [(1, 2), (1, 3), (1, 4), (2, 3)]
    assert dict(res.factors) == {(1, 2): 8, (1, 3): 3, (1, 4): 2, (2, 3): 3}
    assert res.pairs_checked == 16


def test_finite_annihilator_without_merging():
    res = finite_annihilator(M2F2, merge_duplicates=False)
    assert res.g.degree == 42  # every element contributes its own factor
    sq0 = list(M2F2.enumerate_square_zero())
    for a in sq0:
        for b in sq0:
            assert unipoly_eval(res.g, a.mul(b)).is_zero()


def test_infinite_counterexample_within_trial_bound():
    g = UniPoly(ZZ, [0, 2, 1])
    hit = infinite_counterexample(g)
    assert hit.trials <= g.degree + 1
    assert hit.a.mul(hit.a).is_zero()
    assert hit.b.mul(hit.b).is_zero()
    assert not unipoly_eval(g, hit.a.mul(hit.b)).is_zero()
    # constant g succeeds immediately
    assert infinite_counterexample(UniPoly(ZZ, [3])).trials == 1
    with pytest.raises(PreconditionError):
        infinite_counterexample(UniPoly(ZZ))


def test_bounds_from_d():
    assert bounds_from_d(3) == (6, 7)
    assert bounds_from_d(1) == (2, 4)
    assert bounds_from_d(3, q=4) == (6, 4)
    assert bounds_from_d(1, q=3) == (2, 3)
    with pytest.raises(PreconditionError):
        bounds_from_d(0)
    with pytest.raises(PreconditionError):
        bounds_from_d(3, q=1)


def test_s3_expand_report():
    rec = s3_expand()
    assert rec["match_over_ZZ"] is False
    assert rec["match_mod2"] is True
    # the expansion itself, computed by brute force over ZZ
    exp = rec["expansion"]
    assert exp.coefficient(Word(((1, 1), (2, 1), (1, 1), (2, 1)))) == 2
    assert exp.coefficient(Word(((2, 1), (1, 1), (2, 1), (1, 1)))) == 1
    assert exp.coefficient(Word(((1, 2), (2, 2)))) == -1
    assert exp.coefficient(Word(((2, 1), (1, 2), (2, 1)))) == -1
    assert exp.coefficient(Word(((1, 1), (2, 2), (1, 1)))) == -1
    disagreements = [row for row in rec["table"] if not row["agree"]]
    assert disagreements  # the two forms differ over ZZ


def test_idempotent_centrality():
    violators = idempotent_centrality(M2F2)
    idems = {e for e, _ in violators}
    assert len(violators) == 6
    assert matrix_unit(f2, 2, 1, 1) in idems
    assert M2F2.identity() not in idems
    assert M2F2.zero() not in idems
    for e, m in violators:
        assert e.mul(e) == e
        assert e.mul(m) != m.mul(e)


def test_quotient_pi_check():
    v = quotient_pi_check(2, samples=300, seed=21)
    assert v.holds()
    assert v.details["s2_nonzero"] and v.details["s3_nonzero"]
    assert v.details["s2_at_units"] == "x*y - y*x"
    v1 = quotient_pi_check(1, seed=21)
    assert v1.outcome == "counterexample"


def test_verdict_timing_and_seed_fields():
    v = check_lpi(M2F2, standard_polynomial(3), mode="random", budget=10, seed=99)
    assert v.seed == 99
    assert v.mode == "random"
    assert isinstance(v.elapsed_ms, int)
