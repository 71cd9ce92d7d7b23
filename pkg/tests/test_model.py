import pytest
import sympy
from hypothesis import given, strategies as st

from hcpadic.analytic import poly_divide_exact
from hcpadic.errors import InvalidParameterError
from hcpadic.model import (
    BoundaryField,
    ModelParams,
    existence_gate,
    existence_table,
    functional_equation_residual,
    in_Ep,
    l_polynomial,
    m_polynomial,
    periodic_gate,
    periodic_table,
    ti_gate,
    ti_polynomial,
    u_polynomial,
    u_polynomial_closed_form,
)
from hcpadic.padic import INF, PadicNumber, from_rational

EXISTENCE = {1: [], 2: [3], 3: [7], 4: [3, 5], 5: [31], 6: [3, 7], 7: [127],
             8: [3, 5, 17], 9: [7, 73], 10: [3, 11, 31]}
PERIODIC = {k: [] for k in range(1, 11)} | {2: [3], 8: [3], 9: [7]}


def test_in_Ep():
    assert in_Ep(from_rational(13, 1, 3, 8))
    assert in_Ep(from_rational(1, 1, 3, 8))
    assert not in_Ep(from_rational(3, 1, 3, 8))
    assert not in_Ep(from_rational(2, 1, 3, 8))
    assert not in_Ep(from_rational(3, 1, 2, 8))  # p = 2 needs x ≡ 1 mod 4
    assert in_Ep(from_rational(5, 1, 2, 8))


def test_gates():
    assert existence_gate(3, 2) and existence_gate(7, 3)
    assert not any(existence_gate(2, k) for k in range(1, 40))
    assert periodic_gate(3, 8) and periodic_gate(7, 9)
    assert not periodic_gate(31, 5)
    assert periodic_gate(3, 2)  # p | 0
    assert not ti_gate(3, 4)
    assert ti_gate(7, 3)


def test_existence_table():
    assert existence_table(10, 200) == EXISTENCE
    assert existence_table(10) == EXISTENCE


def test_periodic_table():
    assert periodic_table(10) == PERIODIC


@pytest.mark.parametrize("k", range(1, 41))
def test_existence_row_against_sympy(k):
    want = sorted(q for q in sympy.factorint(2**k - 1) if q <= 10**5)
    assert existence_table(k, 10**5)[k] == want


def test_params_from_coupling_and_fugacity():
    P = ModelParams.from_coupling(3, 2, from_rational(3, 1, 3, 12))
    assert P.lam.valuation == 0 and in_Ep(P.lam)
    Q = ModelParams.from_fugacity(3, 2, P.lam)
    assert (Q.coupling - P.coupling).valuation >= 11
    with pytest.raises(InvalidParameterError):
        ModelParams.from_coupling(3, 2, from_rational(1, 1, 3, 12))
    with pytest.raises(InvalidParameterError):
        ModelParams.from_fugacity(3, 2, 2)
    with pytest.raises(InvalidParameterError):
        ModelParams.from_fugacity(3, 0, 13)


def test_params_json_round_trip(p3k2):
    Q = ModelParams.from_json(p3k2.to_json())
    assert Q.p == 3 and Q.k == 2
    assert (Q.lam - p3k2.lam).valuation >= p3k2.precision


def test_boundary_field_validation():
    z = from_rational(13, 1, 3, 8)
    with pytest.raises(InvalidParameterError):
        BoundaryField.constant(from_rational(2, 1, 3, 8))
    with pytest.raises(InvalidParameterError):
        BoundaryField("alternating", (z,))
    b = BoundaryField.alternating(z, z * 4)
    assert b.at_level(3).residue(3) == (13 * 4) % 27
    assert BoundaryField.from_json(b.to_json()).kind == "alternating"


def test_ti_polynomial_shape(p3k2):
    F = ti_polynomial(p3k2, 10)
    assert F.degree == 3
    assert F.eval_residue(4, 9) == 0


@pytest.mark.parametrize("p,k,lam", [(3, 2, 13), (7, 3, 8), (5, 4, 6), (7, 9, 8), (3, 3, 4)])
def test_m_times_u_is_l(p, k, lam):
    P = ModelParams.from_fugacity(p, k, lam, 24)
    L, M, U = l_polynomial(P, 24), m_polynomial(P, 24), u_polynomial(P, 24)
    assert U.degree == k * k - k
    assert (M * U).congruent(L)
    assert poly_divide_exact(L, M).congruent(u_polynomial_closed_form(P, 24))


@given(st.sampled_from([(3, 2), (7, 3), (5, 4)]), st.integers(0, 10**6))
def test_l_vanishes_on_two_cycles(pk, t):
    # every root of M is a root of L; check on the fixed point z = lam at p=7,k=3
    p, k = pk
    lam = 1 + p * (t % p**6)
    P = ModelParams.from_fugacity(p, k, lam, 20)
    L, M = l_polynomial(P, 20), m_polynomial(P, 20)
    for r in range(1, p**3, p):
        if M.eval_residue(r, p**3) == 0:
            assert L.eval_residue(r, p**3) == 0


def test_residual_exact_identity(p7k3):
    z = PadicNumber.from_residue(8, 7, 32)
    assert functional_equation_residual(BoundaryField.constant(z), p7k3) == INF


def test_residual_alternating_mod27(p3k2):
    b = BoundaryField.alternating(PadicNumber.from_residue(19, 3, 3), PadicNumber.from_residue(16, 3, 3))
    assert functional_equation_residual(b, p3k2) >= 3


def test_residual_constant_one_is_finite(p3k2):
    one = PadicNumber.from_residue(1, 3, 20)
    assert functional_equation_residual(BoundaryField.constant(one), p3k2) < 20
