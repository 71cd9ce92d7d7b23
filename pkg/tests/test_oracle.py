import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hcpadic.errors import CapExceededError, InvalidParameterError
from hcpadic.model import BoundaryField, ModelParams
from hcpadic.oracle import (
    AdmissibleConfiguration,
    OracleReport,
    Topology,
    build_volume,
    check_compatibility,
    compat_report,
    count_admissible,
    count_admissible_dp,
    enumerate_admissible,
    measure_summary,
    measure_weight,
    mu_n,
    norms_report,
    omega_count_closed_form,
    omega_norm,
    partition_function,
)
from hcpadic.padic import INF, PadicNumber, congruent
from hcpadic.solve import periodic_solve, ti_solve

KB, FULL = Topology.KBRANCH, Topology.FULL_CAYLEY


def brute_count(vol):
    edges = vol.edges()
    return sum(all(not (s[a] and s[b]) for a, b in edges)
               for s in itertools.product((0, 1), repeat=vol.size))


def test_volume_sizes():
    assert build_volume(2, 1, FULL).size == 4
    assert build_volume(2, 2, FULL).size == 10
    assert build_volume(3, 1, KB).size == 4
    v = build_volume(3, 3, FULL, cap=None)
    assert [len(v.level(m)) for m in range(4)] == [1, 4, 12, 36]
    assert v.size == 1 + 4 * (27 - 1) // 2


def test_cap():
    with pytest.raises(CapExceededError):
        build_volume(2, 4, FULL)
    assert build_volume(2, 4, FULL, cap=None).size == 46


def test_small_counts():
    assert count_admissible(build_volume(2, 1, FULL)) == 9
    assert count_admissible(build_volume(5, 0, FULL)) == 2
    assert len(list(enumerate_admissible(build_volume(2, 1, FULL)))) == 9


@pytest.mark.parametrize("k,n,topo", [(1, 4, KB), (2, 2, KB), (2, 2, FULL), (3, 1, FULL), (2, 3, KB), (3, 2, KB)])
def test_counts_match_brute_force(k, n, topo):
    vol = build_volume(k, n, topo)
    configs = list(enumerate_admissible(vol))
    assert all(c.is_admissible() for c in configs)
    assert len({c.mask for c in configs}) == len(configs)
    assert len(configs) == count_admissible(vol) == brute_count(vol)


@given(st.integers(1, 5), st.integers(0, 6), st.sampled_from([KB, FULL]))
def test_dp_matches_generic_tree_recursion(k, n, topo):
    # independent recursion over explicit children lists
    vol = build_volume(k, n, topo, cap=None) if n <= 4 else None
    if vol is None or vol.size > 2000:
        return
    kids = {v: [] for v in range(vol.size)}
    for a, b in vol.edges():
        kids[a].append(b)

    def rec(v):
        occ, vac = 1, 1
        for c in kids[v]:
            co, cv = rec(c)
            occ *= cv
            vac *= co + cv
        return occ, vac

    assert sum(rec(0)) == count_admissible_dp(k, n, topo)


def test_closed_form_values():
    assert omega_count_closed_form(2, 2) == 513
    assert omega_norm(2, 2, 3) == Fraction(1, 27)
    assert omega_count_closed_form(3, 1) == 17
    assert omega_norm(3, 1, 7) == 1
    with pytest.raises(InvalidParameterError):
        omega_count_closed_form(1, 3)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_closed_form_agrees_on_stars(k):
    assert count_admissible_dp(k, 1, FULL) == omega_count_closed_form(k, 1)


def test_closed_form_departs_from_true_count_at_depth_two():
    # 2 + 2^9 counts every configuration with the root vacant as free; the
    # hard-core constraint between levels 1 and 2 cuts that down
    assert count_admissible_dp(2, 2, FULL) == 189
    assert omega_count_closed_form(2, 2) == 513


def _ti_boundary(P):
    return BoundaryField.constant(ti_solve(P).solutions[0].values[0])


def test_weights(p3k2):
    vol = build_volume(2, 1, FULL)
    b = _ti_boundary(p3k2)
    z = b.values[0]
    empty = AdmissibleConfiguration(vol, 0)
    assert congruent(measure_weight(empty, p3k2, b), z**3, 20)
    root = AdmissibleConfiguration(vol, 1)
    assert congruent(measure_weight(root, p3k2, b), p3k2.lam * z**3, 20)
    for c in enumerate_admissible(vol):
        assert measure_weight(c, p3k2, b).norm() == 1


def test_partition_function_against_direct_sum(p3k2):
    vol = build_volume(2, 2, KB)
    b = _ti_boundary(p3k2)
    Z = partition_function(vol, p3k2, b)
    direct = PadicNumber.zero(3, 30)
    for c in enumerate_admissible(vol):
        direct = direct + measure_weight(c, p3k2, b)
    assert congruent(Z, direct, 28)


def test_mu_normalization(p3k2):
    vol = build_volume(2, 1, FULL)
    b = _ti_boundary(p3k2)
    Z = partition_function(vol, p3k2, b)
    total = sum((mu_n(c, p3k2, b, Z) for c in enumerate_admissible(vol)), PadicNumber.zero(3, 40))
    assert congruent(total, 1, total.absprec)
    assert measure_summary(vol, p3k2, b).normalization_ok


@pytest.mark.parametrize("n", [1, 2])
def test_unbounded_at_three(p3k2, n):
    s = measure_summary(build_volume(2, n, FULL), p3k2, _ti_boundary(p3k2))
    assert s.norm_min >= 3


def test_bounded_at_seven(p7k3):
    s = measure_summary(build_volume(3, 1, FULL), p7k3, _ti_boundary(p7k3))
    assert s.norm_min == s.norm_max == 1


def test_compat_ti(p3k2):
    res = check_compatibility(p3k2, _ti_boundary(p3k2), 2)
    assert res.compatible and res.min_deviation_valuation == INF


def test_compat_alternating(p3k2):
    z1, z2 = periodic_solve(p3k2).solutions[0].values
    for b in (BoundaryField.alternating(z1, z2), BoundaryField.alternating(z2, z1)):
        assert check_compatibility(p3k2, b, 2).compatible


def test_compat_constant_one_fails(p3k2):
    one = PadicNumber.from_residue(1, 3, 30)
    res = check_compatibility(p3k2, BoundaryField.constant(one), 2)
    assert not res.compatible and res.min_deviation_valuation < INF


@given(st.integers(1, 3), st.sampled_from([3, 9]))
def test_compat_perturbation_fails(t, step):
    P = ModelParams.from_fugacity(3, 2, 13, 30)
    z = ti_solve(P).solutions[0].values[0]
    res = check_compatibility(P, BoundaryField.constant(z * (1 + t * step)), 2)
    assert not res.compatible


def test_compat_root_degree_matters(p3k2):
    # the full tree's root has k + 1 children, so n = 1 breaks the constant law
    b = _ti_boundary(p3k2)
    assert check_compatibility(p3k2, b, 1, KB).compatible
    assert not check_compatibility(p3k2, b, 1, FULL).compatible
    assert check_compatibility(p3k2, b, 2, FULL).compatible


def test_reports_round_trip(p3k2):
    b = _ti_boundary(p3k2)
    for rep in (compat_report(p3k2, b, 2), norms_report(p3k2, b, 1)):
        again = OracleReport.from_json(rep.to_json())
        assert again.dumps() == rep.dumps()
        assert again.render_text() == rep.render_text()
