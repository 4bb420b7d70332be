"""Homotopy-equation verification, homotopy solving, and the signed
homology-level comparison."""

from __future__ import annotations

import pytest

from ainfcat.bimodules import (
    LEFT,
    RIGHT,
    BimoduleHom,
    hom_complex,
    mu_composition_map,
    tensor_over_category,
    yoneda_module,
)
from ainfcat.cardy import (
    HomotopyWitness,
    NoIntegralSolution,
    NoSolution,
    OpenClosedData,
    solve_homotopy,
    telescoping_data,
    verify_cardy_on_homology,
    verify_homotopy_equation,
)
from ainfcat.complexes import GradedMap, compose, zero_map
from ainfcat.fixtures import coproduct_morphism
from ainfcat.hochschild import cc_of_delta, truncated_cc


def setup(fixture, n, N=3):
    phi = coproduct_morphism(fixture, n)
    cat = phi.source.cat
    K = phi.target.left.K
    cc = truncated_cc(cat, N)
    tcx = tensor_over_category(
        yoneda_module(cat, K, RIGHT), yoneda_module(cat, K, LEFT), N
    )
    return phi, cat, K, cc, tcx


def zero_morphism_like(phi):
    return BimoduleHom(source=phi.source, target=phi.target, n=phi.n, components={})


def scaled_composite_data(phi, cat, K, cc, tcx, scale=1, co_sign=1):
    hom_cx = hom_complex(cat, K, K)
    f = cc_of_delta(phi, cc, tcx)
    mucc = compose(mu_composition_map(cat, K, tcx), f)
    oc = GradedMap(
        source=cc, target=hom_cx, shift=phi.n,
        apply=lambda w: {g: scale * c for g, c in mucc.chain(w).items()},
    )
    co = GradedMap(source=hom_cx, target=hom_cx, shift=0, apply=lambda g: {g: co_sign})
    return OpenClosedData(cat=cat, K=K, n=phi.n, closed=hom_cx, oc=oc, co=co)


# -- the homotopy equation ---------------------------------------------------


@pytest.mark.parametrize(
    "fixture,n",
    [("ground_ring", 0), ("dual_numbers", 0), ("dual_numbers", 1), ("dual_numbers", 2),
     ("cone_algebra", 0), ("cone_algebra", 1), ("cone_algebra", 2), ("split_summand_pair", 0)],
)
def test_telescoping_passes(fixture, n):
    phi, cat, K, cc, tcx = setup(fixture, n)
    data = telescoping_data(cat, phi, cc, tcx)
    report = verify_homotopy_equation(data, phi, HomotopyWitness(), cc, tcx)
    assert report.passed, str(report)


def test_mismatched_composition_fails_with_witness():
    phi, cat, K, cc, tcx = setup("cone_algebra", 0)
    data = scaled_composite_data(phi, cat, K, cc, tcx, scale=1, co_sign=-1)
    report = verify_homotopy_equation(data, phi, HomotopyWitness(), cc, tcx)
    assert not report.passed
    assert report.violations[0].inputs


def test_all_zero_maps_pass():
    phi, cat, K, cc, tcx = setup("dual_numbers", 1)
    zero_phi = zero_morphism_like(phi)
    hom_cx = hom_complex(cat, K, K)
    data = OpenClosedData(
        cat=cat, K=K, n=phi.n, closed=hom_cx,
        oc=zero_map(cc, hom_cx, phi.n), co=zero_map(hom_cx, hom_cx, 0),
    )
    assert verify_homotopy_equation(data, zero_phi, HomotopyWitness(), cc, tcx).passed


def test_open_closed_data_rejects_non_chain_map():
    phi, cat, K, cc, tcx = setup("cone_algebra", 0)
    hom_cx = hom_complex(cat, K, K)

    # scaling one generator of a connected complex breaks commutation
    def broken(g):
        return {g: 2 if g.name == "p" else 1}

    with pytest.raises(ValueError):
        OpenClosedData(
            cat=cat, K=K, n=0, closed=hom_cx,
            oc=zero_map(cc, hom_cx, 0),
            co=GradedMap(source=hom_cx, target=hom_cx, shift=0, apply=broken),
        )


# -- solving for the homotopy -------------------------------------------------


def test_solve_telescoping_roundtrip():
    phi, cat, K, cc, tcx = setup("cone_algebra", 1)
    data = telescoping_data(cat, phi, cc, tcx)
    H = solve_homotopy(data, phi, cc, tcx)
    assert isinstance(H, HomotopyWitness)
    assert verify_homotopy_equation(data, phi, H, cc, tcx).passed


def test_solve_no_solution_homology_obstruction():
    phi, cat, K, cc, tcx = setup("cone_algebra", 2)
    data = scaled_composite_data(phi, cat, K, cc, tcx, scale=1)
    out = solve_homotopy(data, zero_morphism_like(phi), cc, tcx)
    assert isinstance(out, NoSolution)


def test_solve_rational_only_torsion_obstruction():
    # the degree-1 composite on the cone algebra is null-homotopic over Q
    # but its homotopies are half-integral; doubling the discrepancy fixes it
    phi, cat, K, cc, tcx = setup("cone_algebra", 1)
    data1 = scaled_composite_data(phi, cat, K, cc, tcx, scale=1)
    out1 = solve_homotopy(data1, zero_morphism_like(phi), cc, tcx)
    assert isinstance(out1, NoIntegralSolution)
    data2 = scaled_composite_data(phi, cat, K, cc, tcx, scale=2)
    out2 = solve_homotopy(data2, zero_morphism_like(phi), cc, tcx)
    assert isinstance(out2, HomotopyWitness)
    assert verify_homotopy_equation(data2, zero_morphism_like(phi), out2, cc, tcx).passed


# -- homology-level comparison -------------------------------------------------


@pytest.mark.parametrize(
    "fixture,n",
    [("ground_ring", 0), ("dual_numbers", 0), ("dual_numbers", 1), ("dual_numbers", 2),
     ("cone_algebra", 0), ("cone_algebra", 1), ("cone_algebra", 2)],
)
def test_cardy_homology_telescoping(fixture, n):
    phi, cat, K, cc, tcx = setup(fixture, n)
    data = telescoping_data(cat, phi, cc, tcx)
    report = verify_cardy_on_homology(data, phi, cc, tcx)
    assert report.passed, (fixture, n, str(report))


def test_homotopy_implies_homology_agreement():
    # any configuration passing the chain-level identity with some H also
    # passes the signed homology comparison
    for fixture, n in [("cone_algebra", 0), ("dual_numbers", 1), ("split_summand_pair", 0)]:
        phi, cat, K, cc, tcx = setup(fixture, n)
        data = telescoping_data(cat, phi, cc, tcx)
        assert verify_homotopy_equation(data, phi, HomotopyWitness(), cc, tcx).passed
        assert verify_cardy_on_homology(data, phi, cc, tcx).passed


def test_sign_path_unsigned_fails_signed_passes():
    # degree-2 morphism with composite acting by 2 on free homology: with
    # the closed-to-open map negated, the compositions differ by exactly
    # (-1)^(n(n+1)/2) = -1 and only the signed comparison accepts
    phi, cat, K, cc, tcx = setup("even_dual_numbers", 2)
    data = telescoping_data(cat, phi, cc, tcx, co_sign=-1)
    signed = verify_cardy_on_homology(data, phi, cc, tcx)
    assert signed.passed, str(signed)

    # the unsigned comparison is the same check at a degree-0-like shift,
    # emulated by comparing against +id instead
    data_plus = telescoping_data(cat, phi, cc, tcx, co_sign=1)
    unsigned_equiv = verify_cardy_on_homology(data_plus, phi, cc, tcx)
    assert not unsigned_equiv.passed


def test_sign_path_n1_exercised():
    # at n = 1 the global sign is also -1; with the shipped morphism the
    # composite vanishes on homology, so the signed comparison holds while
    # the code path applying the sign runs
    phi, cat, K, cc, tcx = setup("cone_algebra", 1)
    data = telescoping_data(cat, phi, cc, tcx)
    report = verify_cardy_on_homology(data, phi, cc, tcx)
    assert report.passed
