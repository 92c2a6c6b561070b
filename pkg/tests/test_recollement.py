import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fleet_algebra, fleet_catalog, fleet_setup
from samples import random_sum
from relaus.homological import proj_dim
from relaus.krull_schmidt import decompose, is_indecomposable, is_isomorphic
from relaus.modules import direct_sum, hom_dim, zero_module
from relaus.recollement import (
    SetupError,
    build_setup,
    catalog_generator_zeta,
    gamma_map,
    in_add,
    is_mod0,
    syzygy_resolution_check,
    v_lambda,
    v_rho,
    v_theta,
    zeta,
)
from relaus.tilting import morita_invariants

NAMES = ["L2", "L3", "L4", "kA2", "kxk"]


def l2():
    setup = fleet_setup("L2")
    s, reg = setup.members
    return setup, s, reg


def test_l2_setup_flags():
    setup, s, reg = l2()
    assert setup.gamma.dim == 5
    assert all(f.status == "verified" for f in setup.flags.values()), setup.flags
    assert setup.projective_members == [1]


def test_projective_only_catalog_gives_back_the_algebra():
    a = fleet_algebra("L2")
    cat = fleet_catalog("L2")
    setup = build_setup(a, replace(cat, modules=[cat.modules[1]]))
    assert setup.gamma.dim == 2
    assert morita_invariants(setup.gamma) == morita_invariants(a)


def test_catalog_without_projectives_is_fatal():
    cat = fleet_catalog("L2")
    with pytest.raises(SetupError, match="projective"):
        build_setup(fleet_algebra("L2"), replace(cat, modules=[cat.modules[0]]))


def test_kA2_left_perp_fails():
    setup = fleet_setup("kA2")
    assert setup.flags["left_perp"].status == "failed"
    assert setup.flags["syzygy_closed"].status == "verified"


def test_v_rho_examples():
    setup, s, reg = l2()
    assert v_rho(setup, s).dim == 2
    assert v_rho(setup, zero_module(setup.algebra)).dim == 0
    gen = v_rho(setup, setup.generator)
    assert gen.dim == setup.gamma.dim
    assert is_isomorphic(gen, setup.gamma.regular_module) is not None


def test_v_lambda_examples():
    setup, s, reg = l2()
    assert v_lambda(setup, s).dim == 2
    assert v_lambda(setup, zero_module(setup.algebra)).dim == 0
    assert is_isomorphic(v_lambda(setup, reg), v_rho(setup, reg)) is not None


@pytest.mark.parametrize("name", NAMES)
def test_gamma_invertible_on_projectives(name):
    setup = fleet_setup(name)
    for k in setup.projective_members:
        assert gamma_map(setup, setup.members[k]).is_iso()


def test_gamma_examples():
    setup, s, reg = l2()
    assert gamma_map(setup, s).rank() == 1
    assert gamma_map(setup, zero_module(setup.algebra)).matrix.is_zero()


def test_zeta_of_simple():
    setup, s, reg = l2()
    pk = zeta(setup, s)
    assert pk.dims() == (1, 2, 1, 2, 1)
    assert pk.exact
    assert pk.certificate["K_in_mod0"] and pk.certificate["L_in_mod0"]


def test_zeta_of_projective_and_additivity():
    setup, s, reg = l2()
    pk = zeta(setup, reg)
    assert pk.K.dim == pk.L.dim == 0
    assert is_isomorphic(pk.zeta, v_rho(setup, reg)) is not None
    both = zeta(setup, direct_sum([reg, s]).module)
    assert both.zeta.dim == 4 == pk.zeta.dim + zeta(setup, s).zeta.dim
    t, _ = catalog_generator_zeta(setup)
    assert t.dim == 4


def test_is_mod0_examples():
    setup, s, reg = l2()
    assert not is_mod0(setup, setup.gamma.regular_module)
    pk = zeta(setup, s)
    assert is_mod0(setup, pk.K) and is_mod0(setup, pk.L)
    assert is_mod0(setup, zero_module(setup.gamma))


def test_v_theta_examples():
    setup, s, reg = l2()
    x = v_theta(setup, setup.gamma.regular_module)
    assert is_isomorphic(x, setup.generator) is not None
    for m in (s, reg, direct_sum([s, reg]).module):
        assert is_isomorphic(v_theta(setup, v_lambda(setup, m)), m) is not None
        assert is_isomorphic(v_theta(setup, v_rho(setup, m)), m) is not None
    assert v_theta(setup, zeta(setup, s).K).dim == 0


@pytest.mark.parametrize("name", NAMES)
def test_four_term_sequence_for_every_indecomposable(name):
    setup = fleet_setup(name)
    for c in setup.members:
        pk = zeta(setup, c)
        assert pk.exact, pk.certificate
        assert pk.certificate["K_in_mod0"] and pk.certificate["L_in_mod0"]
        assert pk.certificate["epi_mono_factorisation"]


@given(st.integers(0, 10**6), st.sampled_from(["L2", "L3", "kA2"]))
@settings(max_examples=15)
def test_four_term_sequence_on_random_sums(seed, name):
    setup = fleet_setup(name)
    m, _ = random_sum(setup.members, random.Random(seed), 5)
    pk = zeta(setup, m)
    assert pk.exact and pk.certificate["K_in_mod0"] and pk.certificate["L_in_mod0"]


@pytest.mark.parametrize("name", NAMES)
def test_zeta_fully_faithful_and_preserves_indecomposables(name):
    setup = fleet_setup(name)
    pk = [zeta(setup, c) for c in setup.members]
    for i, m in enumerate(setup.members):
        assert is_indecomposable(pk[i].zeta)
        assert len(decompose(pk[i].zeta).summands) == 1
        for j, n in enumerate(setup.members):
            assert hom_dim(pk[i].zeta, pk[j].zeta) == hom_dim(m, n)


@pytest.mark.parametrize("name", NAMES)
def test_theta_inverts_the_evaluations(name):
    setup = fleet_setup(name)
    for c in setup.members:
        assert is_isomorphic(v_theta(setup, v_lambda(setup, c)), c) is not None
        assert is_isomorphic(v_theta(setup, v_rho(setup, c)), c) is not None


@pytest.mark.parametrize("name", ["L2", "L3", "L4", "kA2"])
def test_syzygy_resolution_shape(name):
    setup = fleet_setup(name)
    assert setup.flags["syzygy_closed"].status == "verified"
    for k, c in enumerate(setup.members):
        if k in setup.projective_members:
            continue
        assert all(syzygy_resolution_check(setup, c).values())
        assert proj_dim(zeta(setup, c).zeta, 3).at_most(1)


def test_in_add():
    setup, s, reg = l2()
    assert in_add(direct_sum([s, reg, s]).module, setup.members)
    assert not in_add(reg, [s])
    assert in_add(zero_module(setup.algebra), [s])
