import numpy as np
import pytest

from holomat.models import (
    CATALOG_NAMES,
    ChartModel,
    LieGroupModel,
    ModelError,
    catalog,
    chart_realization,
    metric_jet,
    product_model,
)


def test_catalog_names_construct():
    for name in CATALOG_NAMES:
        mod = catalog(name)
        assert mod.m >= 1


def test_unknown_model_and_params_rejected():
    with pytest.raises(ModelError):
        catalog("nope")
    with pytest.raises(ModelError):
        catalog("flat", bogus=1)


def test_lie_group_validates_jacobi():
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 1] = 1.0
    c[0, 1, 0] = -1.0
    c[1, 0, 1] = 1.0
    c[1, 1, 0] = -1.0
    LieGroupModel(2, c)  # solvable, fine
    bad = np.zeros((3, 3, 3), dtype=complex)
    # [e1,e2]=e3, [e2,e3]=e1, [e1,e3]=e1 violates Jacobi
    bad[2, 0, 1], bad[2, 1, 0] = 1.0, -1.0
    bad[0, 1, 2], bad[0, 2, 1] = 1.0, -1.0
    bad[0, 0, 2], bad[0, 2, 0] = 1.0, -1.0
    with pytest.raises(ModelError):
        LieGroupModel(3, bad)


def test_real_structure_constants_antisymmetric_and_jacobi():
    mod = catalog("complex-lie-group-heisenberg")
    f = mod.real_structure_constants()
    assert np.abs(f + f.transpose(0, 2, 1)).max() < 1e-14
    t = np.einsum("lij,slk->sijk", f, f)
    cyc = t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)
    assert np.abs(cyc).max() < 1e-12


def test_real_metric_compatible_with_J():
    mod = catalog("torus-flat", m=3)
    G = mod.metric_at(np.zeros(6))
    from holomat.conn import real_metric_of
    from holomat.fiber import standard_J

    g = real_metric_of(G)
    J = standard_J(3)
    assert np.allclose(J.T @ g @ J, g, atol=1e-12)
    assert np.allclose(g, g.T, atol=1e-12)


def test_metric_jet_fubini_study_oracle():
    """FD jet against the closed-form FS derivative at the origin."""
    mod = catalog("fubini-study", m=2)
    x = np.zeros(4)
    jet = metric_jet(mod, x, order=2)
    m = 2
    assert np.allclose(jet["g"], np.eye(m), atol=1e-12)
    # at z=0: partial_i g_{k lbar} = 0 and partial_i partial_jbar g_{k lbar}
    # = -(delta_ij delta_kl + delta_il delta_kj)
    assert np.abs(jet["d"]).max() < 1e-8
    expect = np.zeros((m, m, m, m))
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    expect[i, j, k, l] = -(
                        (i == j) * (k == l) + (i == l) * (k == j)
                    )
    assert np.abs(jet["ddbar"] - expect).max() < 1e-6
    assert not jet["asymmetry_warning"]


def test_sample_points_respect_domain():
    mod = catalog("hopf-surface")
    rng = np.random.default_rng(0)
    pts = mod.sample_points(10, rng)
    for x in pts:
        z = mod.to_complex(x)
        assert 0.5 < np.linalg.norm(z) < 2.0
        assert mod.interior(x)


def test_product_model_block_metric():
    mod = catalog("product", factors=("flat", "fubini-study"),
                  factor_params=({"m": 1}, {"m": 2}))
    assert mod.m == 3
    z = np.array([0.1 + 0.2j, 0.05 - 0.1j, 0.2 + 0.0j])
    G = mod.metric_fn(z)
    assert G[0, 1] == 0 and G[0, 2] == 0
    assert np.allclose(G[0, 0], 1.0)


def test_chart_realization_matches_invariant_metric_at_origin():
    for name in ("complex-lie-group-2d", "complex-lie-group-heisenberg"):
        lie = catalog(name)
        chart = chart_realization(lie)
        G0 = chart.metric_at(np.zeros(2 * chart.m))
        assert np.allclose(G0, lie.metric, atol=1e-12)


def test_perturbed_model_stays_positive():
    mod = catalog("perturbed", base="fubini-study", base_params={"m": 2},
                  eps=0.05, potential="gauss")
    rng = np.random.default_rng(1)
    for x in mod.sample_points(5, rng):
        w = np.linalg.eigvalsh(mod.metric_at(x))
        assert w.min() > 0
