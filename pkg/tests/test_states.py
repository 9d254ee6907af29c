from fractions import Fraction

import numpy as np
import pytest

from sepsos.fixtures import choi_polynomial, hakye_map
from sepsos.linalg import HermitianMatrix
from sepsos.maps import identity_map, transpose_map
from sepsos.states import (
    DensityMatrix,
    apply_map_one_side,
    embed_section,
    maximally_entangled,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    ppt_check,
    product_state,
    random_separable,
    section_predicate,
    witness_value,
)


def test_bell_state_fails_ppt(frozen):
    r = ppt_check(maximally_entangled(2))
    assert not r.passed
    assert abs(r.min_eig_pt + 0.5) <= 1e-12
    ev = sorted(np.linalg.eigvalsh(partial_transpose(maximally_entangled(2)).to_numpy()))
    want = sorted(float(Fraction(s)) for s in frozen["bell_partial_transpose_eigenvalues"])
    assert np.allclose(ev, want)


def test_maximally_mixed_passes():
    for dims in ((2, 2), (2, 3), (3, 3)):
        assert ppt_check(maximally_mixed(dims)).passed


@pytest.mark.parametrize("seed", range(20))
def test_random_separable_passes(seed):
    dims = (2 + seed % 3, 2 + (seed // 3) % 3)
    rho = random_separable(dims, 1 + seed % 6, seed)
    assert abs(rho.trace - 1) <= 1e-12
    assert ppt_check(rho, tol=1e-10).passed


def test_partial_transpose_is_involution():
    rho = random_separable((2, 3), 3, seed=4)
    once = partial_transpose(rho)
    twice = partial_transpose(once, dims=(2, 3))
    assert np.allclose(twice.to_numpy(), rho.to_numpy())
    first = partial_transpose(rho, which_factor=1)
    assert np.allclose(np.linalg.eigvalsh(first.to_numpy()), np.linalg.eigvalsh(once.to_numpy()))


def test_partial_trace_of_product():
    x = np.array([1, 1j]) / np.sqrt(2)
    y = np.array([1, 0, 0])
    rho = product_state(x, y)
    assert np.allclose(np.array(partial_trace(rho, 2), dtype=complex), np.outer(x, x.conj()))
    assert np.allclose(np.array(partial_trace(rho, 1), dtype=complex), np.outer(y, y.conj()))


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix((2, 2), np.eye(4))
    with pytest.raises(ValueError):
        DensityMatrix((2, 3), np.eye(4) / 4)
    with pytest.raises(ValueError):
        DensityMatrix((2, 1), np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        random_separable((2, 2), 0, seed=0)


def test_state_json_round_trip():
    rho = random_separable((2, 2), 3, seed=8)
    back = DensityMatrix.from_json(rho.to_json())
    assert np.allclose(back.to_numpy(), rho.to_numpy())
    assert len(back.provenance) == 3
    exact = maximally_entangled(2)
    assert DensityMatrix.from_json(exact.to_json()).matrix == exact.matrix


def test_transpose_map_detects_entanglement():
    bell = maximally_entangled(2)
    out = apply_map_one_side(transpose_map(2), bell)
    assert min(np.linalg.eigvalsh(out.to_numpy())) < 0
    same = apply_map_one_side(identity_map(2), bell)
    assert same == bell.matrix


def test_hakye_one_side_on_separable_is_psd():
    rho = random_separable((3, 2), 4, seed=12)
    out = apply_map_one_side(hakye_map(), rho)
    assert out.dim == 12
    assert np.linalg.eigvalsh(out.to_numpy())[0] >= -1e-10
    with pytest.raises(ValueError):
        apply_map_one_side(hakye_map(), random_separable((2, 3), 1, seed=0))


def test_section_embedding():
    rho = random_separable((2, 3), 4, seed=5)
    emb = embed_section(rho, 4)
    assert emb.dims == (4, 3)
    assert section_predicate(emb, 2)
    assert not section_predicate(product_state([0, 0, 0, 1.0], [1.0, 0, 0]), 2)
    assert all(np.all(t.x[2:] == 0) for t in emb.provenance)
    with pytest.raises(ValueError):
        embed_section(rho, 1)


def test_witness_value_on_separable_states():
    c = choi_polynomial()
    for seed in range(10):
        rho = random_separable((3, 3), 3, seed)
        expected = sum(t.weight * float(np.real(_choi_at(t.x, t.y))) for t in rho.provenance)
        assert abs(witness_value(c, rho) - expected) <= 1e-10
        assert witness_value(c, rho) >= -1e-10


def _choi_at(x, y):
    from sepsos.poly import evaluate

    return evaluate(choi_polynomial(), list(x) + list(y))


def test_ppt_with_explicit_dims():
    m = HermitianMatrix(np.eye(6) / 6, "float")
    assert ppt_check(m, dims=(2, 3)).passed
    with pytest.raises((TypeError, ValueError)):
        ppt_check(m)
