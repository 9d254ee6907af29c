import numpy as np
import pytest

from conftest import parse_table
from sepsos.fixtures import choi_polynomial, hakye_map, hakye_W
from sepsos.maps import (
    KrausSet,
    MatrixMap,
    apply,
    biquadratic_to_map,
    cp_from_kraus,
    decomposable_from,
    identity_map,
    map_to_biquadratic,
    positivity_sample,
    random_decomposable,
    random_kraus,
    transpose_map,
)
from sepsos.poly import evaluate, real_restriction
from sepsos.scalars import GaussQ, ONE, ZERO


def test_hakye_image_of_E11(frozen):
    phi = hakye_map()
    E11 = [[ONE, ZERO], [ZERO, ZERO]]
    img = apply(phi, E11)
    want = frozen["hakye_image_E11"]
    assert [[img[a][b] for b in range(4)] for a in range(4)] == [[GaussQ(x) for x in row] for row in want]


def test_hakye_W_matches_oracle(frozen):
    W = hakye_W()
    assert W.names == tuple(frozen["hakye_W"]["names"])
    assert W.terms == parse_table(frozen["hakye_W"]["coefficients"])


def test_identity_and_transpose_forms():
    p = map_to_biquadratic(identity_map(2))
    # |<x, y>|^2 type form: value at x = y = e1 is 1, at orthogonal vectors 0
    assert evaluate(p, [1, 0, 1, 0]) == 1
    assert evaluate(p, [1, 0, 0, 1]) == 0
    pt = map_to_biquadratic(transpose_map(2))
    i = GaussQ(0, 1)
    assert evaluate(p, [1, i, 1, i]) != evaluate(pt, [1, i, 1, i])
    assert evaluate(pt, [1, 0, 1, 0]) == 1


def test_map_form_round_trip_on_fixtures():
    for p in (choi_polynomial(), hakye_W()):
        phi = biquadratic_to_map(p)
        assert map_to_biquadratic(phi) == p
    phi = hakye_map()
    assert biquadratic_to_map(map_to_biquadratic(phi, "output_first"), "output_first") == phi


@pytest.mark.parametrize("seed", range(100))
def test_random_map_round_trip(seed):
    dims = [(2, 2), (2, 3), (3, 2)][seed % 3]
    k = random_kraus(*dims, count=2, seed=seed)
    phi = decomposable_from(k, random_kraus(*dims, count=1, seed=seed + 500))
    assert biquadratic_to_map(map_to_biquadratic(phi)) == phi


def test_hakye_positive_on_samples():
    m, _ = positivity_sample(hakye_map(), 10_000, seed=7)
    assert m >= -1e-10


def test_transpose_is_positive_but_partial_choi_is_not():
    m, _ = positivity_sample(transpose_map(3), 2000, seed=1)
    assert m >= -1e-10
    assert np.linalg.eigvalsh(transpose_map(2).choi.to_numpy())[0] < 0


def test_positivity_sample_detects_negative_map():
    neg = MatrixMap(2, 2, identity_map(2).choi.__class__(
        [[-x for x in row] for row in identity_map(2).choi.rows], "exact"))
    m, y = positivity_sample(neg, 10, seed=0)
    assert m < 0 and abs(np.linalg.norm(y) - 1) < 1e-12
    with pytest.raises(ValueError):
        positivity_sample(neg, 0, seed=0)


def test_choi_cross_coefficient_is_minus_one():
    # -2 Re[w] splits as -w - conj(w); -2 appears only after real restriction
    p = choi_polynomial()
    u = (1, 0, 0, 1, 0, 0)
    v = (0, 1, 0, 0, 1, 0)
    assert p.terms[(u, v)] == GaussQ(-1)
    assert p.terms[(v, u)] == GaussQ(-1)
    P = real_restriction(p)
    assert P.terms[(1, 1, 0, 1, 1, 0)] == -2


def test_choi_real_restriction_matches_oracle(frozen):
    P = real_restriction(choi_polynomial())
    want = {tuple(int(s) for s in k.split(",")): int(c) for k, c in frozen["choi_real_restriction"].items()}
    assert {k: int(c) for k, c in P.terms.items()} == want


def test_kraus_set_validation():
    with pytest.raises(ValueError):
        KrausSet(())
    empty = KrausSet((), in_dim=2, out_dim=3)
    assert empty.is_empty
    phi = decomposable_from(empty, random_kraus(2, 3, 1, seed=3))
    assert (phi.in_dim, phi.out_dim) == (2, 3)
    with pytest.raises(ValueError):
        KrausSet(([[ONE]], [[ONE, ONE]]))
    with pytest.raises(ValueError):
        decomposable_from(None, None)


def test_kraus_weights_scale_choi():
    k = random_kraus(2, 2, 1, seed=4)
    w = KrausSet(k.operators, (GaussQ(3),))
    a = cp_from_kraus(k).choi.to_numpy()
    b = cp_from_kraus(w).choi.to_numpy()
    assert np.allclose(3 * a, b)


def test_float_and_exact_choi_agree():
    k = random_kraus(2, 3, 2, seed=9)
    kf = KrausSet(tuple(np.array([[complex(x) for x in row] for row in v]) for v in k.operators))
    assert np.allclose(cp_from_kraus(k).choi.to_numpy(), cp_from_kraus(kf).choi.to_numpy())


def test_map_json_round_trip():
    phi = random_decomposable(2, 3, seed=11)
    assert MatrixMap.from_json(phi.to_json()) == phi
