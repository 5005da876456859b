"""Backend parity: the compiled stencil must match the NumPy reference."""

import numpy as np
import pytest

from kgblowup._kernels import BACKEND, _reference

try:
    from kgblowup._kernels import _stencil
except ImportError:
    _stencil = None

needs_compiled = pytest.mark.skipif(_stencil is None, reason="extension not built")


def call(fn, u_re, u_im, n, axis, a_nl=0.7, p=2.6):
    J = u_re.size
    acc_re, acc_im = np.empty(J), np.empty(J)
    idx = np.arange(J, dtype=float)
    idx[0] = 1.0
    cp = np.ascontiguousarray(1.0 + (n - 1) / (2.0 * idx))
    cm = np.ascontiguousarray(1.0 - (n - 1) / (2.0 * idx))
    fn(u_re, u_im, acc_re, acc_im, cp, cm, 3.1, 0.4, a_nl, p, n, axis)
    return acc_re, acc_im


@needs_compiled
@pytest.mark.parametrize("n,axis", [(1, True), (3, True), (1, False)])
def test_backends_agree(n, axis):
    rng = np.random.default_rng(42)
    u_re = rng.standard_normal(257)
    u_im = rng.standard_normal(257)
    ref_re, ref_im = call(_reference.radial_accel, u_re, u_im, n, axis)
    cy_re, cy_im = call(_stencil.radial_accel, u_re, u_im, n, axis)
    np.testing.assert_allclose(cy_re, ref_re, rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(cy_im, ref_im, rtol=1e-13, atol=1e-13)


@needs_compiled
def test_backends_agree_on_zero_field():
    z = np.zeros(64)
    ref_re, ref_im = call(_reference.radial_accel, z, z, 2, True)
    cy_re, cy_im = call(_stencil.radial_accel, z, z, 2, True)
    assert np.all(ref_re == 0.0) and np.all(cy_re == 0.0)
    assert np.all(ref_im == 0.0) and np.all(cy_im == 0.0)


def test_dirichlet_nodes_pinned():
    rng = np.random.default_rng(3)
    u_re = rng.standard_normal(100)
    u_im = rng.standard_normal(100)
    for axis in (True, False):
        acc_re, acc_im = call(_reference.radial_accel, u_re, u_im, 1, axis)
        assert acc_re[-1] == 0.0 and acc_im[-1] == 0.0
        if not axis:
            assert acc_re[0] == 0.0 and acc_im[0] == 0.0


def test_backend_name_reported():
    assert BACKEND in ("compiled", "python")
