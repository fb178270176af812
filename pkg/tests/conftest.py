import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from weavelab import L1, L2, LINF, FrameSystem, NormedSpace, biorthogonals

settings.register_profile(
    "weavelab",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("weavelab")

NORMS = (L1, L2, LINF)


def random_basis(rng, d, max_cond=50.0):
    """A well-conditioned random basis (rows are the vectors)."""
    while True:
        v = rng.standard_normal((d, d))
        if np.linalg.cond(v) <= max_cond:
            return v


def random_basis_system(rng, d, norm):
    v = random_basis(rng, d)
    return FrameSystem(NormedSpace(d, norm), v, biorthogonals(v))


def random_frame_system(rng, d, norm, scale_spread=0.5):
    """A basis paired with mildly rescaled duals: invertible S, modest C_s."""
    v = random_basis(rng, d)
    duals = biorthogonals(v)
    scales = rng.uniform(1.0 - scale_spread, 1.0 + scale_spread, size=d)
    return FrameSystem(NormedSpace(d, norm), v, scales[:, None] * duals)


def random_one_unconditional_basis(rng, d, norm):
    """1-unconditional: signed scaled permutation (l1/linf) or orthogonal (l2)."""
    if norm.tag == "l2":
        return np.linalg.qr(rng.standard_normal((d, d)))[0]
    v = np.zeros((d, d))
    perm = rng.permutation(d)
    signs = rng.choice([-1.0, 1.0], d)
    scales = rng.uniform(0.5, 2.0, d)
    for i in range(d):
        v[i, perm[i]] = signs[i] * scales[i]
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
