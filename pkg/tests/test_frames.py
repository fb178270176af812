import itertools

import numpy as np
import pytest

from weavelab import (EXHAUSTIVE, L1, LINF, Exactness, FrameSystem,
                      NormedSpace, NotABasis, basis_constant, biorthogonals,
                      check_approximate_frame, equivalence_constants,
                      frame_operator, heuristic, square_function,
                      suppression_constant, unconditional_constant)
from conftest import NORMS, random_basis, random_frame_system


def summing_system(d):
    v = np.tril(np.ones((d, d)))
    f = np.eye(d)
    for j in range(d - 1):
        f[j, j + 1] = -1.0
    return FrameSystem(NormedSpace(d, LINF), v, f, label="summing")


def standard_system(d, norm=L1):
    return FrameSystem(NormedSpace(d, norm), np.eye(d), np.eye(d), label="standard")


def difference_system(d):
    v = np.eye(d)
    for n in range(1, d):
        v[n, n - 1] = -1.0
    return FrameSystem(NormedSpace(d, L1), v, np.triu(np.ones((d, d))), label="difference")


# --- frame operator ---------------------------------------------------------

def test_frame_operator_biorthogonal_identity():
    assert np.array_equal(frame_operator(standard_system(3)).entries, np.eye(3))
    assert np.array_equal(frame_operator(summing_system(2)).entries, np.eye(2))


def test_frame_operator_scaling():
    sp = NormedSpace(2, L1)
    sys2 = FrameSystem(sp, np.eye(2), 2 * np.eye(2))
    assert np.array_equal(frame_operator(sys2).entries, 2 * np.eye(2))


def test_check_approximate_frame_scaled():
    sp = NormedSpace(4, L1)
    sys3 = FrameSystem(sp, np.eye(4), 3 * np.eye(4))
    rep = check_approximate_frame(sys3)
    assert rep.verdict == "frame"
    assert rep.s_norm.value == 3.0
    assert rep.s_inv_norm.value == pytest.approx(1 / 3, rel=1e-14)
    assert rep.c_frame == 3.0


def test_check_approximate_frame_rank_deficient():
    # chain vectors plus a duplicate: rank < dim forces a singular S
    d = 5
    chain = np.zeros((d, d))
    for i in range(d - 1):
        chain[i, i] = chain[i, i + 1] = 1.0
    chain[d - 1] = chain[0]
    sys_bad = FrameSystem(NormedSpace(d, L1), chain, np.eye(d))
    rep = check_approximate_frame(sys_bad)
    assert rep.verdict == "not_a_frame"
    assert rep.c_frame == np.inf
    assert rep.s_inv_norm is None


# --- biorthogonals ----------------------------------------------------------

def test_biorthogonals_standard_and_frozen():
    assert np.array_equal(biorthogonals(np.eye(4)), np.eye(4))
    diff = difference_system(3)
    assert np.array_equal(biorthogonals(diff.vectors),
                          [[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    summing = summing_system(2)
    assert np.array_equal(biorthogonals(summing.vectors), [[1, -1], [0, 1]])


def test_biorthogonals_delta_property(rng):
    for _ in range(20):
        v = random_basis(rng, 6)
        duals = biorthogonals(v)
        assert np.abs(duals @ v.T - np.eye(6)).max() <= 1e-10


def test_biorthogonals_rejects_bad_input():
    with pytest.raises(NotABasis):
        biorthogonals(np.ones((3, 3)))
    with pytest.raises(NotABasis):
        biorthogonals(np.ones((2, 3)))


# --- basis constant ---------------------------------------------------------

def brute_force_basis_constant(vectors, norm):
    """Independent oracle: evaluate each partial projection on the ball's
    extreme points (columns for l1, sign vertices for linf)."""
    d = vectors.shape[0]
    duals = np.linalg.inv(vectors.T)
    best = 0.0
    for n in range(1, d + 1):
        p = sum(np.outer(vectors[i], duals[i]) for i in range(n))
        if norm == L1:
            value = max(np.abs(p @ e).sum() for e in np.eye(d))
        else:
            value = max(np.abs(p @ np.array(s)).max()
                        for s in itertools.product([1.0, -1.0], repeat=d))
        best = max(best, value)
    return best


def test_basis_constant_standard():
    for norm in NORMS:
        assert basis_constant(np.eye(4), NormedSpace(4, norm)).value == 1.0


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_basis_constant_summing(d):
    summing = summing_system(d)
    oracle = brute_force_basis_constant(summing.vectors, LINF)
    got = basis_constant(summing.vectors, summing.space)
    assert got.value == oracle == 2.0
    assert got.exactness is Exactness.EXACT


@pytest.mark.parametrize("d", [2, 4, 6])
def test_basis_constant_difference(d):
    diff = difference_system(d)
    oracle = brute_force_basis_constant(diff.vectors, L1)
    got = basis_constant(diff.vectors, diff.space)
    # the difference basis is monotone: every partial projection has unit
    # column sums, so the oracle pins the constant at 1
    assert got.value == oracle == 1.0


# --- suppression / unconditional constants ----------------------------------

def brute_force_subset_constant(system, signs=False):
    s = sum(np.outer(system.vectors[i], system.functionals[i])
            for i in range(system.n))
    s_inv = np.linalg.inv(s)
    if system.space.norm == L1:
        def norm_of(m):
            return np.abs(m).sum(axis=0).max()
    else:
        def norm_of(m):
            return np.abs(m).sum(axis=1).max()
    best = 0.0
    choices = [1.0, -1.0] if signs else [1.0, 0.0]
    for coeffs in itertools.product(choices, repeat=system.n):
        m = sum(c * np.outer(system.vectors[i], system.functionals[i])
                for i, c in enumerate(coeffs)) @ s_inv
        best = max(best, norm_of(m))
    return best


def test_suppression_and_unconditional_summing_frozen():
    summing = summing_system(2)
    cs = suppression_constant(summing)
    cu = unconditional_constant(summing)
    assert cs.value == brute_force_subset_constant(summing) == 2.0
    assert cu.value == brute_force_subset_constant(summing, signs=True) == 3.0
    assert cs.exactness is Exactness.EXACT


def test_standard_constants_are_one():
    std = standard_system(4)
    assert suppression_constant(std).value == 1.0
    assert unconditional_constant(std).value == 1.0


def test_one_unconditional_subsets_contractive(rng):
    # diagonal positive systems: every subset value is at most 1
    d = 5
    scales = rng.uniform(0.5, 2.0, d)
    sys1 = FrameSystem(NormedSpace(d, L1), np.diag(scales),
                       np.diag(1.0 / scales))
    assert suppression_constant(sys1).value == 1.0


def test_constant_ordering_random(rng):
    for norm in NORMS:
        for _ in range(5):
            system = random_frame_system(rng, 6, norm)
            cs = suppression_constant(system).value
            cu = unconditional_constant(system).value
            assert 1.0 - 1e-9 <= cs <= cu + 1e-9
            assert cu <= 2 * cs + 1e-9


def test_empty_subset_value_zero_and_full_identity():
    # values at the trivial subsets: empty gives 0 exactly; on an
    # exact-arithmetic system the full subset gives exactly 1
    summing = summing_system(3)
    cs = suppression_constant(summing)
    assert cs.value >= 1.0
    std = standard_system(3)
    assert suppression_constant(std).value == 1.0


def test_scaling_covariance_dyadic(rng):
    system = random_frame_system(rng, 5, L1)
    base = check_approximate_frame(system)
    scaled = check_approximate_frame(system.scaled_functionals(2.0))
    assert scaled.s_norm.value == 2.0 * base.s_norm.value
    assert scaled.s_inv_norm.value == 0.5 * base.s_inv_norm.value
    assert suppression_constant(system).value == \
        suppression_constant(system.scaled_functionals(2.0)).value


def test_heuristic_is_lower_bound_and_agrees(rng):
    for _ in range(10):
        d = int(rng.integers(3, 8))
        system = random_frame_system(rng, d, L1)
        exact = suppression_constant(system, EXHAUSTIVE)
        approx = suppression_constant(system, heuristic(8), seed=3)
        assert approx.value <= exact.value
        assert approx.value == exact.value  # small instances: climb finds the max
        assert approx.exactness is Exactness.LOWER_BOUND
        exact_u = unconditional_constant(system, EXHAUSTIVE)
        approx_u = unconditional_constant(system, heuristic(8), seed=3)
        assert approx_u.value == exact_u.value


def test_exhaustive_demotes_above_cap(rng):
    system = random_frame_system(rng, 6, L1)
    est = suppression_constant(system, EXHAUSTIVE, exhaustive_cap=8)
    assert est.exactness is Exactness.LOWER_BOUND


# --- square function --------------------------------------------------------

def test_square_function_examples():
    lattice = np.eye(3)
    x1 = np.array([[0.5, -2.0, 1.0]])
    out = square_function(x1, [1.0], lattice)
    assert np.array_equal(out, np.abs(x1[0]))
    basis_rows = np.eye(3)[:2]
    out = square_function(basis_rows, [1.0, 1.0], lattice)
    assert np.array_equal(out, [1.0, 1.0, 0.0])
    repeated = np.array([[1.0, 0, 0], [1.0, 0, 0]])
    out = square_function(repeated, [1.0, 1.0], lattice)
    assert out == pytest.approx([np.sqrt(2), 0.0, 0.0])


# --- equivalence constants ---------------------------------------------------

def test_equivalence_constants():
    sp = NormedSpace(3, L1)
    eye = np.eye(3)
    assert equivalence_constants(eye, eye, sp) == (1.0, 1.0)
    lower, upper = equivalence_constants(eye, 2 * eye, sp)
    assert (lower, upper) == (2.0, 2.0)
    diff = difference_system(3)
    lower, upper = equivalence_constants(eye, diff.vectors, sp)
    assert upper == 2.0
    assert lower == pytest.approx(1 / 3, rel=1e-14)


def test_frame_system_validation():
    from weavelab import InputError
    with pytest.raises(InputError):
        FrameSystem(NormedSpace(2, L1), np.eye(2), np.eye(3))
    with pytest.raises(InputError):
        FrameSystem(NormedSpace(2, L1), [[np.inf, 0], [0, 1]], np.eye(2))
