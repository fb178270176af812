"""Perturbation checkers: the small-perturbation basis lemma, the operator
perturbation theorem for suppression-unconditional frames, and the pairwise
perturbation theorem.

Each checker measures the theorem's left-hand side against its strict
threshold and, when the budget is satisfied, certifies the conclusion
exhaustively over weaving patterns at desk scale (sampled above the
exhaustive cap, flagged accordingly).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NotAFrame, NotInvertible
from .normed import (DEFAULT_COND_CAP, DenseOperator, Exactness, dual_norm,
                     invert, operator_norm, vector_norm)
from .frames import (EXHAUSTIVE, ConstantEstimate, FrameSystem,
                     basis_constant, biorthogonals, check_approximate_frame,
                     equivalence_constants, frame_operator,
                     suppression_constant)
from .weaving import WeavePattern, WeaveSearchResult, weave, worst_weaving

CERT_SLACK = 1e-9
EXHAUSTIVE_CERT_CAP = 12  # bits; beyond this, certificates sample patterns
CONDITIONAL_CS_WARNING = 100.0


@dataclass(frozen=True)
class PerturbationBudget:
    """A theorem's measured left-hand side against its strict threshold."""

    kind: str  # "basis_sum" | "operator_deviation" | "pair_sum"
    bound: float
    actual: float

    @property
    def satisfied(self) -> bool:
        return self.actual < self.bound


@dataclass(frozen=True, eq=False)
class BoundCertificate:
    """Per-pattern conclusion checks for a satisfied perturbation budget."""

    holds: bool
    bound: float
    max_residual: float
    patterns_checked: int
    exhaustive: bool
    failures: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class BasisPerturbationReport:
    budget: PerturbationBudget
    is_basis: bool | None
    equivalence: tuple[float, float] | None
    all_weavings_bases: bool | None
    max_weaving_basis_constant: float | None


@dataclass(frozen=True, eq=False)
class OperatorPerturbationReport:
    budget: PerturbationBudget
    suppression: ConstantEstimate
    worst: WeaveSearchResult | None
    certificate: BoundCertificate | None


@dataclass(frozen=True, eq=False)
class PairPerturbationReport:
    budget: PerturbationBudget
    s_inv_norm: float
    worst: WeaveSearchResult | None
    certificate: BoundCertificate | None


def basis_perturbation_check(basis0: FrameSystem, candidate,
                             cond_cap: float = DEFAULT_COND_CAP) -> BasisPerturbationReport:
    """Small perturbation lemma: sum_j ||x_j - y_j|| ||x*_j|| < 1.

    ``basis0`` must be a basis paired with its biorthogonal functionals.
    On a satisfied budget the candidate is checked to be an equivalent
    basis and the pair is woven as bases (every weaving independent with a
    finite basis constant), exhaustively.
    """
    if basis0.n != basis0.space.dim:
        raise InputError("basis perturbation needs a square basis system")
    try:
        biorthogonals(basis0.vectors)
    except Exception as exc:
        raise InputError(f"basis0 is not a basis: {exc}") from None
    cand = np.asarray(getattr(candidate, "vectors", candidate), dtype=np.float64)
    if cand.shape != basis0.vectors.shape:
        raise InputError("candidate vectors have the wrong shape")
    kind = basis0.space.norm
    actual = float(sum(
        vector_norm(basis0.vectors[j] - cand[j], kind) * dual_norm(basis0.functionals[j], kind)
        for j in range(basis0.n)))
    budget = PerturbationBudget("basis_sum", 1.0, actual)
    if not budget.satisfied:
        return BasisPerturbationReport(budget, None, None, None, None)
    try:
        cand_duals = biorthogonals(cand)
        is_basis = True
    except Exception:
        return BasisPerturbationReport(budget, False, None, False, None)
    equivalence = equivalence_constants(basis0.vectors, cand, basis0.space)
    f1 = FrameSystem(basis0.space, cand, cand_duals, label="perturbed")
    all_bases = True
    worst_c = 0.0
    for m in range(1 << basis0.n):
        woven = weave(basis0, f1, WeavePattern.from_index(m, basis0.n))
        try:
            duals = biorthogonals(woven.vectors)
        except Exception:
            all_bases = False
            continue
        worst_c = max(worst_c, basis_constant(woven.vectors, basis0.space, duals).value)
    return BasisPerturbationReport(budget, is_basis, equivalence, all_bases, worst_c)


def _certify_residuals(f0: FrameSystem, f1: FrameSystem, s_inv: np.ndarray,
                       bound: float, seed: int,
                       cond_cap: float) -> BoundCertificate:
    """Check ||Id - S_sigma S^-1|| <= bound and invertibility per pattern."""
    n = f0.n
    space = f0.space
    exhaustive = n <= EXHAUSTIVE_CERT_CAP
    if exhaustive:
        ms = range(1 << n)
    else:
        rng = np.random.default_rng(seed)
        alt = WeavePattern.alternating(n)
        picks = {0, (1 << n) - 1, alt.index, alt.complement().index}
        while len(picks) < 512:
            picks.add(int(rng.integers(0, 1 << n)))
        ms = sorted(picks)
    eye = np.eye(space.dim)
    max_res = 0.0
    failures = []
    count = 0
    for m in ms:
        count += 1
        pattern = WeavePattern.from_index(m, n)
        s_sigma = frame_operator(weave(f0, f1, pattern)).entries
        res = operator_norm(DenseOperator.on_space(eye - s_sigma @ s_inv, space)).value
        max_res = max(max_res, res)
        ok = res <= bound + CERT_SLACK
        if ok:
            try:
                invert(DenseOperator.on_space(s_sigma, space), cond_cap=cond_cap)
            except NotInvertible:
                ok = False
        if not ok:
            failures.append(str(pattern))
    return BoundCertificate(holds=not failures, bound=bound, max_residual=max_res,
                            patterns_checked=count, exhaustive=exhaustive,
                            failures=tuple(failures[:16]))


def operator_perturbation_check(system: FrameSystem, op,
                                mode=EXHAUSTIVE, seed: int = 0,
                                cond_cap: float = DEFAULT_COND_CAP,
                                workers: int | None = None) -> OperatorPerturbationReport:
    """Operator perturbation: ||Id - T|| < 1/C_s certifies (T x_i, f_i) woven.

    Requires an exactly computed suppression constant; warns when C_s is so
    large the theorem is vacuous in practice.  On a satisfied budget, every
    weaving of the original with the pushed-forward system is certified
    invertible with ||Id - S_sigma S^-1|| <= C_s ||Id - T|| (+1e-9 slack).
    """
    t_entries = np.asarray(getattr(op, "entries", op), dtype=np.float64)
    d = system.space.dim
    if t_entries.shape != (d, d):
        raise InputError(f"perturbing operator must be {d}x{d}")
    c_s = suppression_constant(system, mode, seed=seed, workers=workers,
                               cond_cap=cond_cap)
    if c_s.exactness is not Exactness.EXACT:
        raise InputError("operator perturbation needs an exact suppression "
                         "constant (exhaustive mode over an exact norm)")
    if c_s.value > CONDITIONAL_CS_WARNING:
        warnings.warn(f"suppression constant {c_s.value:.3g} is large; the "
                      "operator perturbation bound is vacuous in practice",
                      stacklevel=2)
    space = system.space
    deviation = operator_norm(
        DenseOperator.on_space(np.eye(d) - t_entries, space)).value
    budget = PerturbationBudget("operator_deviation", 1.0 / c_s.value, deviation)
    pushed = FrameSystem(space, (t_entries @ system.vectors.T).T,
                         system.functionals, label=f"T({system.label})")
    if not budget.satisfied:
        return OperatorPerturbationReport(budget, c_s, None, None)
    worst = worst_weaving(system, pushed, mode, cond_cap=cond_cap, seed=seed,
                          workers=workers)
    s_inv = invert(frame_operator(system), cond_cap=cond_cap).entries
    cert = _certify_residuals(system, pushed, s_inv,
                              bound=c_s.value * deviation, seed=seed,
                              cond_cap=cond_cap)
    return OperatorPerturbationReport(budget, c_s, worst, cert)


def pair_perturbation_check(f0: FrameSystem, f1: FrameSystem,
                            mode=EXHAUSTIVE, seed: int = 0,
                            cond_cap: float = DEFAULT_COND_CAP,
                            workers: int | None = None) -> PairPerturbationReport:
    """Pairwise perturbation: the mixed sum below 1/||S^-1|| certifies weaving.

    actual = sum_i (||f_i^0 - f_i^1|| ||x_i^0|| + ||x_i^0 - x_i^1|| ||f_i^1||),
    measured with dual norms on the functionals.  On success every weaving's
    frame operator T_sigma satisfies ||Id - T_sigma S^-1|| <= actual ||S^-1||
    and is invertible (checked by explicit inversion).
    """
    if f0.space != f1.space or f0.n != f1.n:
        raise InputError("systems are incompatible")
    report = check_approximate_frame(f0, cond_cap)
    if report.verdict != "frame":
        raise NotAFrame("the reference system is not an approximate frame")
    kind = f0.space.norm
    actual = 0.0
    for i in range(f0.n):
        actual += dual_norm(f0.functionals[i] - f1.functionals[i], kind) \
            * vector_norm(f0.vectors[i], kind)
        actual += vector_norm(f0.vectors[i] - f1.vectors[i], kind) \
            * dual_norm(f1.functionals[i], kind)
    s_inv_norm = report.s_inv_norm.value
    budget = PerturbationBudget("pair_sum", 1.0 / s_inv_norm, float(actual))
    if not budget.satisfied:
        return PairPerturbationReport(budget, s_inv_norm, None, None)
    worst = worst_weaving(f0, f1, mode, cond_cap=cond_cap, seed=seed,
                          workers=workers)
    s_inv = invert(frame_operator(f0), cond_cap=cond_cap).entries
    cert = _certify_residuals(f0, f1, s_inv, bound=actual * s_inv_norm,
                              seed=seed, cond_cap=cond_cap)
    return PairPerturbationReport(budget, s_inv_norm, worst, cert)
