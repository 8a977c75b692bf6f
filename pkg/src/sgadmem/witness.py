"""Genuine multipartite entanglement detection for three qubits.

The central quantity is the genuine negativity E(rho): the state is tested
against mixtures of states that are PPT across the cuts A|BC, B|AC, C|AB by
minimizing tr(W rho) over fully decomposable witnesses,

    W = P_M + Q_M^{T_M},  0 <= P_M <= I,  0 <= Q_M <= I,  for every cut M,

and reporting E = max(0, -2 optimum). Both variable families are
box-constrained; with the factor-2 rescale this normalization puts pure GHZ
states exactly at 1. E > 0 certifies genuine multipartite entanglement;
E = 0 means the state admits a PPT-mixture decomposition (or sits on the
boundary), which for three qubits is the standard relaxation of
biseparability.

The SDP is solved in-house (sdp module) on the real symmetric embedding
phi(H) = [[Re H, -Im H], [Im H, Re H]] of the twelve Hermitian blocks
{P_M, I-P_M, Q_M, I-Q_M}. The 512-row constraint skeleton does not depend
on rho, so it is assembled and screened once and only the objective is
swapped per call. The identity-sum structure also yields a strictly
feasible primal-dual starting point in closed form, which keeps every
iterate feasible and the duality gap nonnegative throughout.

Also here: bipartite negativity and PPT checks, the antidiagonal
coherence-vs-populations inequality for X-shaped states, its closed-form
asymptotic-state specialization, and bisection threshold scans.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import SgadParams, asymptotic_state
from .linalg import BIPARTITIONS, partial_transpose, hermitian_eigenvalues, trace_norm
from .sdp import solve, SdpProblem
from .states import make_noisy, make_pure, validate

GMN_EPS = 1e-6
MARGIN_TOL = 1e-12
XSTATE_PAIRS = ((1, 8), (2, 7), (3, 6), (4, 5))


def negativity(rho, cut):
    """Bipartite negativity across `cut`: trace_norm(rho^{T_M}) - 1."""
    rho = validate(rho)
    return max(0.0, trace_norm(partial_transpose(rho, cut)) - 1.0)


def is_ppt(rho, cut, tol=1e-9):
    """True iff the partial transpose across `cut` has no eigenvalue < -tol."""
    rho = validate(rho)
    return bool(hermitian_eigenvalues(partial_transpose(rho, cut))[0] >= -tol)


# -- SDP assembly ------------------------------------------------------

def _embed(h):
    # real symmetric image of a Hermitian matrix
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def _unembed(x):
    d = x.shape[0] // 2
    h = 0.5 * (x[:d, :d] + x[d:, d:]) + 0.5j * (x[d:, :d] - x[:d, d:])
    return 0.5 * (h + h.conj().T)


@lru_cache(maxsize=1)
def _hermitian_basis():
    """64 Hermitian basis matrices for 8x8; the 8 diagonal units come first."""
    basis = []
    for i in range(8):
        e = np.zeros((8, 8), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(8):
        for j in range(i + 1, 8):
            s = np.zeros((8, 8), dtype=complex)
            s[i, j] = s[j, i] = 1.0
            basis.append(s)
            a = np.zeros((8, 8), dtype=complex)
            a[i, j] = 1j
            a[j, i] = -1j
            basis.append(a)
    return np.array(basis)


@lru_cache(maxsize=1)
def _skeleton():
    """Constraint skeleton shared by every gmn call.

    Block order: [P, I-P, Q, I-Q] per cut, twelve 16x16 real blocks. Rows:
    six identity-sum groups of 64 (P_M + complement = I, Q_M likewise),
    then two groups of 64 identifying the three decompositions of W. Matrix
    equalities are expanded over the Hermitian basis; tr(phi(A) phi(B)) =
    2 tr(AB) fixes the right-hand sides. Returns the problem (zero
    objective) and the dual start y0 with -1 on the diagonal-unit rows, for
    which the adjoint is exactly -I on every block.
    """
    basis = _hermitian_basis()
    emb = np.array([_embed(h) for h in basis])
    emb_pt = [
        np.array([_embed(partial_transpose(h, cut)) for h in basis])
        for cut in BIPARTITIONS
    ]
    m = 512
    A = [np.zeros((m, 16, 16)) for _ in range(12)]
    b = np.zeros(m)
    traces = 2.0 * np.trace(basis, axis1=1, axis2=2).real

    def blk(cut_idx, kind):
        # kind: 0 = P, 1 = I-P, 2 = Q, 3 = I-Q
        return 4 * cut_idx + kind

    row = 0
    for cut_idx in range(3):
        for kind in (0, 2):
            sl = slice(row, row + 64)
            A[blk(cut_idx, kind)][sl] = emb
            A[blk(cut_idx, kind + 1)][sl] = emb
            b[sl] = traces
            row += 64
    for cut_idx in (1, 2):
        sl = slice(row, row + 64)
        A[blk(0, 0)][sl] = emb
        A[blk(0, 2)][sl] = emb_pt[0]
        A[blk(cut_idx, 0)][sl] = -emb
        A[blk(cut_idx, 2)][sl] = -emb_pt[cut_idx]
        row += 64

    problem = SdpProblem([16] * 12, [np.zeros((16, 16))] * 12, A, b)
    y0 = np.zeros(problem.b.size)
    for g in range(6):
        y0[64 * g: 64 * g + 8] = -1.0
    return problem, y0


@dataclass
class GmnReport:
    """Outcome of the genuine-negativity program.

    value is E(rho) = max(0, -2 optimum) and satisfies tr(witness . rho) =
    -value/2 whenever the state is detected. Results with status other than
    "optimal" should not be trusted.
    """
    value: float
    witness: np.ndarray
    negativities: dict
    status: str
    optimum: float
    gap: float
    iterations: int


def gmn(rho, *, tol=1e-8, max_iter=100):
    """Genuine negativity of a three-qubit state via the witness SDP."""
    rho = validate(rho)
    skeleton, y0 = _skeleton()
    rho_t1 = partial_transpose(rho, BIPARTITIONS[0])
    C = [np.zeros((16, 16)) for _ in range(12)]
    C[0] = 0.5 * _embed(rho)
    C[2] = 0.5 * _embed(rho_t1)
    problem = skeleton.with_objective(C)
    X0 = [0.5 * np.eye(16) for _ in range(12)]
    S0 = [c - a for c, a in zip(problem.C, problem.adjoint(y0))]
    sol = solve(problem, tol=tol, max_iter=max_iter, start=(X0, y0, S0))

    witness = _unembed(sol.X[0]) + partial_transpose(_unembed(sol.X[2]), BIPARTITIONS[0])
    negativities = {
        cut.label: max(0.0, trace_norm(partial_transpose(rho, cut)) - 1.0)
        for cut in BIPARTITIONS
    }
    return GmnReport(
        value=max(0.0, -2.0 * sol.primal_obj),
        witness=witness,
        negativities=negativities,
        status=sol.status,
        optimum=sol.primal_obj,
        gap=sol.gap,
        iterations=sol.iterations,
    )


# -- closed-form criteria ----------------------------------------------

@dataclass
class CriterionReport:
    pair: tuple
    lhs: float
    rhs: float
    margin: float
    violated: bool


def xstate_criterion(rho, antidiag_pair):
    """Antidiagonal-coherence test for X-shaped states.

    For the 1-based antidiagonal pair (i, j), compares |rho_ij| against the
    sum over the other three antidiagonal pairs (k, l) of
    sqrt(rho_kk rho_ll). Violation (margin > 1e-12) implies genuine
    multipartite entanglement; the test is necessary and sufficient on
    GHZ-diagonal states but only necessary in general.
    """
    rho = validate(rho)
    pair = (int(antidiag_pair[0]), int(antidiag_pair[1]))
    if pair not in XSTATE_PAIRS:
        raise ValueError(f"antidiagonal pair must be one of {XSTATE_PAIRS}, got {pair}")
    lhs = abs(rho[pair[0] - 1, pair[1] - 1])
    rhs = 0.0
    for k, l in XSTATE_PAIRS:
        if (k, l) == pair:
            continue
        rhs += math.sqrt(max(rho[k - 1, k - 1].real, 0.0) * max(rho[l - 1, l - 1].real, 0.0))
    margin = lhs - rhs
    return CriterionReport(pair=pair, lhs=lhs, rhs=rhs, margin=margin,
                           violated=bool(margin > MARGIN_TOL))


def asymptotic_ghz1_criterion(alpha, n, mu):
    """Closed-form biseparability test for the t -> inf state of a
    GHZ-plus-white-noise mixture under the memory channel.

    Evaluates both sides of

        3 sqrt(u v) >= (n(1+n))^{3/2} alpha (1-mu) / (1+2n)^3,
        u = n^2(1+n)(1-mu)/(1+2n)^3 + mu(1-alpha)/8,
        v = n(1+n)^2(1-mu)/(1+2n)^3 + mu(1-alpha)/8.

    satisfied=True means the inequality holds and the asymptotic state is
    not detected; False is the closed-form counterpart of an xstate_criterion
    violation on pair (1, 8).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if n < 0.0:
        raise ValueError("n must be nonnegative")
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mu must lie in [0, 1]")
    den = (1.0 + 2.0 * n) ** 3
    u = n * n * (1.0 + n) * (1.0 - mu) / den + mu * (1.0 - alpha) / 8.0
    v = n * (1.0 + n) ** 2 * (1.0 - mu) / den + mu * (1.0 - alpha) / 8.0
    lhs = 3.0 * math.sqrt(u * v)
    rhs = (n * (1.0 + n)) ** 1.5 * alpha * (1.0 - mu) / den
    return {"satisfied": bool(lhs >= rhs), "lhs": lhs, "rhs": rhs}


# -- threshold location --------------------------------------------------

@dataclass
class ScanResult:
    scan: str
    found: bool
    boundary: float
    bracket: tuple
    lo_value: float
    hi_value: float
    evaluations: int


def threshold_scan(family, scan, bracket, *, n=1.0, mu=None, alpha=None,
                   beta=None, asymptotic=False, eps=GMN_EPS, resolution=1e-3,
                   tol=1e-8):
    """Bisect `scan` over `bracket` for the gmn > eps boundary.

    scan is "alpha", "beta" (mixture weight of the chosen family) or "mu"
    (memory weight; requires asymptotic=True since mu only enters through
    the channel). With asymptotic=True each probe state is the t -> inf
    output at bath occupation n; asymptotic maps carry no squeezing
    dependence, so m is not a parameter here. If gmn - eps has the same
    sign at both ends the result has found=False and boundary=nan, which is
    a no-threshold outcome rather than an error. Otherwise the boundary is
    bisected to within `resolution`.
    """
    if scan not in ("alpha", "beta", "mu"):
        raise ValueError('scan must be "alpha", "beta" or "mu"')
    if scan == "mu" and not asymptotic:
        raise ValueError("scanning mu requires asymptotic=True")

    def gmn_at(v):
        weights = {"alpha": alpha, "beta": beta}
        if scan in weights:
            weights[scan] = v
        weights = {k: w for k, w in weights.items() if w is not None}
        state = make_noisy(family, **weights) if weights else make_pure(family)
        if asymptotic:
            mu_v = v if scan == "mu" else mu
            state = asymptotic_state(state, SgadParams(1.0, float(n), 0.0), float(mu_v))
        return gmn(state, tol=tol).value

    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    lo_value = gmn_at(lo)
    hi_value = gmn_at(hi)
    evaluations = 2
    lo_pos = lo_value > eps
    if lo_pos == (hi_value > eps):
        return ScanResult(scan=scan, found=False, boundary=math.nan,
                          bracket=(lo, hi), lo_value=lo_value,
                          hi_value=hi_value, evaluations=evaluations)
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        evaluations += 1
        if (gmn_at(mid) > eps) == lo_pos:
            lo = mid
        else:
            hi = mid
    return ScanResult(scan=scan, found=True, boundary=0.5 * (lo + hi),
                      bracket=(lo, hi), lo_value=lo_value, hi_value=hi_value,
                      evaluations=evaluations)
