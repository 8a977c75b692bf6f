"""Small dense semidefinite-programming solver.

Standard form over real symmetric block-diagonal variables:

    minimize    sum_b tr(C_b X_b)
    subject to  sum_b tr(A_{i,b} X_b) = b_i   (i = 1..m),   X_b >= 0.

Solved with a primal-dual interior-point method: Nesterov-Todd scaling,
Mehrotra predictor-corrector, dense Cholesky of the Schur complement,
0.98 step to the boundary. Complex Hermitian problems enter through their
real symmetric embedding (the witness module does that translation).

Problem sizes here are tiny (a dozen 16x16 blocks, a few hundred rows), so
everything is dense and the Schur complement is rebuilt every iteration.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

SYM_TOL = 1e-10
DEP_TOL = 1e-9


def _sym(a):
    return 0.5 * (a + a.T)


class SdpProblem:
    """Validated standard-form problem.

    block_dims: list of block sizes.
    C: list of per-block symmetric cost matrices.
    A: list (per block) of arrays with shape (m, d_b, d_b).
    b: right-hand side vector (m,).

    Construction checks symmetry of every coefficient matrix and screens the
    constraint rows for linear dependence (Gram-Schmidt over the concatenated
    block vectorization); dependent rows are dropped with a warning.
    """

    def __init__(self, block_dims, C, A, b, _skip_checks=False):
        self.block_dims = list(block_dims)
        self.C = [np.asarray(c, dtype=float) for c in C]
        self.A = [np.asarray(a, dtype=float) for a in A]
        self.b = np.asarray(b, dtype=float).copy()
        self.dropped_rows = 0
        if _skip_checks:
            return
        if len(self.C) != len(self.block_dims) or len(self.A) != len(self.block_dims):
            raise ValueError("C and A must have one entry per block")
        m = self.b.size
        for d, c, a in zip(self.block_dims, self.C, self.A):
            if c.shape != (d, d):
                raise ValueError(f"objective block shape {c.shape} != ({d},{d})")
            if a.shape != (m, d, d):
                raise ValueError(f"constraint block shape {a.shape} != ({m},{d},{d})")
            if np.abs(c - c.T).max() > SYM_TOL:
                raise ValueError("objective block is not symmetric")
            if m and np.abs(a - a.transpose(0, 2, 1)).max() > SYM_TOL:
                raise ValueError("constraint coefficient block is not symmetric")
        self._drop_dependent_rows()

    def _row_matrix(self):
        return np.hstack([a.reshape(self.b.size, -1) for a in self.A])

    def _drop_dependent_rows(self):
        rows = self._row_matrix()
        m = rows.shape[0]
        keep = []
        basis = np.empty_like(rows)
        k = 0
        for i in range(m):
            v = rows[i].copy()
            nrm0 = np.linalg.norm(v)
            if nrm0 == 0.0:
                continue
            for _ in range(2):  # one re-orthogonalization pass for stability
                if k:
                    v -= basis[:k].T @ (basis[:k] @ v)
            nrm = np.linalg.norm(v)
            if nrm <= DEP_TOL * nrm0:
                continue
            basis[k] = v / nrm
            k += 1
            keep.append(i)
        dropped = m - len(keep)
        if dropped:
            warnings.warn(f"dropped {dropped} linearly dependent constraint rows", UserWarning)
            self.A = [a[keep] for a in self.A]
            self.b = self.b[keep]
        self.dropped_rows = dropped

    def with_objective(self, C):
        """Same constraints, new objective. Skips the (expensive) row screen."""
        C = [np.asarray(c, dtype=float) for c in C]
        for d, c in zip(self.block_dims, C):
            if c.shape != (d, d) or np.abs(c - c.T).max() > SYM_TOL:
                raise ValueError("objective block is not symmetric or mis-sized")
        out = SdpProblem(self.block_dims, C, self.A, self.b, _skip_checks=True)
        out.dropped_rows = self.dropped_rows
        return out

    # -- operator A and its adjoint ------------------------------------

    def apply(self, X):
        out = np.zeros(self.b.size)
        for a, x in zip(self.A, X):
            out += a.reshape(self.b.size, -1) @ x.ravel()
        return out

    def adjoint(self, y):
        return [_sym((a.reshape(self.b.size, -1).T @ y).reshape(d, d))
                for a, d in zip(self.A, self.block_dims)]


@dataclass
class SdpSolution:
    X: list
    y: np.ndarray
    S: list
    primal_obj: float
    dual_obj: float
    gap: float
    status: str
    iterations: int
    history: list = field(default_factory=list)
    dropped_rows: int = 0


def _tr2(a, b):
    # trace inner product of symmetric matrices
    return float(np.sum(a * b))


def _nt_scaling(X, S):
    """Nesterov-Todd scaling point W (W S W = X) plus S^{-1}, via eigensolves."""
    s, U = np.linalg.eigh(S)
    s = np.maximum(s, 1e-300)
    sq = U * np.sqrt(s)
    isq = U / np.sqrt(s)
    Shalf = sq @ U.T
    Sinvhalf = isq @ U.T
    T = _sym(Shalf @ X @ Shalf)
    t, V = np.linalg.eigh(T)
    t = np.maximum(t, 1e-300)
    Thalf = (V * np.sqrt(t)) @ V.T
    W = _sym(Sinvhalf @ Thalf @ Sinvhalf)
    Sinv = (U / s) @ U.T
    return W, _sym(Sinv)


def _max_step(V, D):
    """Largest alpha with V + alpha D >= 0, for V > 0 (inf if D >= 0)."""
    try:
        L = np.linalg.cholesky(V)
    except np.linalg.LinAlgError:
        L = np.linalg.cholesky(V + 1e-12 * np.trace(V) / V.shape[0] * np.eye(V.shape[0]))
    Y = np.linalg.solve(L, D)
    G = _sym(np.linalg.solve(L, Y.T).T)
    lam = np.linalg.eigvalsh(G)[0]
    if lam >= 0.0:
        return np.inf
    return -1.0 / lam


def solve(problem, tol=1e-8, max_iter=100, start=None):
    """Run the interior-point iteration.

    ``start`` may supply (X0, y0, S0) with every block strictly positive
    definite; otherwise the identity infeasible start X = S = I, y = 0 is
    used. Status is one of "optimal", "max-iterations", "numerical-failure";
    non-optimal exits still return the last iterate.
    """
    dims = problem.block_dims
    nb = len(dims)
    m = problem.b.size
    total_dim = sum(dims)
    bnorm = 1.0 + np.linalg.norm(problem.b)
    cnorm = 1.0 + np.sqrt(sum(np.sum(c * c) for c in problem.C))

    if start is None:
        X = [np.eye(d) for d in dims]
        S = [np.eye(d) for d in dims]
        y = np.zeros(m)
    else:
        X0, y0, S0 = start
        X = [np.asarray(x, dtype=float).copy() for x in X0]
        S = [np.asarray(s, dtype=float).copy() for s in S0]
        y = np.asarray(y0, dtype=float).copy()

    Aflat = [a.reshape(m, -1) for a in problem.A]
    history = []
    status = "max-iterations"
    it = 0

    for it in range(max_iter + 1):
        rp = problem.b - problem.apply(X)
        Rd = [c - aj - s for c, aj, s in zip(problem.C, problem.adjoint(y), S)]
        pobj = sum(_tr2(c, x) for c, x in zip(problem.C, X))
        dobj = float(problem.b @ y)
        gap = sum(_tr2(x, s) for x, s in zip(X, S))
        pinf = np.linalg.norm(rp) / bnorm
        dinf = np.sqrt(sum(np.sum(r * r) for r in Rd)) / cnorm
        relgap = gap / (1.0 + abs(pobj) + abs(dobj))
        history.append((pobj, dobj, gap, pinf, dinf))
        if relgap <= tol and pinf <= tol and dinf <= tol:
            status = "optimal"
            break
        if it == max_iter:
            break
        if not (np.isfinite(pobj) and np.isfinite(dobj) and np.isfinite(gap)):
            status = "numerical-failure"
            break

        mu = gap / total_dim
        try:
            Ws, Sinvs = zip(*[_nt_scaling(X[b], S[b]) for b in range(nb)])
            # Schur complement M_ij = sum_b tr(A_i W A_j W)
            M = np.zeros((m, m))
            for b in range(nb):
                WAW = np.einsum("ij,kjl,lm->kim", Ws[b], problem.A[b], Ws[b], optimize=True)
                M += Aflat[b] @ WAW.reshape(m, -1).T
            M = _sym(M)
            ridge = 0.0
            for attempt in range(4):
                try:
                    L = np.linalg.cholesky(M + ridge * np.eye(m))
                    break
                except np.linalg.LinAlgError:
                    ridge = max(ridge * 100, 1e-12 * (np.trace(M) / m + 1.0))
            else:
                status = "numerical-failure"
                break

            def solve_schur(rhs):
                z = np.linalg.solve(L, rhs)
                return np.linalg.solve(L.T, z)

            def direction(V):
                # Delta X + W Delta S W = V,  Delta S = Rd - A* Delta y
                base = [V[b] - _sym(Ws[b] @ Rd[b] @ Ws[b]) for b in range(nb)]
                rhs = rp - problem.apply(base)
                dy = solve_schur(rhs)
                Ady = problem.adjoint(dy)
                dS = [Rd[b] - Ady[b] for b in range(nb)]
                dX = [base[b] + _sym(Ws[b] @ Ady[b] @ Ws[b]) for b in range(nb)]
                return dX, dy, dS

            # predictor (affine scaling)
            V_aff = [-X[b] for b in range(nb)]
            dXa, dya, dSa = direction(V_aff)
            ap = min([1.0] + [0.98 * _max_step(X[b], dXa[b]) for b in range(nb)])
            ad = min([1.0] + [0.98 * _max_step(S[b], dSa[b]) for b in range(nb)])
            gap_aff = sum(
                _tr2(X[b] + ap * dXa[b], S[b] + ad * dSa[b]) for b in range(nb)
            )
            sigma = min(1.0, max(0.0, (gap_aff / gap)) ** 3)

            # corrector with Mehrotra second-order term
            V = []
            for b in range(nb):
                corr = dXa[b] @ dSa[b] @ Sinvs[b]
                V.append(sigma * mu * Sinvs[b] - X[b] - _sym(corr))
            dX, dy, dS = direction(V)
            ap = min([1.0] + [0.98 * _max_step(X[b], dX[b]) for b in range(nb)])
            ad = min([1.0] + [0.98 * _max_step(S[b], dS[b]) for b in range(nb)])
            if ap < 1e-12 and ad < 1e-12:
                status = "numerical-failure"
                break
            for b in range(nb):
                X[b] = _sym(X[b] + ap * dX[b])
                S[b] = _sym(S[b] + ad * dS[b])
            y = y + ad * dy
        except np.linalg.LinAlgError:
            status = "numerical-failure"
            break

    return SdpSolution(
        X=X, y=y, S=S,
        primal_obj=history[-1][0], dual_obj=history[-1][1], gap=history[-1][2],
        status=status, iterations=it, history=history,
        dropped_rows=problem.dropped_rows,
    )


def write_sdpa(problem, path):
    """Dump the problem as a plain-text sparse SDPA-style listing.

    Header: m, number of blocks, block sizes, rhs vector. Then one line per
    upper-triangle nonzero: constraint-index (0 = objective), block, row,
    col, value, all 1-based.
    """
    lines = [
        f"{problem.b.size}",
        f"{len(problem.block_dims)}",
        " ".join(str(d) for d in problem.block_dims),
        " ".join(format(v, ".17g") for v in problem.b),
    ]

    def emit(k, b, mat):
        d = mat.shape[0]
        for i in range(d):
            for j in range(i, d):
                if mat[i, j] != 0.0:
                    lines.append(f"{k} {b + 1} {i + 1} {j + 1} {format(mat[i, j], '.17g')}")

    for b, c in enumerate(problem.C):
        emit(0, b, c)
    for k in range(problem.b.size):
        for b, a in enumerate(problem.A):
            emit(k + 1, b, a[k])
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
