"""Constructors, validation and file IO for the three-qubit state families."""

import json

import numpy as np

from .linalg import HERM_TOL, hermitian_eigenvalues

PSD_TOL = 1e-9

# basis indices (A most significant): the four GHZ antidiagonal pairs and
# the two Dicke triples
_PURE_SUPPORT = {
    "ghz1": (0, 7),
    "ghz2": (1, 6),
    "ghz3": (2, 5),
    "ghz4": (3, 4),
    "w": (1, 2, 4),
    "wtilde": (3, 5, 6),
}

FAMILIES = tuple(_PURE_SUPPORT)


class StateValidationError(ValueError):
    """Carries the list of violated density-matrix invariants."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(violations))


def make_pure(family):
    """Projector onto the named pure state (ghz1..ghz4, w, wtilde)."""
    key = family.lower()
    if key not in _PURE_SUPPORT:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    v = np.zeros(8, dtype=complex)
    idx = _PURE_SUPPORT[key]
    v[list(idx)] = 1.0 / np.sqrt(len(idx))
    return np.outer(v, v.conj())


def make_noisy(family, *, alpha=None, beta=None):
    """White-noise mixture of a pure family state.

    GHZ families use visibility alpha:  alpha * pure + (1 - alpha) * I/8.
    W families use noise weight beta:   (1 - beta) * pure + beta/8 * I.
    The two conventions match the thresholds they are compared against.
    """
    key = family.lower()
    pure = make_pure(key)
    eye8 = np.eye(8, dtype=complex) / 8
    if key.startswith("ghz"):
        if alpha is None or beta is not None:
            raise ValueError("GHZ families take alpha, not beta")
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        return alpha * pure + (1 - alpha) * eye8
    if beta is None or alpha is not None:
        raise ValueError("W families take beta, not alpha")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    return (1 - beta) * pure + beta * eye8


def validate(rho):
    """Check Hermiticity, unit trace and positivity; return a symmetrized copy.

    All violations are collected and reported together with their magnitudes.
    """
    rho = np.asarray(rho, dtype=complex)
    violations = []
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StateValidationError([f"not a square matrix: shape {rho.shape}"])
    herm_dev = np.abs(rho - rho.conj().T).max()
    if herm_dev > HERM_TOL:
        violations.append(f"not Hermitian: max |rho - rho^dag| = {herm_dev:.3e}")
    tr_dev = abs(np.trace(rho) - 1.0)
    if tr_dev > HERM_TOL:
        violations.append(f"trace differs from 1 by {tr_dev:.3e}")
    sym = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    if min_eig < -PSD_TOL:
        violations.append(f"not positive semidefinite: min eigenvalue = {min_eig:.3e}")
    if violations:
        raise StateValidationError(violations)
    return sym


def load_state(source):
    """Read a state from a JSON file path, file object or parsed dict.

    Two forms are accepted: an explicit matrix
    {"dim": 8, "re": [[...]], "im": [[...]]} (im optional), or a named family
    {"family": "ghz1", "alpha": 0.95} / {"family": "w", "beta": 0.2}.
    """
    if isinstance(source, dict):
        obj = source
    elif hasattr(source, "read"):
        obj = json.load(source)
    else:
        with open(source) as f:
            obj = json.load(f)
    if "family" in obj:
        fam = obj["family"].lower()
        if "alpha" in obj or "beta" in obj:
            return make_noisy(fam, alpha=obj.get("alpha"), beta=obj.get("beta"))
        return make_pure(fam)
    if "re" not in obj:
        raise ValueError("state JSON needs either 'family' or 're'/'im' entries")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    dim = obj.get("dim", re.shape[0])
    rho = re + 1j * im
    if rho.shape != (dim, dim):
        raise ValueError(f"matrix shape {rho.shape} does not match dim {dim}")
    return rho


def save_state(path, rho):
    """Write a matrix in the JSON format load_state reads."""
    rho = np.asarray(rho, dtype=complex)
    obj = {
        "dim": rho.shape[0],
        "re": rho.real.tolist(),
        "im": rho.imag.tolist(),
    }
    with open(path, "w") as f:
        json.dump(obj, f)
        f.write("\n")
