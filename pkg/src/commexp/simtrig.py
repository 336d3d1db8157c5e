"""Simultaneous triangularization of a matrix pair over C.

Predicate: F, G are simultaneously triangularizable iff tr([F,G] w) = 0 for
every word w in the unital algebra generated by F and G (the commutator
ideal of a triangularizable algebra is nilpotent, hence trace orthogonal to
the algebra).  The algebra has dimension at most d^2, so closing the word
set under multiplication with linear-independence filtering terminates
quickly for d <= 3.

The constructive half deflates by common eigenvectors: intersect kernels of
F - lambda I and G - mu I over eigenvalue pairs, split off the common
eigenvector with a unitary, recurse on the quotient block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DeflationError, DimensionError
from .numkernel import MAX_DIM, as_matrix, eigen_decompose

WORD_INDEPENDENCE_TOL = 1e-10
BASIS_VERIFY_TOL = 1e-8


@dataclass(frozen=True)
class TrigVerdict:
    """Outcome of the triangularizability test.

    Exactly one of ``basis`` (invertible T with T^-1 F T, T^-1 G T upper
    triangular) and ``witness`` (word w with tr([F,G] w) != 0) is set.
    """

    triangularizable: bool
    basis: np.ndarray | None = None
    witness: np.ndarray | None = None
    witness_word: str | None = None
    witness_trace: complex | None = None


def _word_closure(f: np.ndarray, g: np.ndarray):
    """Independent spanning words of the algebra generated by {I, F, G}."""
    d = f.shape[0]
    words = [(np.eye(d, dtype=complex), "1")]
    basis_rows: list[np.ndarray] = []

    def try_add(mat, label):
        vec = mat.reshape(-1).astype(complex)
        norm = np.linalg.norm(vec)
        if norm == 0:
            return False
        resid = vec.copy()
        for row in basis_rows:
            resid = resid - (row.conj() @ resid) * row
        if np.linalg.norm(resid) <= WORD_INDEPENDENCE_TOL * norm:
            return False
        basis_rows.append(resid / np.linalg.norm(resid))
        words.append((mat, label))
        return True

    try_add(np.eye(d, dtype=complex), "1")
    frontier = [(f, "F"), (g, "G")]
    for mat, label in frontier:
        try_add(mat, label)
    # breadth-first closure; the algebra dimension caps at d^2
    queue = [w for w in words if w[1] != "1"]
    while queue and len(words) < d * d + 1:
        nxt = []
        for mat, label in queue:
            for gen, glabel in ((f, "F"), (g, "G")):
                prod = mat @ gen
                if try_add(prod, label + glabel):
                    nxt.append((prod, label + glabel))
        queue = nxt
    return words


def common_eigenvector(f, g, tol: float = 1e-8) -> np.ndarray | None:
    """Unit vector v with F v = lambda v and G v = mu v within tol, if any.

    Eigenvalue pairs are tried in lexicographic (|lambda|, |mu|) order;
    the first verified vector wins.
    """
    a, b = as_matrix(f), as_matrix(g)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    d = a.shape[0]
    if d > MAX_DIM:
        raise DimensionError(f"common_eigenvector supports d <= {MAX_DIM}")
    eig_a = [lam for lam, _ in eigen_decompose(a, want_vectors=False).distinct()]
    eig_b = [mu for mu, _ in eigen_decompose(b, want_vectors=False).distinct()]
    scale_a = max(1.0, float(np.linalg.norm(a)))
    scale_b = max(1.0, float(np.linalg.norm(b)))
    pairs = sorted(
        ((lam, mu) for lam in eig_a for mu in eig_b),
        key=lambda p: (abs(p[0]), abs(p[1]), p[0].real, p[0].imag, p[1].real, p[1].imag),
    )
    ident = np.eye(d)
    for lam, mu in pairs:
        stacked = np.vstack([a - lam * ident, b - mu * ident])
        _, _, vh = np.linalg.svd(stacked)
        v = vh[-1].conj()
        if (
            np.linalg.norm(a @ v - lam * v) <= tol * scale_a
            and np.linalg.norm(b @ v - mu * v) <= tol * scale_b
        ):
            return v / np.linalg.norm(v)
    return None


def _unitary_with_first_column(v: np.ndarray) -> np.ndarray:
    d = v.shape[0]
    m = np.zeros((d, d), dtype=complex)
    m[:, 0] = v
    m[:, 1:] = np.eye(d, dtype=complex)[:, : d - 1]
    q, _ = np.linalg.qr(m)
    # qr may flip the phase of the leading column; renormalize it to v
    phase = q[:, 0].conj() @ v
    q[:, 0] *= phase / abs(phase)
    return q


def _deflate(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    d = a.shape[0]
    if d == 1:
        return np.eye(1, dtype=complex)
    v = common_eigenvector(a, b, tol)
    if v is None:
        raise DeflationError(
            "trace criterion accepted the pair but no common eigenvector was found"
        )
    q = _unitary_with_first_column(v)
    a2 = q.conj().T @ a @ q
    b2 = q.conj().T @ b @ q
    t_sub = _deflate(a2[1:, 1:], b2[1:, 1:], tol)
    full = np.eye(d, dtype=complex)
    full[1:, 1:] = t_sub
    return q @ full


def _strict_lower_mass(m: np.ndarray) -> float:
    return float(np.linalg.norm(np.tril(m, -1)))


def sim_triangularizable(f, g, tol: float = 1e-9) -> TrigVerdict:
    """Decide simultaneous triangularizability; construct a basis when true."""
    a, b = as_matrix(f), as_matrix(g)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"sim_triangularizable supports d <= {MAX_DIM}")
    comm = a @ b - b @ a
    comm_norm = float(np.linalg.norm(comm))
    for word, label in _word_closure(a, b):
        trace = complex(np.trace(comm @ word))
        scale = max(1.0, comm_norm * float(np.linalg.norm(word)))
        if abs(trace) > tol * scale:
            return TrigVerdict(
                triangularizable=False,
                witness=word,
                witness_word=label,
                witness_trace=trace,
            )
    basis = _deflate(a, b, max(tol, 1e-8))
    for m in (a, b):
        conj = basis.conj().T @ m @ basis
        if _strict_lower_mass(conj) > BASIS_VERIFY_TOL * max(1.0, float(np.linalg.norm(m))):
            raise DeflationError("constructed basis fails the upper-triangularity check")
    return TrigVerdict(triangularizable=True, basis=basis)
