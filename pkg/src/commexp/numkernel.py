"""Dense complex linear algebra for d <= 3.

Everything here is closed form: characteristic polynomials from trace /
principal minors / determinant, eigenvalues from the quadratic formula or
Cardano's cubic, kernels from an SVD.  Matrices whose spectrum sits in
i*pi*Z are recognized ("snapped") so that exponentials can later be taken
exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError

# Two eigenvalues belong to one cluster when |li - lj| <= CLUSTER_TOL * max(1, ||M||_F).
CLUSTER_TOL = 1e-8
# An eigenvalue snaps to i*pi*k when |l - i*pi*k| <= SNAP_TOL * max(1, |l|).
SNAP_TOL = 1e-8

MAX_DIM = 3


@dataclass(frozen=True)
class CMat:
    """Square complex matrix with an optional deferred pi factor.

    ``pi_scaled=True`` means every stored entry is implicitly multiplied by
    pi; storing the integer part keeps file round-trips exact.
    """

    entries: np.ndarray
    pi_scaled: bool = False

    def __post_init__(self):
        arr = np.ascontiguousarray(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise DimensionError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def expanded(self) -> np.ndarray:
        """Entries with the deferred pi factor applied."""
        if self.pi_scaled:
            return self.entries * math.pi
        return self.entries.copy()

    @classmethod
    def from_rows(cls, rows, pi_scaled: bool = False) -> "CMat":
        return cls(np.array(rows, dtype=complex), pi_scaled)

    @classmethod
    def identity(cls, dim: int) -> "CMat":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def zeros(cls, dim: int) -> "CMat":
        return cls(np.zeros((dim, dim), dtype=complex))


MatrixLike = "CMat | np.ndarray | list"


def as_matrix(m) -> np.ndarray:
    """Coerce a CMat / array / nested list to a plain complex ndarray."""
    if isinstance(m, CMat):
        return m.expanded()
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def combine_affine(f, g, t: complex):
    """t*F + G, staying in the pi-scaled representation when both carry it."""
    if isinstance(f, CMat) and isinstance(g, CMat) and f.pi_scaled == g.pi_scaled:
        if f.dim != g.dim:
            raise DimensionError(f"dimension mismatch: {f.dim} vs {g.dim}")
        return CMat(t * f.entries + g.entries, f.pi_scaled)
    a, b = as_matrix(f), as_matrix(g)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return CMat(t * a + b)


def frobenius(m) -> float:
    return float(np.linalg.norm(as_matrix(m)))


def mat_equal_approx(m, n, tol: float) -> bool:
    """Relative Frobenius comparison: ||M-N|| / max(1, ||M||, ||N||) <= tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = as_matrix(m), as_matrix(n)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    scale = max(1.0, float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    return float(np.linalg.norm(a - b)) <= tol * scale


def commutator(m, n) -> np.ndarray:
    a, b = as_matrix(m), as_matrix(n)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def char_poly(m) -> tuple[complex, ...]:
    """Monic coefficients of det(x*I - M), highest degree first, for d <= 3."""
    a = as_matrix(m)
    d = a.shape[0]
    if d > MAX_DIM:
        raise DimensionError(f"char_poly supports d <= {MAX_DIM}, got {d}")
    if d == 1:
        return (1.0 + 0j, -a[0, 0])
    tr = a.trace()
    if d == 2:
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        return (1.0 + 0j, -tr, det)
    s2 = (
        a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    )
    det = (
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )
    return (1.0 + 0j, -tr, s2, -det)


def _poly_eval(coeffs, x):
    acc = 0j
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_roots_quadratic(b, c):
    # x^2 + b x + c, with the larger root computed free of cancellation
    disc = cmath.sqrt(b * b - 4 * c)
    if (b.conjugate() * disc).real > 0:
        disc = -disc
    r1 = (-b + disc) / 2
    r2 = c / r1 if r1 != 0 else -b - r1
    return [r1, r2]


def _poly_roots_cubic(b, c, d):
    # x^3 + b x^2 + c x + d; depressed via x = y - b/3
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    shift = -b / 3
    if abs(p) < 1e-30 and abs(q) < 1e-30:
        return [shift, shift, shift]
    real_coeffs = abs(b.imag) + abs(c.imag) + abs(d.imag) == 0.0
    if real_coeffs:
        disc = -4 * p.real**3 - 27 * q.real**2
        if p.real < 0 and disc > 0:
            # three real roots: trigonometric form avoids the cancellation
            # the radical form suffers when the roots are close
            mcoef = 2 * math.sqrt(-p.real / 3)
            arg = 3 * q.real / (p.real * mcoef)
            arg = max(-1.0, min(1.0, arg))
            theta = math.acos(arg)
            return [
                complex(mcoef * math.cos((theta - 2 * math.pi * k) / 3)) + shift
                for k in range(3)
            ]
    delta = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    cand1, cand2 = -q / 2 + delta, -q / 2 - delta
    w = cand1 if abs(cand1) >= abs(cand2) else cand2
    u = w ** (1 / 3)
    if abs(u) == 0.0:
        y0 = (-q) ** (1 / 3)
        omega = cmath.exp(2j * math.pi / 3)
        return [y0 * omega**k + shift for k in range(3)]
    v = -p / (3 * u)
    omega = cmath.exp(2j * math.pi / 3)
    return [u * omega**k + v * omega ** (-k) + shift for k in range(3)]


def _polish_roots(coeffs, roots, scale):
    # one Newton correction tightens Cardano roundoff; skipped near multiple
    # roots where the derivative underflows the working scale
    deg = len(coeffs) - 1
    deriv = [coeffs[i] * (deg - i) for i in range(deg)]
    out = []
    for r in roots:
        fp = _poly_eval(deriv, r)
        if abs(fp) > 1e-8 * max(1.0, scale) ** (deg - 1):
            r = r - _poly_eval(coeffs, r) / fp
        out.append(r)
    return out


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicity, plus clustering and snap metadata.

    ``eigenvalues`` lists each cluster representative repeated per algebraic
    multiplicity.  ``eigenvectors`` holds one orthonormal kernel basis column
    per geometric dimension found; fewer than ``dim`` columns means the
    matrix is defective.  ``snap`` gives integers k with lambda_i ~ i*pi*k
    (aligned with ``eigenvalues``) and is None when any eigenvalue fails to
    snap.
    """

    eigenvalues: tuple[complex, ...]
    distinct_count: int
    multiplicities: tuple[int, ...] = field(default=())
    eigenvectors: np.ndarray | None = None
    snap: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def distinct(self) -> list[tuple[complex, int]]:
        """(representative, multiplicity) pairs in deterministic order."""
        out = []
        i = 0
        for m in self.multiplicities:
            out.append((self.eigenvalues[i], m))
            i += m
        return out

    @property
    def diagonalizable(self) -> bool:
        return self.eigenvectors is not None and self.eigenvectors.shape[1] == self.dim


def null_space(m, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel.

    Directions with singular value <= tol * sigma_max are kept.
    """
    a = as_matrix(m)
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"null_space supports d <= {MAX_DIM}")
    _, sv, vh = np.linalg.svd(a)
    cutoff = tol * (sv[0] if sv.size else 0.0)
    keep = sv <= cutoff
    return vh[keep].conj().T


def _kernel_columns(shifted: np.ndarray, scale: float) -> np.ndarray:
    # kernel extraction with an absolute floor so that M - lambda*I ~ 0
    # (multiple eigenvalue of a scalar-like matrix) yields the full space
    _, sv, vh = np.linalg.svd(shifted)
    floor = 1e-10 * max(1.0, scale)
    cutoff = max(1e-8 * (sv[0] if sv.size else 0.0), floor)
    keep = sv <= cutoff
    return vh[keep].conj().T


def _cluster(values: list[complex], tol_abs: float):
    """Greedy clustering; returns (representatives repeated, multiplicities)."""
    remaining = sorted(values, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    clusters: list[list[complex]] = []
    for v in remaining:
        placed = False
        for cl in clusters:
            if abs(v - cl[0]) <= tol_abs:
                cl.append(v)
                placed = True
                break
        if not placed:
            clusters.append([v])
    clusters.sort(key=lambda cl: (sum(z.real for z in cl) / len(cl),
                                  sum(z.imag for z in cl) / len(cl)))
    reps, mults = [], []
    for cl in clusters:
        rep = sum(cl) / len(cl)
        reps.extend([rep] * len(cl))
        mults.append(len(cl))
    return reps, mults


def _snap_ints(values, tol: float):
    ks = []
    for v in values:
        k = round(v.imag / math.pi)
        if abs(v - 1j * math.pi * k) > tol * max(1.0, abs(v)):
            return None
        ks.append(k)
    return tuple(ks)


def eigen_decompose(m, *, want_vectors: bool = True) -> Spectrum:
    """Closed-form spectrum for d <= 3 with clustering, kernels and snap."""
    a = as_matrix(m)
    d = a.shape[0]
    if d > MAX_DIM:
        raise DimensionError(f"eigen_decompose supports d <= {MAX_DIM}, got {d}")
    coeffs = char_poly(a)
    if d == 1:
        roots = [a[0, 0]]
    elif d == 2:
        roots = _poly_roots_quadratic(coeffs[1], coeffs[2])
    else:
        roots = _poly_roots_cubic(coeffs[1], coeffs[2], coeffs[3])
    scale = float(np.linalg.norm(a))
    roots = _polish_roots(coeffs, roots, scale)

    reps, mults = _cluster(roots, CLUSTER_TOL * max(1.0, scale))
    vectors = None
    if want_vectors:
        cols = []
        i = 0
        for mult in mults:
            lam = reps[i]
            ker = _kernel_columns(a - lam * np.eye(d), scale)
            cols.append(ker[:, :mult])
            i += mult
        vectors = np.hstack(cols) if cols else np.zeros((d, 0), dtype=complex)
    snap = _snap_ints(reps, SNAP_TOL)
    return Spectrum(
        eigenvalues=tuple(reps),
        distinct_count=len(mults),
        multiplicities=tuple(mults),
        eigenvectors=vectors,
        snap=snap,
    )


def spectrum_congruence_free(values, tol: float) -> bool:
    """True when no pair of values differs by 2*i*pi*k with integer k != 0."""
    two_pi = 2 * math.pi
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            delta = vals[i] - vals[j]
            kmax = math.ceil(abs(delta) / two_pi) + 1
            for k in range(-kmax, kmax + 1):
                if k == 0:
                    continue
                if abs(delta - 2j * math.pi * k) <= tol * max(1.0, abs(delta)):
                    return False
    return True
