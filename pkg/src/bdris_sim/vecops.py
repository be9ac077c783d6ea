"""Dense complex-matrix kernel: vectorization calculus and friends.

Everything here follows the column-major vec convention: vec(A) stacks the
columns of A on top of each other. All permutations are stored as index maps
and applied by gather, never materialized as dense matrices.
"""

from dataclasses import dataclass

import numpy as np


class ConvergenceError(RuntimeError):
    """Iterative factorization exceeded its iteration budget."""


def vec(a: np.ndarray) -> np.ndarray:
    """Stack the columns of a matrix into a single vector."""
    return np.asarray(a).reshape(-1, order="F")


def unvec(a: np.ndarray, m: int, n: int) -> np.ndarray:
    """Inverse of vec: reshape a length-m*n vector into an m-by-n matrix."""
    a = np.asarray(a)
    if a.size != m * n:
        raise ValueError(f"cannot unvec length-{a.size} vector into {m}x{n}")
    return a.reshape((m, n), order="F")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(a, b)


def khatri_rao(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Column-wise Kronecker product of x (I x R) and y (J x R), shape JI x R."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[1] != y.shape[1]:
        raise ValueError(
            f"column-count mismatch: {x.shape[1]} vs {y.shape[1]}"
        )
    i, r = x.shape
    j = y.shape[0]
    return (x[:, None, :] * y[None, :, :]).reshape(i * j, r)


def hadamard(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of two equally shaped matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b


def blkdiag(blocks: list[np.ndarray]) -> np.ndarray:
    """Block-diagonal matrix from a non-empty list of blocks."""
    if len(blocks) == 0:
        raise ValueError("blkdiag needs at least one block")
    blocks = [np.atleast_2d(np.asarray(b)) for b in blocks]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    dtype = np.result_type(*blocks)
    out = np.zeros((rows, cols), dtype=dtype)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


@dataclass(frozen=True)
class PermutationMap:
    """Index permutation applied by gather: apply(v)[i] = v[perm[i]]."""

    perm: np.ndarray

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.intp)
        object.__setattr__(self, "perm", perm)
        if not np.array_equal(np.sort(perm), np.arange(perm.size)):
            raise ValueError("index map is not a bijection")

    @property
    def size(self) -> int:
        return self.perm.size

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[0] != self.size:
            raise ValueError(f"expected length {self.size}, got {v.shape[0]}")
        return v[self.perm]

    def inverse(self) -> "PermutationMap":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.size)
        return PermutationMap(inv)


def commutation_map(m: int, n: int) -> PermutationMap:
    """Map with apply(vec(A)) = vec(A^T) for every m-by-n matrix A."""
    idx = np.arange(m * n)
    return PermutationMap((idx % n) * m + idx // n)


def vec_kron_map(m: int, n: int, p: int, q: int) -> PermutationMap:
    """Map with apply(kron(vec(A), vec(B))) = vec(kron(A, B)).

    Holds for all A of shape m x n and B of shape p x q; this is the
    permutation I_n (x) K_{q,m} (x) I_p written directly as an index map.
    """
    d = np.arange(m * n * p * q)
    row = d % (m * p)
    col = d // (m * p)
    r_a, r_b = row // p, row % p
    c_a, c_b = col // q, col % q
    return PermutationMap((c_a * m + r_a) * (p * q) + c_b * p + r_b)


def dft_matrix(k: int) -> np.ndarray:
    """Square DFT matrix with entry (a, b) = exp(-2j*pi*a*b/k); F F^H = k I."""
    a = np.arange(k)
    return np.exp(-2j * np.pi * np.outer(a, a) / k)


# Direct decomposition below this size; power iteration with a budget above.
_DIRECT_SVD_MAX_DIM = 512
_POWER_ITER_BUDGET = 1000
_POWER_ITER_RTOL = 1e-10


def nearest_kron_rank1(w: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Dominant singular triplet (u, v, sigma) of w, so u*sigma*v^H is the
    best rank-1 approximation in Frobenius norm and ||u|| = ||v|| = 1.
    """
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2:
        raise ValueError("expected a matrix")
    if max(w.shape) <= _DIRECT_SVD_MAX_DIM:
        u_full, s, vh = np.linalg.svd(w)
        return u_full[:, 0], vh[0].conj(), float(s[0])
    return _power_rank1(w)


def _power_rank1(w: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    scale = np.linalg.norm(w)
    if scale == 0.0:
        u = np.zeros(w.shape[0], dtype=complex)
        v = np.zeros(w.shape[1], dtype=complex)
        u[0] = v[0] = 1.0
        return u, v, 0.0
    v = np.sum(w.conj(), axis=0)
    if np.linalg.norm(v) == 0.0:
        v = np.zeros(w.shape[1], dtype=complex)
        v[0] = 1.0
    v /= np.linalg.norm(v)
    sigma_prev = -1.0
    for _ in range(_POWER_ITER_BUDGET):
        u = w @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            raise ConvergenceError("power iteration stalled on a null direction")
        u /= nu
        v = w.conj().T @ u
        sigma = float(np.linalg.norm(v))
        v /= sigma
        if abs(sigma - sigma_prev) <= _POWER_ITER_RTOL * scale:
            return u, v, sigma
        sigma_prev = sigma
    raise ConvergenceError(
        f"rank-1 power iteration did not converge in {_POWER_ITER_BUDGET} steps"
    )
