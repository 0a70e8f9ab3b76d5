"""Dense complex linear algebra for small Hilbert spaces (dim 2, 4, 16).

Everything here is a pure function of immutable inputs. Eigendecompositions
are made deterministic (canonical degenerate-block bases, fixed phases) so
that fixtures and parallel runs are byte-stable.
"""

import numpy as np

HERM_RTOL = 1e-12

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


def as_matrix(m):
    """Coerce to a square complex ndarray."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (a.shape,))
    return a


def spectral_norm(m):
    return float(np.linalg.norm(as_matrix(m), 2))


def symmetrize(m, rtol=HERM_RTOL):
    """Return (M + M†)/2 after checking M is Hermitian within tolerance.

    Tolerance is relative: ||M - M†||_2 <= rtol * (1 + ||M||_2).
    """
    a = as_matrix(m)
    dev = np.linalg.norm(a - a.conj().T, 2)
    if dev > rtol * (1.0 + np.linalg.norm(a, 2)):
        raise ValueError("matrix is not Hermitian within tolerance (dev=%g)" % dev)
    return (a + a.conj().T) / 2.0


def kron(a, b):
    """Kronecker product, row-major convention: (a kron b)[ik,jl] = a[ij] b[kl]."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dims, keep):
    """Trace out one tensor factor of a (dA*dE) x (dA*dE) matrix.

    keep is "first" or "second". Trace and positivity are preserved.
    """
    a = as_matrix(m)
    d_a, d_e = int(dims[0]), int(dims[1])
    if a.shape[0] != d_a * d_e:
        raise ValueError("dimension mismatch: matrix dim %d != %d*%d" % (a.shape[0], d_a, d_e))
    r = a.reshape(d_a, d_e, d_a, d_e)
    if keep == "first":
        return np.einsum("iaja->ij", r)
    if keep == "second":
        return np.einsum("aiaj->ij", r)
    raise ValueError("keep must be 'first' or 'second', got %r" % (keep,))


class EigenDecomposition:
    """Eigenvalues ascending, orthonormal eigenvector columns, numerical rank.

    rank counts eigenvalues above 1e-9 * max(1, |lambda|_max); it is reported
    so downstream code can flag near-singular inputs.
    """

    __slots__ = ("eigenvalues", "eigenvectors", "rank")

    def __init__(self, eigenvalues, eigenvectors, rank):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        self.rank = rank


def _canonical_block(vecs, tol=1e-12):
    # Deterministic orthonormal basis of span(vecs): Gram-Schmidt of the
    # projections of standard basis vectors, in index order.
    p = vecs @ vecs.conj().T
    d = p.shape[0]
    out = []
    for j in range(d):
        v = p[:, j].copy()
        for u in out:
            v -= u * (u.conj() @ v)
        n = np.linalg.norm(v)
        if n > 1e-8:
            out.append(v / n)
        if len(out) == vecs.shape[1]:
            break
    if len(out) != vecs.shape[1]:  # fall back to the solver's basis
        out = [vecs[:, k] for k in range(vecs.shape[1])]
    return np.column_stack(out)


def _fix_phase(v, tol=1e-10):
    for x in v:
        if abs(x) > tol:
            return v * (abs(x) / x)
    return v


def _order_block(block):
    # Largest absolute first component first, lexicographic tie-break.
    def key(col):
        v = block[:, col]
        parts = []
        for x in v:
            parts.extend((round(x.real, 10), round(x.imag, 10)))
        return (-round(abs(v[0]), 10), tuple(parts))

    order = sorted(range(block.shape[1]), key=key)
    return block[:, order]


def herm_eig(m):
    """Hermitian eigendecomposition with ascending, deterministic ordering."""
    a = symmetrize(m)
    w, v = np.linalg.eigh(a)
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    gap_tol = 1e-12 * (1.0 + np.linalg.norm(a, 2))
    # Re-orthonormalize degenerate blocks into a canonical basis.
    i = 0
    cols = []
    n = len(w)
    while i < n:
        j = i + 1
        while j < n and w[j] - w[j - 1] <= gap_tol:
            j += 1
        if j - i == 1:
            cols.append(_fix_phase(v[:, i]))
        else:
            block = _canonical_block(v[:, i:j])
            block = np.column_stack([_fix_phase(block[:, k]) for k in range(block.shape[1])])
            cols.append(_order_block(block))
        i = j
    vecs = np.column_stack(cols) if cols else v
    rank = int(np.sum(np.abs(w) > 1e-9 * scale))
    return EigenDecomposition(w, vecs, rank)


def herm_exp(g, s):
    """exp(-i s g) for Hermitian g, by spectral decomposition."""
    dec = herm_eig(g)
    phases = np.exp(-1j * float(s) * dec.eigenvalues)
    return (dec.eigenvectors * phases) @ dec.eigenvectors.conj().T


def schatten_norm(m, p):
    """Schatten p-norm for p in {1, 2, inf}."""
    a = as_matrix(m)
    if p == 2:
        return float(np.linalg.norm(a, "fro"))
    sv = np.linalg.svd(a, compute_uv=False)
    if p == 1:
        return float(np.sum(sv))
    if p in (np.inf, "inf", float("inf")):
        return float(sv[0]) if sv.size else 0.0
    raise ValueError("p must be 1, 2 or inf, got %r" % (p,))


def permute_subsystems(m, dims, perm):
    """Reorder tensor factors of a square matrix.

    dims is the list of factor dimensions in the current order; perm[k] gives
    the index, in the current order, of the factor placed at slot k of the
    new order.
    """
    a = as_matrix(m)
    dims = [int(d) for d in dims]
    n = len(dims)
    total = 1
    for d in dims:
        total *= d
    if a.shape[0] != total:
        raise ValueError("dimension mismatch in permute_subsystems")
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of 0..%d" % (n - 1))
    t = a.reshape(dims + dims)
    axes = perm + [n + p for p in perm]
    t = np.transpose(t, axes)
    return np.ascontiguousarray(t.reshape(total, total))


def permutation_matrix(dims, perm):
    """The unitary P with P rho P† = permute_subsystems(rho, dims, perm)."""
    dims = [int(d) for d in dims]
    n = len(dims)
    total = 1
    for d in dims:
        total *= d
    new_dims = [dims[p] for p in perm]
    mat = np.zeros((total, total))
    for idx in range(total):
        # digits of idx in the current factor order
        digits = []
        rem = idx
        for d in reversed(dims):
            digits.append(rem % d)
            rem //= d
        digits.reverse()
        new_digits = [digits[p] for p in perm]
        out = 0
        for d, dig in zip(new_dims, new_digits):
            out = out * d + dig
        mat[out, idx] = 1.0
    return mat
