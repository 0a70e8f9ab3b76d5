"""Symmetric logarithmic derivative and quantum Fisher information.

Conventions used throughout the package:

* A state family point is the pair (rho, drho) at one parameter value.
* The SLD is solved on the support of rho: in the eigenbasis of rho,
  L[j,k] = 2 <j|drho|k> / (l_j + l_k) whenever l_j + l_k exceeds
  support_tol (default 1e-12 * Tr rho), and 0 otherwise.
* qfi returns Tr[drho L], which on the support equals Tr[rho L^2].
* At parameter values where the support rank of rho changes, the value is
  the support-restricted one; reports flag such points rather than
  interpolating. support_rank exists for that purpose.
"""

import numpy as np

from . import linalg

SUPPORT_TOL_FACTOR = 1e-12
RANK_CUT = 1e-9


class StateFamilyPoint:
    """Density matrix rho and its parameter derivative drho (Hermitian, traceless)."""

    __slots__ = ("rho", "drho")

    def __init__(self, rho, drho, validate=True):
        self.rho = linalg.as_matrix(rho)
        self.drho = linalg.as_matrix(drho)
        if validate:
            self.validate()

    def validate(self):
        if abs(np.trace(self.rho) - 1.0) > 1e-12 * 10:
            raise ValueError("rho is not trace one (trace=%r)" % np.trace(self.rho))
        if abs(np.trace(self.drho)) > 1e-11:
            raise ValueError("drho is not traceless")
        # Hermiticity and the eigenvalue floor; symmetrize rejects beyond tolerance.
        rho = linalg.symmetrize(self.rho, rtol=1e-11)
        linalg.symmetrize(self.drho, rtol=1e-11)
        if np.linalg.eigvalsh(rho).min() < -1e-11:
            raise ValueError("rho has a negative eigenvalue beyond tolerance")


def _support_tol(point, support_tol):
    if support_tol is None:
        return SUPPORT_TOL_FACTOR * float(np.real(np.trace(point.rho)))
    return float(support_tol)


def sld(point, support_tol=None):
    """Support-restricted symmetric logarithmic derivative."""
    tol = _support_tol(point, support_tol)
    dec = linalg.herm_eig(point.rho)
    v = dec.eigenvectors
    d_tilde = v.conj().T @ point.drho @ v
    s = dec.eigenvalues[:, None] + dec.eigenvalues[None, :]
    mask = s > tol
    l_tilde = np.where(mask, 2.0 * d_tilde / np.where(mask, s, 1.0), 0.0)
    l_mat = v @ l_tilde @ v.conj().T
    return (l_mat + l_mat.conj().T) / 2.0


def qfi(point, support_tol=None):
    """Quantum Fisher information Tr[drho L], computed in the rho eigenbasis.

    The eigenbasis form sum 2|<j|drho|k>|^2/(l_j+l_k) is nonnegative term by
    term, so the returned value is >= 0 by construction.
    """
    tol = _support_tol(point, support_tol)
    dec = linalg.herm_eig(point.rho)
    v = dec.eigenvectors
    d_tilde = v.conj().T @ point.drho @ v
    s = dec.eigenvalues[:, None] + dec.eigenvalues[None, :]
    mask = s > tol
    terms = np.where(mask, 2.0 * np.abs(d_tilde) ** 2 / np.where(mask, s, 1.0), 0.0)
    return float(np.real(terms.sum()))


def support_rank(rho, cut=RANK_CUT):
    """Number of eigenvalues above cut; used to flag rank-transition points."""
    w = np.linalg.eigvalsh(linalg.symmetrize(rho, rtol=1e-10))
    return int(np.sum(w > cut))


def generator_matrix(g):
    """Accept a GeneratorSpec-like object (with .matrix) or a plain matrix."""
    mat = getattr(g, "matrix", g)
    return linalg.symmetrize(mat, rtol=1e-10)


def probe_vector(probe):
    """Accept a ProbeState-like object (with .amplitudes) or a plain vector."""
    v = np.asarray(getattr(probe, "amplitudes", probe), dtype=complex).ravel()
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-10:
        raise ValueError("probe is not normalized (norm=%r)" % n)
    return v


def _split_dims(dim):
    if dim == 4:
        return (2, 2)
    if dim == 16:
        return (4, 4)
    raise ValueError("no default bipartition for dimension %d" % dim)


def unitary_family_point(g, probe, alpha, traced=None, dims=None):
    """State family point of psi_alpha = exp(-i alpha G) |probe>.

    traced = None returns the full output; traced = "F" traces out the second
    tensor factor (the inaccessible one) of the output and propagates the
    derivative -i[G, rho] through the same partial trace.
    """
    gmat = generator_matrix(g)
    psi = probe_vector(probe)
    if gmat.shape[0] != psi.size:
        raise ValueError("generator dimension %d does not match probe dimension %d"
                         % (gmat.shape[0], psi.size))
    u = linalg.herm_exp(gmat, alpha)
    phi = u @ psi
    rho = np.outer(phi, phi.conj())
    drho = -1j * (gmat @ rho - rho @ gmat)
    if traced is None or traced == "none":
        return StateFamilyPoint(rho, drho, validate=False)
    if traced != "F":
        raise ValueError("traced must be None or 'F', got %r" % (traced,))
    d_b, d_f = dims if dims is not None else _split_dims(psi.size)
    rho_b = linalg.partial_trace(rho, (d_b, d_f), keep="first")
    drho_b = linalg.partial_trace(drho, (d_b, d_f), keep="first")
    return StateFamilyPoint(rho_b, drho_b, validate=False)


def max_qfi_full(g):
    """Squared spectral spread (l_max - l_min)^2 of the generator."""
    dec = linalg.herm_eig(generator_matrix(g))
    return float((dec.eigenvalues[-1] - dec.eigenvalues[0]) ** 2)


def pure_state_qfi(psi, dpsi):
    """4(<dpsi|dpsi> - |<psi|dpsi>|^2), the pure-state QFI."""
    psi = np.asarray(psi, dtype=complex).ravel()
    dpsi = np.asarray(dpsi, dtype=complex).ravel()
    return float(4.0 * (np.real(dpsi.conj() @ dpsi) - abs(psi.conj() @ dpsi) ** 2))
