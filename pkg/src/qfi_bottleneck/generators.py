"""Two-qubit generator constructions and their closed-form QFI values.

The first tensor factor is the accessed output qubit (B side), the second is
the traced one. Pauli coefficients c[i][j] multiply sigma_i (x) sigma_j in
that order.
"""

import numpy as np

from . import linalg
from .linalg import PAULI, SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3


class SingularPointError(ValueError):
    """Closed-form denominator vanished at an isolated parameter point."""


class GeneratorSpec:
    """Hermitian 4x4 generator with its construction metadata.

    form is "pauli" or "tensor"; c holds the Pauli coefficients either way.
    """

    __slots__ = ("matrix", "form", "c", "m_hat", "t1", "n_hat", "t2", "label", "params")

    def __init__(self, matrix, form, c, m_hat=None, t1=None, n_hat=None, t2=None,
                 label="", params=None):
        self.matrix = matrix
        self.form = form
        self.c = c
        self.m_hat = m_hat
        self.t1 = t1
        self.n_hat = n_hat
        self.t2 = t2
        self.label = label
        self.params = dict(params or {})


def pauli_coefficients(matrix):
    """c[i][j] = Tr[(sigma_i kron sigma_j) M] / 4; M must be Hermitian."""
    m = linalg.symmetrize(matrix, rtol=1e-10)
    c = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            c[i, j] = np.real(np.trace(linalg.kron(PAULI[i], PAULI[j]) @ m)) / 4.0
    return c


def make_pauli(c, label="", params=None):
    c = np.asarray(c, dtype=float)
    if c.shape != (4, 4):
        raise ValueError("pauli coefficient array must be 4x4")
    mat = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            if c[i, j] != 0.0:
                mat += c[i, j] * linalg.kron(PAULI[i], PAULI[j])
    return GeneratorSpec(mat, "pauli", c, label=label, params=params)


def normalized_direction(v):
    """Split v into (unit vector, norm). The scale is the caller's to absorb."""
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError("zero direction vector")
    return v / n, n


def _dir_sigma(v):
    return v[0] * SIGMA_1 + v[1] * SIGMA_2 + v[2] * SIGMA_3


def make_tensor(m_hat, t1, n_hat, t2):
    """(m.sigma + t1 I) kron (n.sigma + t2 I); eigenvalues (t1 +- 1)(t2 +- 1).

    Direction vectors must already be unit norm (within 1e-9); use
    normalized_direction to make the absorbed scale explicit.
    """
    m_hat = np.asarray(m_hat, dtype=float)
    n_hat = np.asarray(n_hat, dtype=float)
    for v in (m_hat, n_hat):
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValueError("direction vector is not unit norm: %r" % (v,))
    g1 = _dir_sigma(m_hat) + t1 * SIGMA_0
    g2 = _dir_sigma(n_hat) + t2 * SIGMA_0
    mat = linalg.kron(g1, g2)
    spec = GeneratorSpec(mat, "tensor", pauli_coefficients(mat),
                         m_hat=m_hat, t1=float(t1), n_hat=n_hat, t2=float(t2))
    return spec


def make_case(t1, t2):
    """sigma1 kron sigma1 + t1 I kron sigma3 + t2 sigma3 kron I."""
    mat = linalg.kron(SIGMA_1, SIGMA_1) + t1 * linalg.kron(SIGMA_0, SIGMA_3) \
        + t2 * linalg.kron(SIGMA_3, SIGMA_0)
    return GeneratorSpec(mat, "pauli", pauli_coefficients(mat), label="case",
                         params={"t1": float(t1), "t2": float(t2)})


def make_aligned_fields(t1, t2, t3=0.0):
    """sigma1 kron sigma1 + t1 I kron sigma1 + t2 sigma1 kron I + t3 I kron I.

    All terms commute; t3 shifts the spectrum only and is irrelevant to every
    QFI value (asserted in tests).
    """
    mat = linalg.kron(SIGMA_1, SIGMA_1) + t1 * linalg.kron(SIGMA_0, SIGMA_1) \
        + t2 * linalg.kron(SIGMA_1, SIGMA_0) + t3 * linalg.kron(SIGMA_0, SIGMA_0)
    return GeneratorSpec(mat, "pauli", pauli_coefficients(mat), label="aligned",
                         params={"t1": float(t1), "t2": float(t2), "t3": float(t3)})


def make_diagonal_coupling(t22, t33):
    """sigma1 kron sigma1 + t22 sigma2 kron sigma2 + t33 sigma3 kron sigma3.

    Eigenvalues: -1-t22-t33, 1+t22-t33, 1-t22+t33, -1+t22+t33.
    """
    mat = linalg.kron(SIGMA_1, SIGMA_1) + t22 * linalg.kron(SIGMA_2, SIGMA_2) \
        + t33 * linalg.kron(SIGMA_3, SIGMA_3)
    return GeneratorSpec(mat, "pauli", pauli_coefficients(mat), label="diagonal-coupling",
                         params={"t22": float(t22), "t33": float(t33)})


def _pick_branches(branches, tol=1e-10):
    # Closed half-plane regions overlap at boundaries; applicable branches
    # must agree there, and the first applicable one is returned.
    values = [v for ok, v in branches if ok]
    if not values:
        raise ValueError("piecewise formula: no branch applies")
    for v in values[1:]:
        if abs(v - values[0]) > tol * (1.0 + abs(values[0])):
            raise AssertionError("piecewise branches disagree at a boundary: %r" % (values,))
    return values[0]


def tensor_full_qfi_max(t1, t2):
    """Max full-output QFI for the tensor generator, as a piecewise formula.

    Closed regions: 4(1+|t1|)^2 when |t2| <= min(|t1|, 1), 4(1+|t2|)^2 when
    |t1| <= min(|t2|, 1), 4(1+max)^2 when min <= 1 <= max, 4(|t1|+|t2|)^2
    when both exceed 1.
    """
    a1, a2 = abs(t1), abs(t2)
    return _pick_branches([
        (a2 <= a1 and a2 <= 1.0, 4.0 * (1.0 + a1) ** 2),
        (a1 <= a2 and a1 <= 1.0, 4.0 * (1.0 + a2) ** 2),
        (a1 >= 1.0 and a2 >= 1.0, 4.0 * (a1 + a2) ** 2),
    ])


def tensor_bottleneck_max(t2):
    """Max bottleneck QFI over probes, with the optimal-coefficient descriptor.

    4(t2+1)^2 with |C00| = |C10| = 1/sqrt2 for t2 >= 0, mirrored for t2 <= 0.
    """
    s = 1.0 / np.sqrt(2.0)
    branches = []
    if t2 >= 0.0:
        branches.append((4.0 * (t2 + 1.0) ** 2, {"C00": s, "C10": s}))
    if t2 <= 0.0:
        branches.append((4.0 * (t2 - 1.0) ** 2, {"C01": s, "C11": s}))
    if len(branches) == 2 and abs(branches[0][0] - branches[1][0]) > 1e-10:
        raise AssertionError("bottleneck-max branches disagree at t2=0")
    return branches[0]


def tensor_gap(t1, t2):
    """Gap between full-output and bottleneck maxima for the tensor generator.

    Zero exactly on |t1| <= min(1, |t2|).
    """
    a1, a2 = abs(t1), abs(t2)
    return _pick_branches([
        (a1 <= min(1.0, a2), 0.0),
        (a2 <= a1 and a1 <= 1.0, 4.0 * (a1 - a2) * (2.0 + a1 + a2)),
        (a1 >= 1.0 and a2 >= 1.0, 4.0 * (a1 - 1.0) * (a1 + 2.0 * a2 + 1.0)),
        (a1 >= 1.0 and a2 <= 1.0, 4.0 * (1.0 + a1) ** 2 - 4.0 * (1.0 + a2) ** 2),
    ])


def case_full_qfi_max(t1, t2):
    """4(1 + (|t1| + |t2|)^2) for the case-study generator."""
    return 4.0 * (1.0 + (abs(t1) + abs(t2)) ** 2)


def case_pair_qfi(a, theta, alpha, sign):
    """Bottleneck QFI for probes cos(theta)|00> + i sin(theta)|11> (sign +1)
    or cos(theta)|01> + i sin(theta)|10> (sign -1) of the case generator,
    where a = sqrt(1 + (t1 + t2)^2) resp. sqrt(1 + (t2 - t1)^2).

    The a = 1 value is the removable limit 4. For a > 1 the denominator can
    vanish only at isolated corner points; those raise SingularPointError.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    a = float(a)
    if a < 1.0 - 1e-12:
        raise ValueError("a must be >= 1, got %r" % a)
    if abs(a - 1.0) <= 1e-12:
        return 4.0
    s2t, c2t = np.sin(2.0 * theta), np.cos(2.0 * theta)
    s2aa, c2aa = np.sin(2.0 * a * alpha), np.cos(2.0 * a * alpha)
    num = a * s2t * c2aa - sign * c2t * s2aa
    den_inner = a * s2t * s2aa + sign * c2t * (c2aa + a * a - 1.0)
    den = a ** 4 - den_inner ** 2
    if den < 1e-14:
        raise SingularPointError(
            "denominator %g below 1e-14 at (a=%g, theta=%g, alpha=%g)" % (den, a, theta, alpha))
    return float(4.0 * a * a * num * num / den)


def accessed_trace_vanishes(g):
    """True iff every c0j coefficient vanishes (partial trace over the
    accessed qubit is zero), the sufficiency hypothesis for gap-free
    estimation."""
    c = g.c if isinstance(g, GeneratorSpec) else pauli_coefficients(g)
    return bool(np.max(np.abs(c[0, :])) <= 1e-12)
