"""Estimation through the partial-trace bottleneck.

Channel application and Kraus extraction, single- and two-copy QFI of the
accessed output, probe-search over samplers, and the empirical gap table.
Heavy sweeps go through vectorized blocks of probes; reductions are
enumeration-ordered so parallel and serial runs pick the same argmax.
"""

import numpy as np

from . import linalg, probes, qfi
from .generators import SingularPointError, case_full_qfi_max, case_pair_qfi
from .qfi import StateFamilyPoint, generator_matrix, probe_vector

DEFAULT_ALPHA_POINTS = 201
RANK_CUT = 1e-9

# Output of U kron U is ordered B1 F1 B2 F2; this permutation moves it to
# B1 B2 F1 F2 so the inaccessible pair can be traced as one factor.
TWO_COPY_PERM = linalg.permutation_matrix((2, 2, 2, 2), (0, 2, 1, 3))


def default_alpha_grid(points=DEFAULT_ALPHA_POINTS):
    return np.linspace(0.0, 2 * np.pi, int(points))


class EstimationReport:
    """Per-alpha bottleneck QFI against the full-output ceiling."""

    __slots__ = ("generator", "alpha_grid", "j_b", "j_bf", "gap", "best_probe",
                 "search_meta", "flags")

    def __init__(self, generator, alpha_grid, j_b, j_bf, gap, best_probe=None,
                 search_meta=None, flags=None):
        self.generator = generator
        self.alpha_grid = alpha_grid
        self.j_b = j_b
        self.j_bf = j_bf
        self.gap = gap
        self.best_probe = best_probe
        self.search_meta = dict(search_meta or {})
        self.flags = list(flags or [])


def apply_channel(u, rho_ae, dims):
    """Accessed-output state Tr_second[U rho U†]."""
    u = linalg.as_matrix(u)
    if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2) > 1e-10:
        raise ValueError("u is not unitary within tolerance")
    rho = linalg.as_matrix(rho_ae)
    if rho.shape != u.shape:
        raise ValueError("state and unitary dimensions differ")
    return linalg.partial_trace(u @ rho @ u.conj().T, dims, keep="first")


def kraus_ops(u, dims):
    """Kraus operators of the channel; K_l maps the full input to the kept
    factor, selecting traced-factor index l after the unitary."""
    u = linalg.as_matrix(u)
    if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2) > 1e-10:
        raise ValueError("u is not unitary within tolerance")
    d_b, d_f = int(dims[0]), int(dims[1])
    if u.shape[0] != d_b * d_f:
        raise ValueError("dims do not match the unitary")
    ops = []
    for ell in range(d_f):
        rows = [b * d_f + ell for b in range(d_b)]
        ops.append(u[rows, :].copy())
    return ops


def bottleneck_qfi(g, probe, alpha):
    """QFI of the accessed output at one parameter value."""
    return qfi.qfi(qfi.unitary_family_point(g, probe, alpha, traced="F"))


def _bloch_qfi_block(rho, drho, support_cut=1e-12):
    # Closed-form qubit QFI |r'|^2 + (r.r')^2/(1-|r|^2); the parallel term is
    # dropped on (numerically) pure states, matching the support convention.
    rx = 2.0 * np.real(rho[:, 0, 1])
    ry = -2.0 * np.imag(rho[:, 0, 1])
    rz = np.real(rho[:, 0, 0] - rho[:, 1, 1])
    sx = 2.0 * np.real(drho[:, 0, 1])
    sy = -2.0 * np.imag(drho[:, 0, 1])
    sz = np.real(drho[:, 0, 0] - drho[:, 1, 1])
    r2 = rx * rx + ry * ry + rz * rz
    s2 = sx * sx + sy * sy + sz * sz
    rs = rx * sx + ry * sy + rz * sz
    gap = 1.0 - r2
    mixed = gap > support_cut
    return s2 + np.where(mixed, rs * rs / np.where(mixed, gap, 1.0), 0.0)


def bottleneck_qfi_block(gmat, block, alpha):
    """Vectorized bottleneck QFI for a block of 2-qubit probes (rows)."""
    u = linalg.herm_exp(gmat, alpha)
    phi = block @ u.T
    m = phi.reshape(-1, 2, 2)
    mh = m.conj().transpose(0, 2, 1)
    rho = m @ mh
    x = (phi @ gmat.T).reshape(-1, 2, 2)
    c = x @ mh
    drho = -1j * (c - c.conj().transpose(0, 2, 1))
    return _bloch_qfi_block(rho, drho)


def full_qfi_block(gmat, block):
    """Vectorized full-output QFI, 4 Var_psi(G); alpha independent."""
    gb = block @ gmat.T
    e1 = np.real(np.einsum("ni,ni->n", block.conj(), gb))
    e2 = np.real(np.einsum("ni,ni->n", gb.conj(), gb))
    return 4.0 * (e2 - e1 * e1)


def bottleneck_qfi_curve(g, probe, alphas):
    """(values, ranks) of the accessed-output QFI over an alpha grid."""
    gmat = generator_matrix(g)
    psi = probe_vector(probe)
    vals = np.empty(len(alphas))
    ranks = np.empty(len(alphas), dtype=int)
    for k, alpha in enumerate(alphas):
        point = qfi.unitary_family_point(gmat, psi, alpha, traced="F")
        vals[k] = qfi.qfi(point)
        ranks[k] = qfi.support_rank(point.rho, RANK_CUT)
    return vals, ranks


def rank_transition_flags(ranks):
    """Indices whose support rank differs from the modal rank of the grid."""
    ranks = np.asarray(ranks)
    modal = int(np.bincount(ranks).argmax())
    return modal, [int(i) for i in np.nonzero(ranks != modal)[0]]


def estimate(g, probe, alphas=None):
    """EstimationReport for one probe over an alpha grid.

    gap = j_bf - j_b holds by construction; rank-transition indices land in
    flags so downstream consumers can exclude support-change points.
    """
    if alphas is None:
        alphas = default_alpha_grid()
    alphas = np.asarray(alphas, dtype=float)
    j_b, ranks = bottleneck_qfi_curve(g, probe, alphas)
    j_bf = qfi.max_qfi_full(generator_matrix(g))
    modal, flagged = rank_transition_flags(ranks)
    return EstimationReport(g, alphas, j_b, j_bf, j_bf - j_b, best_probe=probe,
                            search_meta={"modal_rank": modal},
                            flags=[("rank", int(i), int(ranks[i])) for i in flagged])


def _probe_block(probe_list):
    return np.array([p.amplitudes for p in probe_list])


_GRID_BLOCKS = {}


def _grid_block(n_qubits, n_theta, n_phi):
    # Grid enumeration is probe-only state, independent of the generator, so
    # one block per resolution is shared across searches (read-only).
    key = (int(n_qubits), int(n_theta), int(n_phi))
    if key not in _GRID_BLOCKS:
        block = _probe_block(list(probes.grid_probes(*key)))
        block.setflags(write=False)
        _GRID_BLOCKS[key] = block
    return _GRID_BLOCKS[key]


def collect_probes(g, sampler, budget=None, seed=0, grid=None):
    """Assemble the probe block for one sampler kind.

    candidates = anticommutant eigenvectors (when the anticommutant is
    nonempty) plus extreme-eigenvector superpositions over a phase grid.
    grid enumeration is capped at budget probes, deterministic prefix.
    """
    if sampler == "grid":
        n_theta, n_phi = grid or (4, 8)
        cap = budget if budget is not None else 40000
        block = _grid_block(2, n_theta, n_phi)[:cap]
        meta = {"sampler": "grid", "resolution": (int(n_theta), int(n_phi)),
                "seed": int(seed), "candidate_count": block.shape[0]}
        return block, meta
    if sampler == "haar":
        count = budget if budget is not None else 2048
        block = probes.haar_block(2, int(count), seed)
        return block, {"sampler": "haar", "resolution": int(count), "seed": int(seed),
                       "candidate_count": int(count)}
    if sampler == "separable":
        n_theta, n_phi = grid or probes.REDUCED_GRID
        block = _probe_block(list(probes.separable_probes(n_theta, n_phi)))
        return block, {"sampler": "separable", "resolution": (int(n_theta), int(n_phi)),
                       "seed": int(seed), "candidate_count": block.shape[0]}
    if sampler == "candidates":
        samples = budget if budget is not None else 32
        basis = probes.anticommutant_basis(g)
        cand = []
        if basis.real_dimension > 0:
            cand = probe_candidates_block(g, basis, samples, seed)
        pairs = _probe_block(probes.spectral_pair_probes(g))
        block = np.vstack([np.array(cand).reshape(-1, pairs.shape[1]), pairs]) \
            if len(cand) else pairs
        meta = {"sampler": "candidates", "resolution": int(samples), "seed": int(seed),
                "candidate_count": block.shape[0],
                "anticommutant_dimension": basis.real_dimension}
        return block, meta
    if sampler == "candidates+grid":
        b1, m1 = collect_probes(g, "candidates", None, seed, grid)
        b2, m2 = collect_probes(g, "grid", budget, seed, grid)
        meta = {"sampler": "candidates+grid", "resolution": m2["resolution"],
                "seed": int(seed), "candidate_count": b1.shape[0] + b2.shape[0]}
        return np.vstack([b1, b2]), meta
    raise ValueError("unknown sampler %r" % (sampler,))


def probe_candidates_block(g, basis, samples, seed):
    cand = probes.probe_candidates(g, basis, samples=samples, seed=seed)
    return [p.amplitudes for p in cand]


def optimize_qfi(g, alpha, sampler="candidates", budget=None, seed=0, grid=None,
                 target="bottleneck"):
    """Maximize the (bottleneck or full-output) QFI over sampled probes.

    The reported value is a certified lower bound on the true maximum; ties
    break to the first probe in enumeration order. Raises on empty samplers.
    """
    gmat = generator_matrix(g)
    block, meta = collect_probes(g, sampler, budget, seed, grid)
    if block.size == 0:
        raise ValueError("sampler produced no probes")
    if target == "bottleneck":
        values = bottleneck_qfi_block(gmat, block, alpha)
    elif target == "full":
        values = full_qfi_block(gmat, block)
    else:
        raise ValueError("target must be 'bottleneck' or 'full'")
    best = int(np.argmax(values))
    meta["target"] = target
    meta["alpha"] = float(alpha)
    return {
        "value": float(values[best]),
        "best_probe": probes.ProbeState(2, block[best], provenance={"kind": sampler}),
        "search_meta": meta,
    }


def two_copy_point(g, probe4, alpha):
    """State family point of the accessed pair B1 B2 for two parallel uses."""
    gmat = generator_matrix(g)
    psi = probe_vector(probe4)
    if psi.size != 16:
        raise ValueError("two-copy probe must live on 4 qubits")
    gam = linalg.kron(gmat, np.eye(4)) + linalg.kron(np.eye(4), gmat)
    u = linalg.herm_exp(gmat, alpha)
    phi = linalg.kron(u, u) @ psi
    rho = np.outer(phi, phi.conj())
    drho = -1j * (gam @ rho - rho @ gam)
    perm = TWO_COPY_PERM
    rho = perm @ rho @ perm.T
    drho = perm @ drho @ perm.T
    return StateFamilyPoint(linalg.partial_trace(rho, (4, 4), keep="first"),
                            linalg.partial_trace(drho, (4, 4), keep="first"),
                            validate=False)


def two_copy_bottleneck_qfi(g, probe4, alpha):
    return qfi.qfi(two_copy_point(g, probe4, alpha))


def two_copy_curve(g, probe4, alphas):
    vals = np.empty(len(alphas))
    ranks = np.empty(len(alphas), dtype=int)
    for k, alpha in enumerate(alphas):
        point = two_copy_point(g, probe4, alpha)
        vals[k] = qfi.qfi(point)
        ranks[k] = qfi.support_rank(point.rho, RANK_CUT)
    return vals, ranks


def two_copy_full_qfi_max(g):
    """Squared spectral spread of the two-copy generator G x I + I x G."""
    gmat = generator_matrix(g)
    gam = linalg.kron(gmat, np.eye(4)) + linalg.kron(np.eye(4), gmat)
    return qfi.max_qfi_full(gam)


def contour_gap(theta, tplus_values, alpha_values, sign=+1):
    """Gap table Delta(t_plus, alpha) for the symmetric split t1 = t2 = t/2.

    Rows are (t_plus, alpha, gap, flag); cells where the closed form is
    singular carry flag "singular" and a NaN gap instead of aborting.
    """
    rows = []
    for t_plus in tplus_values:
        t_half = float(t_plus) / 2.0
        ceiling = case_full_qfi_max(t_half, t_half)
        a = float(np.sqrt(1.0 + float(t_plus) ** 2))
        for alpha in alpha_values:
            try:
                j_b = case_pair_qfi(a, theta, float(alpha), sign)
                rows.append((float(t_plus), float(alpha), ceiling - j_b, ""))
            except SingularPointError:
                rows.append((float(t_plus), float(alpha), float("nan"), "singular"))
    return rows


def peak_count(values, height=1e-9):
    """Strict interior local maxima above a floor; used on gap slices."""
    v = np.asarray(values, dtype=float)
    count = 0
    for i in range(1, len(v) - 1):
        if np.isnan(v[i - 1]) or np.isnan(v[i]) or np.isnan(v[i + 1]):
            continue
        if v[i] > v[i - 1] and v[i] > v[i + 1] and v[i] > height:
            count += 1
    return count
