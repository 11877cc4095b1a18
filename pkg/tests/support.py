"""Reference constructions used across the test suite.

Everything here is built directly from first principles (shift and clock
matrices, Pauli blocks) so the package's own builders can be checked against
an independent source.
"""

import numpy as np

from covpovm import group as grp
from covpovm import rep as rp

S1 = np.array([[0, 1], [1, 0]], dtype=complex)
S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
S3 = np.array([[1, 0], [0, -1]], dtype=complex)

T_OPERATOR = np.diag([2.0, -1.0, -1.0]).astype(complex)


def wh_matrices(d):
    """Shift/clock displacement matrices W(j, k) = U^j V^k, (j, k) row-major."""
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    mats = []
    for j in range(d):
        pj = np.linalg.matrix_power(shift, j)
        for k in range(d):
            mats.append(pj @ np.linalg.matrix_power(clock, k))
    return mats


def make_wh_rep(d):
    g = grp.build_group(f"product(cyclic:{d},cyclic:{d})")
    return rp.rep_from_matrices(g, wh_matrices(d))


def embed_block(m2):
    """3x3 block matrix diag(1, m2)."""
    u = np.zeros((3, 3), dtype=complex)
    u[0, 0] = 1.0
    u[1:, 1:] = m2
    return u


def pic3_seed(alpha, v):
    """Seed operator (1/8) id + sum_i alpha_i diag-block sigma_i + arrow(v)."""
    m = np.eye(3, dtype=complex) / 8
    for a, s in zip(alpha, (S1, S2, S3)):
        m[1:, 1:] += a * s
    m[0, 1:] = np.conj(v)
    m[1:, 0] = v
    return m


def order8_groups():
    return {
        "cyclic:8": grp.cyclic_group(8),
        "z2xz4": grp.product_group(grp.cyclic_group(2), grp.cyclic_group(4)),
        "z2xz2xz2": grp.build_group("product(cyclic:2,cyclic:2,cyclic:2)"),
        "quaternion": grp.quaternion_group(),
        "dihedral8": grp.dihedral8_group(),
    }


def selfadjoint_basis(space):
    """Selfadjoint HS-orthonormal basis of a *-closed operator subspace."""
    from covpovm.linalg import hs_inner

    cands = []
    for k in space.basis:
        cands.append((k + k.conj().T) / 2)
        cands.append((k - k.conj().T) / 2j)
    gram = np.array([[hs_inner(a, b).real for b in cands] for a in cands])
    vals, vecs = np.linalg.eigh(gram)
    out = []
    for i, v in enumerate(vals):
        if v > 1e-9 * vals[-1]:
            b = sum(vecs[j, i] * cands[j] for j in range(len(cands)))
            out.append(b / np.sqrt(v))
    return out


def povm_with_span(dim, sa_basis):
    """POVM whose effects span exactly the given operator system.

    The system must contain the identity and be spanned by the given
    selfadjoint basis.  Each effect is a slightly tilted multiple of the
    identity, plus one top-up outcome restoring normalization.
    """
    from covpovm.povm import Povm

    m = len(sa_basis)
    outcomes = []
    total = np.zeros((dim, dim), dtype=complex)
    for i, b in enumerate(sa_basis):
        opnorm = float(np.abs(np.linalg.eigvalsh((b + b.conj().T) / 2)).max())
        e = (np.eye(dim) + b / opnorm) / (2 * (m + 1))
        outcomes.append((f"e{i + 1}", e))
        total += e
    outcomes.insert(0, ("e0", np.eye(dim) - total))
    return Povm(dim, outcomes)


def planted_witness_povm(dim, rng):
    """POVM whose span misses exactly one planted pure-state difference.

    Returns the observable together with the planted orthonormal pair; the
    complement of the span is the line through |psi><psi| - |phi><phi|.
    """
    from covpovm import linalg

    z = rng.standard_normal((dim, 2)) + 1j * rng.standard_normal((dim, 2))
    q, _ = np.linalg.qr(z)
    psi, phi = q[:, 0], q[:, 1]
    direction = np.outer(psi, psi.conj()) - np.outer(phi, phi.conj())
    line = linalg.span_orthonormalize([direction])
    span = linalg.orthogonal_complement(line)
    povm = povm_with_span(dim, selfadjoint_basis(span))
    return povm, psi, phi
