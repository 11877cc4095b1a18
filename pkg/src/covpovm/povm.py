"""POVMs: validation, covariance, and informational-completeness analysis.

An observable is a labelled family of positive operators summing to the
identity.  The operator span S of its effects decides what the observable can
resolve: full span means every state is identified, and pure states are all
identified exactly when the orthogonal complement of S contains no nonzero
selfadjoint operator of rank one or two.  Certification is exact when that
complement has dimension at most one; beyond that a randomized falsifier
searches for a pair of pure states the observable cannot tell apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import group as grp
from . import rep as rp
from .errors import DomainError, InconsistencyError, NotAnObservableError
from .linalg import (
    OperatorSubspace,
    as_matrix,
    hermitian_eig,
    hs_norm,
    numerical_rank,
    orthogonal_complement,
    span_orthonormalize,
)

PSD_TOL = 1e-9

PIC_CERTIFIED = "PIC_certified"
PIC_UNFALSIFIED = "PIC_unfalsified"
NOT_PIC = "not_PIC"


@dataclass(eq=False)
class Povm:
    """Outcome-labelled family of operators on a d-dimensional space."""

    dim: int
    outcomes: list  # (label, op) pairs

    def __post_init__(self):
        cleaned = []
        for label, op in self.outcomes:
            op = as_matrix(op)
            if op.shape != (self.dim, self.dim):
                raise DomainError(f"outcome {label!r} has shape {op.shape}")
            cleaned.append((str(label), op))
        self.outcomes = cleaned

    @property
    def labels(self) -> list:
        return [label for label, _ in self.outcomes]

    @property
    def ops(self) -> list:
        return [op for _, op in self.outcomes]

    def __len__(self) -> int:
        return len(self.outcomes)


@dataclass
class PovmValidation:
    hermiticity_defect: float
    min_eigenvalue: float
    normalization_defect: float
    worst_label: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.hermiticity_defect <= 1e-9
            and self.min_eigenvalue >= -PSD_TOL
            and self.normalization_defect <= 1e-9
        )


def validate(povm: Povm) -> PovmValidation:
    """Hermiticity, positivity, and normalization residuals of a POVM."""
    herm = 0.0
    min_eig = np.inf
    worst = None
    total = np.zeros((povm.dim, povm.dim), dtype=complex)
    for label, op in povm.outcomes:
        defect = hs_norm(op - op.conj().T)
        if defect > herm:
            herm, worst = defect, label
        sym = (op + op.conj().T) / 2
        low = float(np.linalg.eigvalsh(sym)[0])
        if low < min_eig:
            min_eig = low
            if low < -PSD_TOL:
                worst = label
        total += op
    norm_defect = hs_norm(total - np.eye(povm.dim))
    return PovmValidation(herm, min_eig, norm_defect, worst)


def operator_span(povm: Povm) -> OperatorSubspace:
    return span_orthonormalize(povm.ops)


def is_ic(povm: Povm) -> bool:
    """Informationally complete: the effects span the full operator space."""
    return operator_span(povm).dim == povm.dim ** 2


def born_probabilities(povm: Povm, state) -> np.ndarray:
    """Outcome distribution tr(rho M(x)); tiny negative values are clamped."""
    rho = as_matrix(state)
    if rho.shape != (povm.dim, povm.dim):
        raise DomainError("state dimension mismatch")
    if hs_norm(rho - rho.conj().T) > 1e-9:
        raise DomainError("state is not Hermitian")
    if float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]) < -PSD_TOL:
        raise DomainError("state is not positive semidefinite")
    if abs(np.trace(rho) - 1) > 1e-9:
        raise DomainError("state does not have unit trace")
    probs = np.array([np.trace(rho @ op).real for op in povm.ops])
    probs[(probs < 0) & (probs > -PSD_TOL)] = 0.0
    return probs


# --- covariant structure ------------------------------------------------------

def build_covariant(rep: rp.ProjectiveRep, cosets: grp.CosetSpace, seed) -> Povm:
    """Observable M(gH) = U(g) M U(g)* from a seed operator M.

    The seed must be positive and commute with U(h) for every h in the
    subgroup, otherwise outcomes would depend on the coset representative.
    Normalization is NOT automatic: when the translates do not sum to the
    identity the deficit is attached to the raised error.
    """
    seed = as_matrix(seed)
    d = rep.dim
    if seed.shape != (d, d):
        raise DomainError("seed dimension mismatch")
    if hs_norm(seed - seed.conj().T) > 1e-9 * max(1.0, hs_norm(seed)):
        raise DomainError("seed is not Hermitian")
    if float(np.linalg.eigvalsh((seed + seed.conj().T) / 2)[0]) < -PSD_TOL:
        raise DomainError("seed is not positive semidefinite")
    if cosets.parent is not rep.group:
        raise DomainError("coset space belongs to a different group")
    for h in cosets.subgroup.members:
        u = rep.matrices[h]
        if np.abs(seed @ u - u @ seed).max() > 1e-9:
            raise DomainError(
                f"seed does not commute with U({rep.group.names[h]})"
            )
    outcomes = []
    total = np.zeros((d, d), dtype=complex)
    for r in cosets.representatives:
        u = rep.matrices[r]
        op = u @ seed @ u.conj().T
        outcomes.append((rep.group.names[r], op))
        total += op
    deficit = total - np.eye(d)
    if np.abs(deficit).max() > 1e-9:
        raise NotAnObservableError(
            f"translates sum to identity + deficit of norm {hs_norm(deficit):.3e}",
            deficit=deficit,
        )
    povm = Povm(d, outcomes)
    if covariance_defect(povm, rep, cosets) > 1e-9:
        raise InconsistencyError("constructed observable is not covariant")
    return povm


def covariance_defect(povm: Povm, rep: rp.ProjectiveRep, cosets: grp.CosetSpace) -> float:
    """Largest norm of U(g) M(x) U(g)* - M(g.x) over all pairs."""
    if len(povm) != cosets.size:
        raise DomainError("outcome count does not match the coset space")
    ops = povm.ops
    worst = 0.0
    for g in range(rep.group.order):
        u = rep.matrices[g]
        for x in range(cosets.size):
            moved = u @ ops[x] @ u.conj().T
            defect = np.abs(moved - ops[cosets.action[g, x]]).max()
            worst = max(worst, float(defect))
    return worst


def check_covariance(povm: Povm, rep: rp.ProjectiveRep, cosets: grp.CosetSpace,
                     tol: float = 1e-9) -> bool:
    return covariance_defect(povm, rep, cosets) <= tol


# --- abelian obstruction ------------------------------------------------------

@dataclass(eq=False)
class AbelianCertificate:
    """Two pure states no covariant observable for this rep can separate.

    Built from two independent common eigenvectors of the representation.
    For any observable covariant under the representation, both states give
    the uniform outcome distribution.
    """

    vectors: tuple
    phases: tuple

    @property
    def states(self) -> tuple:
        return tuple(np.outer(v, v.conj()) for v in self.vectors)

    def probability_deviation(self, povm: Povm) -> float:
        """Largest |tr(M(x) rho_i) - 1/#outcomes| over outcomes and states."""
        worst = 0.0
        for rho in self.states:
            p = born_probabilities(povm, rho)
            worst = max(worst, float(np.abs(p - 1.0 / len(povm)).max()))
        return worst


def abelian_obstruction_certificate(rep: rp.ProjectiveRep):
    """Two independent common eigenvectors of the representation, if any.

    Returns None when no two exist; a single common eigenline (like the
    distinguished axis of the dimension-3 block constructions) is not enough
    to obstruct anything.
    """
    spaces = rp.joint_eigenspaces(rep.matrices)
    vectors = []
    for s in spaces:
        if s.shape[1] >= 2:
            vectors = [s[:, 0], s[:, 1]]
            break
        vectors.append(s[:, 0])
        if len(vectors) == 2:
            break
    if len(vectors) < 2:
        return None
    phases = tuple(
        np.array([v.conj() @ (u @ v) for u in rep.matrices]) for v in vectors
    )
    return AbelianCertificate(tuple(vectors), phases)


# --- PIC analysis --------------------------------------------------------------

@dataclass
class FalsifierSettings:
    """Budget and determinism knobs for the pure-state pair search."""

    restarts: int = 64
    max_iterations: int = 2000
    rng_seed: int = 0
    # squared projection norm below which a candidate pair counts as a witness
    witness_threshold: float = 1e-12
    # hard floor: stop restarting once a pair this deep is found
    floor: float = 1e-26


@dataclass
class FalsifierResult:
    residual: float  # HS norm of the projection onto the span at the optimum
    psi: np.ndarray
    phi: np.ndarray
    restart: int


@dataclass
class PicVerdict:
    status: str
    complement_dim: int
    witness: tuple | None = None
    residual: float | None = None


def _pair_objective(span: OperatorSubspace, psi: np.ndarray, phi: np.ndarray):
    d = np.outer(psi, psi.conj()) - np.outer(phi, phi.conj())
    g = span.project(d)
    # g is the selfadjoint projection of d, so <g, d> = ||g||^2
    return float(np.sum(np.conj(g) * d).real), g


def _orthonormal_pair(rng, dim):
    z = rng.standard_normal((dim, 2)) + 1j * rng.standard_normal((dim, 2))
    q, _ = np.linalg.qr(z)
    return q[:, 0], q[:, 1]


def _retract(psi, phi):
    psi = psi / np.linalg.norm(psi)
    phi = phi - (psi.conj() @ phi) * psi
    n = np.linalg.norm(phi)
    if n < 1e-12:
        return None
    return psi, phi / n


def _descend(span: OperatorSubspace, psi, phi, settings: FalsifierSettings):
    f, g = _pair_objective(span, psi, phi)
    step = 0.25
    for _ in range(settings.max_iterations):
        if f <= settings.floor:
            break
        g_sym = g + g.conj().T
        grad_psi = g_sym @ psi
        grad_phi = -(g_sym @ phi)
        moved = False
        while step > 1e-18:
            trial = _retract(psi - step * grad_psi, phi - step * grad_phi)
            if trial is not None:
                f2, g2 = _pair_objective(span, *trial)
                if f2 < f:
                    psi, phi = trial
                    f, g = f2, g2
                    step = min(step * 2.0, 1.0)
                    moved = True
                    break
            step *= 0.5
        if not moved:
            break
    return f, psi, phi


def falsify(span: OperatorSubspace, settings: FalsifierSettings | None = None) -> FalsifierResult:
    """Search for a pure-state pair whose difference escapes the span.

    Any nonzero traceless selfadjoint operator of rank at most two is a
    scalar multiple of |psi><psi| - |phi><phi| with psi and phi orthonormal,
    so the search runs over orthonormal pairs; this keeps the degenerate
    psi = phi direction out of the landscape entirely.  Deterministic for a
    fixed seed: restart r draws from rng seeded with (rng_seed, r) and ties
    between equal minima resolve to the earliest restart.
    """
    settings = settings or FalsifierSettings()
    best = None
    for r in range(settings.restarts):
        rng = np.random.default_rng([settings.rng_seed, r])
        psi0, phi0 = _orthonormal_pair(rng, span.dim_h)
        f, psi, phi = _descend(span, psi0, phi0, settings)
        if best is None or f < best[0]:
            best = (f, psi, phi, r)
        if best[0] <= settings.floor:
            break
    f, psi, phi, r = best
    return FalsifierResult(float(np.sqrt(max(f, 0.0))), psi, phi, r)


def _selfadjoint_generator(comp: OperatorSubspace) -> np.ndarray:
    k = comp.basis[0]
    cand_a = (k + k.conj().T) / 2
    cand_b = (k - k.conj().T) / 2j
    h = cand_a if hs_norm(cand_a) >= hs_norm(cand_b) else cand_b
    n = hs_norm(h)
    if n < 1e-9:
        raise InconsistencyError("complement generator has no selfadjoint part")
    return h / n


def check_pic(povm: Povm, settings: FalsifierSettings | None = None) -> PicVerdict:
    """Decide pure-state informational completeness.

    Empty complement certifies immediately.  A one-dimensional complement is
    generated by a single selfadjoint traceless operator; rank three or more
    certifies, rank two yields an explicit witness pair from its spectral
    decomposition.  For larger complements the falsifier searches for a
    witness; failure to find one is reported as unfalsified, not as a proof.
    """
    span = operator_span(povm)
    comp_dim = povm.dim ** 2 - span.dim
    if comp_dim == 0:
        return PicVerdict(PIC_CERTIFIED, 0)
    if comp_dim == 1:
        comp = orthogonal_complement(span)
        h = _selfadjoint_generator(comp)
        if numerical_rank(h) >= 3:
            return PicVerdict(PIC_CERTIFIED, 1)
        vals, vecs = hermitian_eig(h)
        psi, phi = vecs[:, 0], vecs[:, -1]
        d = np.outer(psi, psi.conj()) - np.outer(phi, phi.conj())
        residual = hs_norm(span.project(d))
        return PicVerdict(NOT_PIC, 1, witness=(psi, phi), residual=residual)
    result = falsify(span, settings)
    if result.residual ** 2 < (settings or FalsifierSettings()).witness_threshold:
        return PicVerdict(
            NOT_PIC, comp_dim, witness=(result.psi, result.phi), residual=result.residual
        )
    return PicVerdict(PIC_UNFALSIFIED, comp_dim, residual=result.residual)


# --- JSON interchange -----------------------------------------------------------

def povm_to_json(povm: Povm) -> dict:
    return {
        "dim": povm.dim,
        "outcomes": [
            {
                "label": label,
                "matrix": [[[z.real, z.imag] for z in row] for row in op],
            }
            for label, op in povm.outcomes
        ],
    }


def povm_from_json(data: dict) -> Povm:
    """Parse and validate the interchange schema; invalid operators are named."""
    try:
        dim = int(data["dim"])
        raw = data["outcomes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed POVM document: {exc}") from exc
    outcomes = []
    for pos, entry in enumerate(raw):
        try:
            label = str(entry["label"])
            op = np.array(
                [[complex(re, im) for re, im in row] for row in entry["matrix"]]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"outcome #{pos}: bad encoding ({exc})") from exc
        outcomes.append((label, op))
    povm = Povm(dim, outcomes)
    report = validate(povm)
    if not report.passed:
        raise DomainError(
            f"outcome {report.worst_label!r} fails validation "
            f"(hermiticity {report.hermiticity_defect:.2e}, "
            f"min eigenvalue {report.min_eigenvalue:.2e}, "
            f"normalization {report.normalization_defect:.2e})"
        )
    return povm
