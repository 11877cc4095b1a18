"""Projective unitary representations of finite groups.

Covers multiplier extraction and exactness decisions, the conjugation
representation on operator space, explicit duals for the supported groups,
isotypic decompositions via the character projection formula, and the two
cyclicity tests (direct orbit span vs. Schmidt rank per isotypic component).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import group as grp
from .errors import DomainError, InconsistencyError, NotAProjectiveRepError, ShapeError
from .linalg import numerical_rank

MATRIX_ATOL = 1e-9


@dataclass(eq=False)
class ProjectiveRep:
    """Map g -> U(g) with U(gh) = omega(g, h) U(g) U(h).

    ``multiplier`` is the full table omega; an ordinary unitary representation
    has multiplier identically one.  Construct through
    :func:`rep_from_matrices`, which extracts and validates the multiplier.
    """

    group: grp.FiniteGroup
    dim: int
    matrices: list
    multiplier: np.ndarray

    def is_unitary_rep(self, tol: float = 1e-8) -> bool:
        return bool(np.abs(self.multiplier - 1).max() <= tol)

    def character(self) -> np.ndarray:
        return np.array([np.trace(u) for u in self.matrices])


def rep_from_matrices(group: grp.FiniteGroup, matrices, tol: float = MATRIX_ATOL) -> ProjectiveRep:
    """Validate unitaries against the group table and extract the multiplier.

    The scalar omega(g, h) is estimated as <U(g)U(h), U(gh)>_HS / d and the
    residual ||U(gh) - omega U(g)U(h)|| must vanish within tol; anything
    larger means the matrices do not projectively represent the group.
    """
    mats = [np.asarray(u, dtype=complex) for u in matrices]
    n = group.order
    if len(mats) != n:
        raise DomainError(f"need {n} matrices, got {len(mats)}")
    d = mats[0].shape[0]
    eye = np.eye(d)
    for u in mats:
        if u.shape != (d, d):
            raise ShapeError("representation matrices must share one square shape")
        if np.abs(u.conj().T @ u - eye).max() > tol * max(1.0, d):
            raise DomainError("matrix is not unitary")
    if np.abs(mats[group.identity] - eye).max() > tol:
        raise DomainError("identity element must map to the identity matrix")
    omega = np.empty((n, n), dtype=complex)
    for g in range(n):
        for h in range(n):
            prod = mats[g] @ mats[h]
            target = mats[group.op(g, h)]
            om = np.sum(np.conj(prod) * target) / d
            if abs(abs(om) - 1) > 1e-7:
                raise NotAProjectiveRepError(
                    f"multiplier at ({group.names[g]}, {group.names[h]}) is not unimodular"
                )
            om /= abs(om)
            if np.abs(target - om * prod).max() > tol * max(1.0, d):
                raise NotAProjectiveRepError(
                    f"residual at ({group.names[g]}, {group.names[h]}) exceeds tolerance"
                )
            omega[g, h] = om
    e = group.identity
    if np.abs(omega[e, :] - 1).max() > 1e-7 or np.abs(omega[:, e] - 1).max() > 1e-7:
        raise NotAProjectiveRepError("multiplier is not normalized at the identity")
    _check_cocycle(group, omega)
    return ProjectiveRep(group, d, mats, omega)


def _check_cocycle(group: grp.FiniteGroup, omega: np.ndarray, tol: float = 1e-7):
    # omega(g, hk) omega(h, k) = omega(g, h) omega(gh, k), all triples
    mul = group.mul
    ghk = omega[:, mul]            # [g, h, k] -> omega(g, hk)
    hk = omega[None, :, :]         # [g, h, k] -> omega(h, k)
    gh = omega[:, :, None]         # [g, h, k] -> omega(g, h)
    gh_k = omega[mul, :]           # [g, h, k] -> omega(gh, k)
    defect = np.abs(ghk * hk - gh * gh_k).max()
    if defect > tol:
        raise NotAProjectiveRepError(f"cocycle identity fails (defect {defect:.3e})")


def conjugation_rep(rep: ProjectiveRep) -> ProjectiveRep:
    """Ordinary unitary representation L -> U(g) L U(g)* on operator space.

    Operators are vectorized row-major, so the representing matrix is
    kron(U, conj(U)); the multiplier phases cancel and the identity operator
    line is always invariant.
    """
    mats = [np.kron(u, u.conj()) for u in rep.matrices]
    out = rep_from_matrices(rep.group, mats)
    if not out.is_unitary_rep():
        raise InconsistencyError("conjugation representation kept a multiplier")
    return out


def regular_rep(group: grp.FiniteGroup) -> ProjectiveRep:
    """Permutation matrices of left translation on functions over the group."""
    n = group.order
    mats = []
    for g in range(n):
        m = np.zeros((n, n), dtype=complex)
        for gp in range(n):
            m[group.op(g, gp), gp] = 1.0
        mats.append(m)
    return rep_from_matrices(group, mats)


def restrict(rep: ProjectiveRep, columns: np.ndarray) -> ProjectiveRep:
    """Compress onto an invariant subspace given by orthonormal columns.

    Non-invariance surfaces as a unitarity failure during revalidation.
    """
    b = np.asarray(columns, dtype=complex)
    mats = [b.conj().T @ u @ b for u in rep.matrices]
    return rep_from_matrices(rep.group, mats)


def rep_to_json(rep: ProjectiveRep) -> dict:
    return {
        "group": grp.group_to_json(rep.group),
        "dim": rep.dim,
        "matrices": [
            [[[z.real, z.imag] for z in row] for row in u] for u in rep.matrices
        ],
    }


def rep_from_json(data: dict) -> ProjectiveRep:
    g = grp.group_from_json(data["group"])
    mats = [np.array([[complex(re, im) for re, im in row] for row in u]) for u in data["matrices"]]
    return rep_from_matrices(g, mats)


# --- duals -----------------------------------------------------------------

@dataclass(eq=False)
class Irrep:
    """Irreducible unitary representation with its character."""

    group: grp.FiniteGroup
    name: str
    dim: int
    matrices: list
    character: np.ndarray = field(init=False)

    def __post_init__(self):
        g = self.group
        mats = [np.asarray(m, dtype=complex) for m in self.matrices]
        self.matrices = mats
        eye = np.eye(self.dim)
        for m in mats:
            if m.shape != (self.dim, self.dim):
                raise ShapeError("irrep matrix of wrong shape")
            if np.abs(m.conj().T @ m - eye).max() > 1e-9:
                raise DomainError("irrep matrix is not unitary")
        for a in range(g.order):
            for b in range(g.order):
                if np.abs(mats[g.op(a, b)] - mats[a] @ mats[b]).max() > 1e-9:
                    raise DomainError("irrep is not a homomorphism")
        self.character = np.array([np.trace(m) for m in mats])
        norm = np.sum(np.abs(self.character) ** 2) / g.order
        if abs(norm - 1) > 1e-9:
            raise DomainError(f"character norm {norm} != 1: not irreducible")
        # class constancy
        for a in range(g.order):
            for t in range(g.order):
                conj_elem = g.op(g.op(t, a), int(g.inverse[t]))
                if abs(self.character[conj_elem] - self.character[a]) > 1e-9:
                    raise DomainError("character is not a class function")


def _sign_character(group, name, plus_names):
    vals = [1.0 if nm in plus_names else -1.0 for nm in group.names]
    return Irrep(group, name, 1, [np.array([[v]], dtype=complex) for v in vals])


def _parse_product_kind(kind: str):
    body = kind[len("product("):-1]
    return grp._split_product_args(body)


def irreps_of(group: grp.FiniteGroup) -> list:
    """Complete dual of the supported groups.

    Supported kinds: cyclic groups, direct products of supported groups, the
    quaternion group, and the order-8 dihedral group.  Anything else raises
    NotImplementedError; extending the dispatch here is the intended hook.
    """
    kind = group.kind
    if kind is None:
        raise NotImplementedError("group carries no construction tag")
    if kind.startswith("cyclic:"):
        n = group.order
        out = [
            Irrep(group, f"chi{j}", 1,
                  [np.array([[np.exp(2j * np.pi * j * k / n)]]) for k in range(n)])
            for j in range(n)
        ]
    elif kind == "quaternion" or kind == "dihedral8":
        names = group.names
        out = [
            _sign_character(group, "chi0", set(names)),
            _sign_character(group, "chi1", {names[0], names[1], names[2], names[3]}),
            _sign_character(group, "chi2", {names[0], names[1], names[4], names[5]}),
            _sign_character(group, "chi3", {names[0], names[1], names[6], names[7]}),
        ]
        mats = (grp.QUATERNION_MATRICES if kind == "quaternion"
                else grp.DIHEDRAL8_MATRICES)
        out.append(Irrep(group, "pi", 2, list(mats)))
    elif kind.startswith("product(") and kind.endswith(")"):
        parts = _parse_product_kind(kind)
        factors = [grp.build_group(p) for p in parts]
        duals = [irreps_of(f) for f in factors]
        out = []
        for combo in _combo_indices([len(d) for d in duals]):
            chosen = [duals[i][c] for i, c in enumerate(combo)]
            mats = []
            for idx in range(group.order):
                rem, comp_mats = idx, None
                for f, irr in zip(reversed(factors), reversed(chosen)):
                    rem, sub = divmod(rem, f.order)
                    m = irr.matrices[sub]
                    comp_mats = m if comp_mats is None else np.kron(m, comp_mats)
                mats.append(comp_mats)
            name = "x".join(irr.name for irr in chosen)
            dim = int(np.prod([irr.dim for irr in chosen]))
            out.append(Irrep(group, name, dim, mats))
    else:
        raise NotImplementedError(f"no dual construction for kind {kind!r}")
    total = sum(irr.dim ** 2 for irr in out)
    if total != group.order:
        raise InconsistencyError("dual is incomplete: sum of squared dims != order")
    for i, a in enumerate(out):
        for b in out[i + 1:]:
            ip = np.sum(np.conj(a.character) * b.character) / group.order
            if abs(ip) > 1e-9:
                raise InconsistencyError("characters are not orthogonal")
    return out


def _combo_indices(sizes):
    combos = [()]
    for s in sizes:
        combos = [c + (k,) for c in combos for k in range(s)]
    return combos


# --- isotypic decomposition -------------------------------------------------

@dataclass(eq=False)
class IsotypicComponent:
    irrep: Irrep
    multiplicity: int
    projection: np.ndarray


@dataclass(eq=False)
class IsotypicDecomposition:
    rep: ProjectiveRep
    components: list

    def multiplicity_of(self, name: str) -> int:
        for c in self.components:
            if c.irrep.name == name:
                return c.multiplicity
        raise KeyError(name)


def isotypic_decompose(rep: ProjectiveRep, dual=None) -> IsotypicDecomposition:
    """Split an ordinary unitary representation into isotypic blocks.

    Multiplicities come from the character inner product and must land on
    nonnegative integers; projections use the conjugated character in the
    coefficient, P = (dim/#G) sum_g conj(chi(g)) V(g), and are validated to
    be idempotent, mutually orthogonal, and to resolve the identity.
    """
    if not rep.is_unitary_rep():
        raise DomainError("isotypic decomposition needs a trivial multiplier")
    if dual is None:
        dual = irreps_of(rep.group)
    n = rep.group.order
    chi_v = rep.character()
    eye = np.eye(rep.dim)
    components = []
    total = np.zeros((rep.dim, rep.dim), dtype=complex)
    for irr in dual:
        m = np.sum(np.conj(irr.character) * chi_v) / n
        if abs(m.imag) > 1e-6 or abs(m.real - round(m.real)) > 1e-6 or round(m.real) < 0:
            raise InconsistencyError(
                f"multiplicity of {irr.name} is {m}, not a nonnegative integer"
            )
        mult = int(round(m.real))
        p = np.zeros((rep.dim, rep.dim), dtype=complex)
        for g in range(n):
            p += np.conj(irr.character[g]) * rep.matrices[g]
        p *= irr.dim / n
        if np.abs(p @ p - p).max() > 1e-9:
            raise InconsistencyError(f"projection for {irr.name} is not idempotent")
        if numerical_rank(p) != irr.dim * mult:
            raise InconsistencyError(f"projection rank mismatch for {irr.name}")
        total += p
        components.append(IsotypicComponent(irr, mult, p))
    if np.abs(total - eye).max() > 1e-9:
        raise InconsistencyError("projections do not resolve the identity")
    for i, a in enumerate(components):
        for b in components[i + 1:]:
            if np.abs(a.projection @ b.projection).max() > 1e-9:
                raise InconsistencyError("projections are not mutually orthogonal")
    if sum(c.irrep.dim * c.multiplicity for c in components) != rep.dim:
        raise InconsistencyError("multiplicities do not fill the space")
    return IsotypicDecomposition(rep, components)


def is_cyclic_rep(decomp: IsotypicDecomposition) -> bool:
    """Cyclic exactly when no multiplicity exceeds its irrep's dimension."""
    return all(c.multiplicity <= c.irrep.dim for c in decomp.components)


# --- cyclic vectors ----------------------------------------------------------

def _matrix_unit_projection(rep: ProjectiveRep, irr: Irrep, a: int, b: int) -> np.ndarray:
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for g in range(rep.group.order):
        out += np.conj(irr.matrices[g][a, b]) * rep.matrices[g]
    return out * (irr.dim / rep.group.order)


def isotypic_bases(decomp: IsotypicDecomposition) -> list:
    """Per component, an orthonormal basis organized as a dim x mult grid.

    The matrix-unit projections E_ab act like e_ab (x) id on the isotypic
    block.  An orthonormal basis of range(E_00) spans the multiplicity space
    attached to the first irrep coordinate; pushing it through E_a0 fills in
    the other coordinates.  Column a * mult + j of the returned matrix is the
    basis vector at irrep coordinate a, multiplicity coordinate j, so the
    coordinates of any vector reshape to the (dim x mult) Schmidt matrix.
    """
    rep = decomp.rep
    out = []
    for comp in decomp.components:
        m = comp.multiplicity
        if m == 0:
            out.append(None)
            continue
        e00 = _matrix_unit_projection(rep, comp.irrep, 0, 0)
        vals, vecs = np.linalg.eigh((e00 + e00.conj().T) / 2)
        keep = vals > 0.5
        if int(keep.sum()) != m:
            raise InconsistencyError(
                f"rank of E_00 for {comp.irrep.name} is {int(keep.sum())}, expected {m}"
            )
        w = vecs[:, keep]
        cols = [w]
        for a in range(1, comp.irrep.dim):
            cols.append(_matrix_unit_projection(rep, comp.irrep, a, 0) @ w)
        basis = np.concatenate(cols, axis=1)
        if np.abs(basis.conj().T @ basis - np.eye(basis.shape[1])).max() > 1e-7:
            raise InconsistencyError("isotypic basis failed orthonormality")
        out.append(basis)
    return out


def schmidt_ranks(decomp: IsotypicDecomposition, bases, v: np.ndarray) -> list:
    ranks = []
    for comp, basis in zip(decomp.components, bases):
        if basis is None:
            ranks.append(0)
            continue
        coords = basis.conj().T @ v
        c = coords.reshape(comp.irrep.dim, comp.multiplicity)
        ranks.append(numerical_rank(c))
    return ranks


def cyclic_by_span(rep: ProjectiveRep, v: np.ndarray) -> bool:
    cols = np.stack([u @ v for u in rep.matrices], axis=1)
    return numerical_rank(cols) == rep.dim


def cyclic_by_schmidt(decomp: IsotypicDecomposition, bases, v: np.ndarray) -> bool:
    ranks = schmidt_ranks(decomp, bases, v)
    return all(r == c.multiplicity for r, c in zip(ranks, decomp.components))


def is_cyclic_vector(rep: ProjectiveRep, v, decomp=None, bases=None) -> bool:
    """Orbit-span cyclicity test, cross-checked against the Schmidt criterion.

    The direct test asks whether {V(g) v} spans the space; the second route
    demands Schmidt rank equal to multiplicity inside every isotypic block.
    Disagreement between the two is a hard internal error.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (rep.dim,):
        raise ShapeError(f"vector of shape {v.shape} in dimension {rep.dim}")
    direct = cyclic_by_span(rep, v)
    if decomp is None:
        decomp = isotypic_decompose(rep)
    if bases is None:
        bases = isotypic_bases(decomp)
    schmidt = cyclic_by_schmidt(decomp, bases, v)
    if direct != schmidt:
        raise InconsistencyError(
            f"span test says cyclic={direct} but Schmidt test says {schmidt}"
        )
    return direct


# --- joint eigenspaces -------------------------------------------------------

def _eigenspaces(u: np.ndarray, cluster_tol: float = 1e-8) -> list:
    vals, vecs = np.linalg.eig(u)
    n = len(vals)
    used = np.zeros(n, dtype=bool)
    spaces = []
    order = np.argsort(np.angle(vals))
    for idx in order:
        if used[idx]:
            continue
        cluster = [i for i in range(n) if not used[i] and abs(vals[i] - vals[idx]) < cluster_tol]
        for i in cluster:
            used[i] = True
        q, _ = np.linalg.qr(vecs[:, cluster])
        spaces.append(q)
    return spaces


def _subspace_intersection(a: np.ndarray, b: np.ndarray, tol: float = 1e-7):
    m = a.conj().T @ b
    u, s, _ = np.linalg.svd(m)
    idx = np.nonzero(s > 1 - tol)[0]
    if idx.size == 0:
        return None
    return a @ u[:, idx]


def joint_eigenspaces(matrices, tol: float = 1e-7) -> list:
    """Maximal simultaneous eigenspaces of a family of unitaries.

    Returns orthonormal column blocks; every common eigenvector lies in
    exactly one of them.  Empty list when the family admits none.
    """
    mats = [np.asarray(u, dtype=complex) for u in matrices]
    n = mats[0].shape[0]
    spaces = [np.eye(n, dtype=complex)]
    for u in mats:
        refined = []
        eigs = _eigenspaces(u)
        for s in spaces:
            for e in eigs:
                hit = _subspace_intersection(s, e, tol)
                if hit is not None:
                    refined.append(hit)
        spaces = refined
        if not spaces:
            break
    return spaces


# --- exact multipliers -------------------------------------------------------

def _coboundary(group: grp.FiniteGroup, f: np.ndarray) -> np.ndarray:
    return f[:, None] * f[None, :] * np.conj(f[group.mul])


def _verify_phase(group, omega, f, tol=1e-8) -> bool:
    return bool(np.abs(_coboundary(group, f) - omega).max() <= tol)


def _full_order_generator(group: grp.FiniteGroup):
    for a in range(group.order):
        if group.element_order(a) == group.order:
            return a
    return None


def _cyclic_exact_phase(rep: ProjectiveRep, g0: int) -> np.ndarray:
    """Closed-form trivializing phase when the group is cyclic.

    Powers of U(g0) differ from the representing matrices only by scalars
    alpha(k); absorbing the d-th root of alpha(#G) into U(g0) turns the
    power map into an honest representation and yields the phase function.
    """
    group = rep.group
    n = group.order
    d = rep.dim
    u0 = rep.matrices[g0]
    # walk powers of g0, recording alpha(k) with U(g0)^k = alpha(k) U(g0^k)
    alphas = np.empty(n, dtype=complex)
    elems = np.empty(n, dtype=int)
    power = np.eye(d, dtype=complex)
    elem = group.identity
    for k in range(n):
        scal = np.sum(np.conj(rep.matrices[elem]) * power) / d
        alphas[k] = scal / abs(scal)
        elems[k] = elem
        power = u0 @ power
        elem = group.op(g0, elem)
    # the loop leaves power = U(g0)^n = alpha(n) * identity
    scal = np.trace(power) / d
    theta = np.angle(scal / abs(scal))
    f = np.empty(n, dtype=complex)
    for k in range(n):
        f[elems[k]] = np.exp(-1j * k * theta / n) * alphas[k]
    return f


def _solve_congruence(a_rows, b, modulus):
    """Particular solution of A y = b (mod modulus) over the integers.

    Diagonalizes A with integer row and column operations (column ops
    accumulate into V so y = V z) and solves each scalar congruence on the
    diagonal.  Returns None when the system is infeasible.
    """
    a = [list(map(int, row)) for row in a_rows]
    b = [int(x) % modulus for x in b]
    m, n = len(a), len(a[0])
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    rank = 0
    while True:
        pivot = None
        best = None
        for i in range(rank, m):
            row = a[i]
            for j in range(rank, n):
                val = row[j]
                if val and (best is None or abs(val) < best):
                    best = abs(val)
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        a[rank], a[i0] = a[i0], a[rank]
        b[rank], b[i0] = b[i0], b[rank]
        if j0 != rank:
            for row in a:
                row[rank], row[j0] = row[j0], row[rank]
            for row in v:
                row[rank], row[j0] = row[j0], row[rank]
        while True:
            clean = True
            piv = a[rank][rank]
            for i in range(rank + 1, m):
                if a[i][rank]:
                    q = a[i][rank] // piv
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[rank])]
                        b[i] -= q * b[rank]
                    if a[i][rank]:
                        a[rank], a[i] = a[i], a[rank]
                        b[rank], b[i] = b[i], b[rank]
                        clean = False
                        break
            if not clean:
                continue
            piv = a[rank][rank]
            for j in range(rank + 1, n):
                if a[rank][j]:
                    q = a[rank][j] // piv
                    if q:
                        for row in a:
                            row[j] -= q * row[rank]
                        for row in v:
                            row[j] -= q * row[rank]
                    if a[rank][j]:
                        for row in a:
                            row[rank], row[j] = row[j], row[rank]
                        for row in v:
                            row[rank], row[j] = row[j], row[rank]
                        clean = False
                        break
            if clean:
                break
        rank += 1
    z = [0] * n
    for t in range(rank):
        d = a[t][t]
        g = gcd(d, modulus)
        if b[t] % g:
            return None
        md = modulus // g
        z[t] = (b[t] // g) * pow(d // g, -1, md) % md
    for i in range(rank, m):
        if b[i] % modulus:
            return None
    return [sum(v[i][j] * z[j] for j in range(n)) % modulus for i in range(n)]


def is_exact_multiplier(rep: ProjectiveRep):
    """Decide whether the multiplier is a coboundary; return the phase if so.

    Three routes, cheapest first: the closed form for cyclic groups, the
    common-eigenvector construction, and finally an exhaustive congruence
    solve.  For the last route the multiplier is first normalized by the
    cocycle norm N(g) = prod_k omega(g, k), which forces the remaining values
    onto #G-th roots of unity; a trivializing phase, if one exists at all,
    then lives on the (#G)^2 grid and the integer system decides exactly.
    Every returned phase is verified against the multiplier before use.
    """
    group = rep.group
    omega = rep.multiplier
    n = group.order
    if np.abs(omega - 1).max() <= 1e-9:
        return True, np.ones(n, dtype=complex)
    g0 = _full_order_generator(group)
    if g0 is not None:
        f = _cyclic_exact_phase(rep, g0)
        if _verify_phase(group, omega, f):
            return True, f
    lines = joint_eigenspaces(rep.matrices)
    if lines:
        v = lines[0][:, 0]
        c = np.array([v.conj() @ (u @ v) for u in rep.matrices])
        if np.abs(np.abs(c) - 1).max() < 1e-7:
            f = np.conj(c / np.abs(c))
            if _verify_phase(group, omega, f):
                return True, f
    # norm reduction: omega' = omega / coboundary(f0) has values in mu_n
    norm = np.prod(omega, axis=1)
    f0 = np.exp(1j * np.angle(norm) / n)
    omega_p = omega * np.conj(_coboundary(group, f0))
    modulus = n * n
    angles = np.angle(omega_p) / (2 * np.pi) * modulus
    w = np.rint(angles).astype(int)
    if np.abs(angles - w).max() > 1e-5 * modulus:
        raise InconsistencyError("normalized multiplier left the root-of-unity grid")
    rows, rhs = [], []
    for g in range(n):
        for h in range(n):
            row = [0] * n
            row[g] += 1
            row[h] += 1
            row[group.op(g, h)] -= 1
            rows.append(row)
            rhs.append(int(w[g, h]))
    y = _solve_congruence(rows, rhs, modulus)
    if y is None:
        return False, None
    f = f0 * np.exp(2j * np.pi * np.array(y) / modulus)
    if not _verify_phase(group, omega, f):
        raise InconsistencyError("congruence solution failed phase verification")
    return True, f
