import numpy as np
import pytest

from covpovm import group as grp
from covpovm import linalg
from covpovm import rep as rp
from covpovm.errors import DomainError, NotAProjectiveRepError, ShapeError

from support import T_OPERATOR, make_wh_rep, pic3_seed


def entrywise_multiplier(u_g, u_h, u_gh):
    """Oracle: scalar ratio read off at the largest-magnitude entry."""
    prod = u_g @ u_h
    idx = np.unravel_index(np.argmax(np.abs(prod)), prod.shape)
    return u_gh[idx] / prod[idx]


class TestRepFromMatrices:
    def test_regular_rep_is_ordinary(self, quaternion):
        reg = rp.regular_rep(quaternion)
        assert reg.is_unitary_rep()
        assert reg.dim == 8

    def test_quat3_rep_is_ordinary(self, quat3_rep):
        assert quat3_rep.is_unitary_rep()

    def test_wh_multiplier_matches_entrywise_oracle(self, wh_rep_d3):
        rep = wh_rep_d3
        d = 3
        for g in range(9):
            for h in range(9):
                gh = rep.group.op(g, h)
                oracle = entrywise_multiplier(
                    rep.matrices[g], rep.matrices[h], rep.matrices[gh]
                )
                assert abs(rep.multiplier[g, h] - oracle) < 1e-10
        # closed form exp(-2 pi i k j' / d) with element (j, k) at index j*d + k
        for g in range(9):
            for h in range(9):
                j, k = divmod(g, d)
                jp, kp = divmod(h, d)
                expected = np.exp(-2j * np.pi * k * jp / d)
                assert abs(rep.multiplier[g, h] - expected) < 1e-10

    def test_non_unitary_rejected(self, quaternion):
        mats = [np.eye(2, dtype=complex)] * 8
        mats[3] = np.array([[1, 1], [0, 1]], dtype=complex)
        with pytest.raises(DomainError):
            rp.rep_from_matrices(quaternion, mats)

    def test_scrambled_assignment_rejected(self, quat3_rep):
        mats = list(quat3_rep.matrices)
        mats[2], mats[4] = mats[4], mats[2]
        with pytest.raises(NotAProjectiveRepError):
            rp.rep_from_matrices(quat3_rep.group, mats)

    def test_cocycle_identity_over_all_triples(self, wh_rep_d2, wh_rep_d3):
        for rep in (wh_rep_d2, wh_rep_d3):
            om, mul = rep.multiplier, rep.group.mul
            n = rep.group.order
            for g in range(n):
                for h in range(n):
                    for k in range(n):
                        lhs = om[g, mul[h, k]] * om[h, k]
                        rhs = om[g, h] * om[mul[g, h], k]
                        assert abs(lhs - rhs) < 1e-9

    def test_json_round_trip(self, quat3_rep):
        back = rp.rep_from_json(rp.rep_to_json(quat3_rep))
        assert back.dim == 3
        for a, b in zip(back.matrices, quat3_rep.matrices):
            assert np.allclose(a, b)


class TestConjugationRep:
    def test_trivial_rep_stays_trivial(self):
        g = grp.cyclic_group(3)
        rep = rp.rep_from_matrices(g, [np.eye(1, dtype=complex)] * 3)
        tilde = rp.conjugation_rep(rep)
        assert tilde.dim == 1
        assert all(np.allclose(m, 1) for m in tilde.matrices)

    def test_quat3_fixes_identity_and_t(self, quat3_rep):
        tilde = rp.conjugation_rep(quat3_rep)
        for m in tilde.matrices:
            assert np.allclose(m @ np.eye(3).reshape(-1), np.eye(3).reshape(-1))
            assert np.allclose(m @ T_OPERATOR.reshape(-1), T_OPERATOR.reshape(-1))

    def test_character_is_squared_modulus(self, wh_rep_d2):
        tilde = rp.conjugation_rep(wh_rep_d2)
        chi_u = wh_rep_d2.character()
        chi_tilde = tilde.character()
        assert np.allclose(chi_tilde, np.abs(chi_u) ** 2)

    def test_projective_input_gives_ordinary_output(self):
        for d in (2, 3, 4, 5):
            rep = make_wh_rep(d)
            assert not rep.is_unitary_rep()
            assert rp.conjugation_rep(rep).is_unitary_rep()


class TestIrreps:
    def test_quaternion_dual(self, quaternion):
        dual = rp.irreps_of(quaternion)
        assert sorted(irr.dim for irr in dual) == [1, 1, 1, 1, 2]
        assert sum(irr.dim ** 2 for irr in dual) == 8

    def test_cyclic_dual_is_fourier(self):
        g = grp.cyclic_group(5)
        dual = rp.irreps_of(g)
        assert len(dual) == 5
        for j, irr in enumerate(dual):
            for k in range(5):
                assert irr.character[k] == pytest.approx(np.exp(2j * np.pi * j * k / 5))

    def test_table_chi2_distinguishes_q_from_d(self, quaternion, dihedral):
        chi2_q = next(i for i in rp.irreps_of(quaternion) if i.name == "chi2")
        chi2_d = next(i for i in rp.irreps_of(dihedral) if i.name == "chi2")
        # Q: value 1 exactly on {+-1, +-i sigma2}, the elements named +-j
        assert chi2_q.character[quaternion.index_of("j")] == pytest.approx(1)
        assert chi2_q.character[quaternion.index_of("-j")] == pytest.approx(1)
        assert chi2_q.character[quaternion.index_of("i")] == pytest.approx(-1)
        # D: value 1 exactly on {+-1, +-sigma2}
        assert chi2_d.character[dihedral.index_of("s2")] == pytest.approx(1)
        assert chi2_d.character[dihedral.index_of("is1")] == pytest.approx(-1)

    def test_product_dual(self):
        g = grp.build_group("product(cyclic:2,cyclic:4)")
        dual = rp.irreps_of(g)
        assert len(dual) == 8
        assert all(irr.dim == 1 for irr in dual)

    def test_schur_orthogonality(self, quaternion, dihedral):
        for g in (quaternion, dihedral):
            dual = rp.irreps_of(g)
            for a in dual:
                for b in dual:
                    ip = np.sum(np.conj(a.character) * b.character) / g.order
                    expected = 1.0 if a is b else 0.0
                    assert abs(ip - expected) < 1e-9

    def test_untagged_group_unsupported(self, quaternion):
        bare = grp.group_from_json(grp.group_to_json(quaternion))
        with pytest.raises(NotImplementedError):
            rp.irreps_of(bare)


def tperp_columns():
    span_t = linalg.span_orthonormalize([T_OPERATOR])
    comp = linalg.orthogonal_complement(span_t)
    return np.stack([b.reshape(-1) for b in comp.basis], axis=1)


class TestIsotypicDecomposition:
    def test_pauli_conjugation_of_pi(self, quaternion):
        pi = rp.rep_from_matrices(quaternion, list(grp.QUATERNION_MATRICES))
        tilde = rp.conjugation_rep(pi)
        decomp = rp.isotypic_decompose(tilde)
        mults = {c.irrep.name: c.multiplicity for c in decomp.components}
        assert mults == {"chi0": 1, "chi1": 1, "chi2": 1, "chi3": 1, "pi": 0}
        assert rp.is_cyclic_rep(decomp)

    def test_quat3_on_t_perp(self, quat3_rep):
        tilde = rp.conjugation_rep(quat3_rep)
        restricted = rp.restrict(tilde, tperp_columns())
        decomp = rp.isotypic_decompose(restricted)
        mults = {c.irrep.name: c.multiplicity for c in decomp.components}
        assert mults == {"chi0": 1, "chi1": 1, "chi2": 1, "chi3": 1, "pi": 2}
        assert rp.is_cyclic_rep(decomp)

    def test_quat3_on_full_operator_space(self, quat3_rep):
        tilde = rp.conjugation_rep(quat3_rep)
        decomp = rp.isotypic_decompose(tilde)
        assert decomp.multiplicity_of("chi0") == 2
        assert decomp.multiplicity_of("pi") == 2
        assert not rp.is_cyclic_rep(decomp)

    def test_regular_rep_multiplicity_equals_dimension(self, quaternion):
        decomp = rp.isotypic_decompose(rp.regular_rep(quaternion))
        for c in decomp.components:
            assert c.multiplicity == c.irrep.dim
        assert rp.is_cyclic_rep(decomp)

    def test_projections_resolve_identity(self, quat3_rep):
        tilde = rp.conjugation_rep(quat3_rep)
        decomp = rp.isotypic_decompose(tilde)
        total = sum(c.projection for c in decomp.components)
        assert np.abs(total - np.eye(9)).max() < 1e-9
        for c in decomp.components:
            assert np.abs(c.projection @ c.projection - c.projection).max() < 1e-9

    def test_doubled_character_is_not_cyclic(self):
        g = grp.cyclic_group(2)
        mats = [np.eye(2, dtype=complex), -np.eye(2, dtype=complex)]
        rep = rp.rep_from_matrices(g, mats)
        decomp = rp.isotypic_decompose(rep)
        assert not rp.is_cyclic_rep(decomp)

    def test_projective_input_rejected(self, wh_rep_d2):
        with pytest.raises(DomainError):
            rp.isotypic_decompose(wh_rep_d2)


class TestCyclicVectors:
    def test_trivial_rep_nonzero_vector(self):
        g = grp.cyclic_group(1)
        rep = rp.rep_from_matrices(g, [np.eye(1, dtype=complex)])
        assert rp.is_cyclic_vector(rep, np.array([1.0 + 0j]))

    def test_quat3_seed_is_cyclic_in_t_perp(self, quat3_rep):
        tilde = rp.conjugation_rep(quat3_rep)
        cols = tperp_columns()
        restricted = rp.restrict(tilde, cols)
        seed = pic3_seed((1 / 32, 1 / 32, 1 / 32), np.array([1 / 32, 0], dtype=complex))
        v = cols.conj().T @ seed.reshape(-1)
        assert rp.is_cyclic_vector(restricted, v)

    def test_quat3_seed_with_alpha1_zero_is_not_cyclic(self, quat3_rep):
        tilde = rp.conjugation_rep(quat3_rep)
        cols = tperp_columns()
        restricted = rp.restrict(tilde, cols)
        seed = pic3_seed((0.0, 1 / 32, 1 / 32), np.array([1 / 32, 0], dtype=complex))
        v = cols.conj().T @ seed.reshape(-1)
        assert not rp.is_cyclic_vector(restricted, v)

    def test_span_and_schmidt_agree_on_random_vectors(self, quaternion, quat3_rep):
        reps = [
            rp.regular_rep(quaternion),
            rp.conjugation_rep(quat3_rep),
        ]
        rng = np.random.default_rng(42)
        for rep in reps:
            decomp = rp.isotypic_decompose(rep)
            bases = rp.isotypic_bases(decomp)
            for _ in range(30):
                v = rng.standard_normal(rep.dim) + 1j * rng.standard_normal(rep.dim)
                a = rp.cyclic_by_span(rep, v)
                b = rp.cyclic_by_schmidt(decomp, bases, v)
                assert a == b

    def test_dimension_mismatch_rejected(self, quat3_rep):
        with pytest.raises(ShapeError):
            rp.is_cyclic_vector(quat3_rep, np.ones(5))


class TestJointEigenspaces:
    def test_diagonal_family_splits_completely(self):
        mats = [np.diag([1, 1j, -1]).astype(complex), np.diag([1j, 1, -1]).astype(complex)]
        spaces = rp.joint_eigenspaces(mats)
        assert len(spaces) == 3
        assert all(s.shape[1] == 1 for s in spaces)

    def test_irreducible_family_has_none(self, wh_rep_d2):
        assert rp.joint_eigenspaces(wh_rep_d2.matrices) == []

    def test_quat3_has_single_line(self, quat3_rep):
        spaces = rp.joint_eigenspaces(quat3_rep.matrices)
        assert len(spaces) == 1
        line = spaces[0]
        assert line.shape[1] == 1
        assert abs(abs(line[0, 0]) - 1) < 1e-9


class TestExactMultiplier:
    def test_ordinary_rep_trivially_exact(self, quat3_rep):
        ok, f = rp.is_exact_multiplier(quat3_rep)
        assert ok
        assert np.allclose(f, 1)

    def test_twisted_cyclic_rep_is_exact(self):
        rng = np.random.default_rng(9)
        d = 5
        g = grp.cyclic_group(d)
        shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
        phases = np.exp(2j * np.pi * rng.random(d))
        phases[0] = 1.0
        mats = [phases[k] * np.linalg.matrix_power(shift, k) for k in range(d)]
        rep = rp.rep_from_matrices(g, mats)
        assert not rep.is_unitary_rep()
        ok, f = rp.is_exact_multiplier(rep)
        assert ok
        expected = rp._coboundary(g, f)
        assert np.abs(expected - rep.multiplier).max() < 1e-8

    def test_wh_reps_are_not_exact(self):
        for d in (2, 3, 4, 5):
            ok, f = rp.is_exact_multiplier(make_wh_rep(d))
            assert not ok
            assert f is None

    def test_twisted_irreducible_rep_detected_by_congruence_path(self, quaternion):
        # no invariant line, multiplier exact by construction; only the
        # integer solve can certify it
        rng = np.random.default_rng(17)
        phases = np.exp(2j * np.pi * rng.random(8))
        phases[quaternion.identity] = 1.0
        mats = [p * m for p, m in zip(phases, grp.QUATERNION_MATRICES)]
        rep = rp.rep_from_matrices(quaternion, mats)
        assert rp.joint_eigenspaces(rep.matrices) == []
        ok, f = rp.is_exact_multiplier(rep)
        assert ok
        assert np.abs(rp._coboundary(quaternion, f) - rep.multiplier).max() < 1e-8

    def test_returned_phase_untwists_the_rep(self):
        d = 6
        g = grp.cyclic_group(d)
        shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
        mats = [
            np.exp(2j * np.pi * k * k / (d * d)) * np.linalg.matrix_power(shift, k)
            for k in range(d)
        ]
        rep = rp.rep_from_matrices(g, mats)
        assert not rep.is_unitary_rep()
        ok, f = rp.is_exact_multiplier(rep)
        assert ok
        fixed = [f[k] * rep.matrices[k] for k in range(d)]
        assert rp.rep_from_matrices(g, fixed).is_unitary_rep()

    def test_invariant_line_path_returns_verified_phase(self):
        # non-cyclic abelian group, twisted diagonal rep: the closed form
        # does not apply, but every basis line is invariant, so the
        # common-eigenvector route must produce a phase satisfying the
        # coboundary equation on the whole multiplier table
        g = grp.build_group("product(cyclic:2,cyclic:2)")
        rng = np.random.default_rng(21)
        phases = np.exp(2j * np.pi * rng.random(4))
        phases[0] = 1.0
        base = [
            np.diag([1.0, 1.0]).astype(complex),
            np.diag([1.0, -1.0]).astype(complex),
            np.diag([-1.0, 1.0]).astype(complex),
            np.diag([-1.0, -1.0]).astype(complex),
        ]
        rep = rp.rep_from_matrices(g, [p * m for p, m in zip(phases, base)])
        assert rp._full_order_generator(g) is None
        assert len(rp.joint_eigenspaces(rep.matrices)) > 0
        ok, f = rp.is_exact_multiplier(rep)
        assert ok
        assert np.abs(rp._coboundary(g, f) - rep.multiplier).max() < 1e-8
