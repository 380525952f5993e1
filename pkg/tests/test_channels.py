import itertools
import numpy as np
import pytest

from equichan.channels import (
    ChoiMatrix,
    ExtremalSpec,
    ExtremalTriple,
    NotSymmetricError,
    apply_channel,
    block_decompose_choi,
    check_symmetries,
    classification_isometry,
    dual_uss_channel,
    enumerate_extremal_triples,
    extremal_choi,
    factored_channel,
    gamma_min,
    irrep_channel,
    purity_spec,
    symmetrization_spec,
    uss_channel,
)
from equichan.staircases import (
    dim_gl_irrep,
    dim_perm_irrep,
    lr_coeff,
    partitions_of,
    staircase,
)
from equichan.verify import haar_unitary

from oracles import symmetrize_brute


def random_state(dim, rng):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


def random_cptp_choi(m, n, d, rng, anc=None):
    """Choi of a random channel from a Gaussian Stinespring isometry."""
    din, dout = d**m, d**n
    anc = din if anc is None else anc
    A = rng.normal(size=(dout * anc, din)) + 1j * rng.normal(size=(dout * anc, din))
    V, _ = np.linalg.qr(A)
    C = np.zeros((din * dout, din * dout), dtype=complex)
    for i in range(din):
        for j in range(din):
            E = np.zeros((din, din), dtype=complex)
            E[i, j] = 1.0
            big = (V @ E @ V.conj().T).reshape(dout, anc, dout, anc)
            C[i * dout : (i + 1) * dout, j * dout : (j + 1) * dout] = np.einsum(
                "aibi->ab", big
            )
    return ChoiMatrix(C, m, n, d)


VEC_I = np.array([1.0, 0, 0, 1.0])
OMEGA = np.outer(VEC_I, VEC_I) / 2


class TestApplyChannel:
    def test_identity_choi(self, rng):
        C = ChoiMatrix(np.outer(VEC_I, VEC_I), 1, 1, 2)
        rho = random_state(2, rng)
        assert np.linalg.norm(apply_channel(C, rho) - rho) < 1e-12

    def test_universal_not_by_hand(self):
        C = ChoiMatrix((2 / 3) * (np.eye(4) - OMEGA), 1, 1, 2)
        rho = np.diag([1.0, 0.0])
        out = apply_channel(C, rho)
        assert np.linalg.norm(out - np.diag([1 / 3, 2 / 3])) < 1e-12

    def test_depolarizing(self, rng):
        C = ChoiMatrix(np.kron(np.eye(2), np.eye(2) / 2), 1, 1, 2)
        rho = random_state(2, rng)
        assert np.linalg.norm(apply_channel(C, rho) - np.eye(2) / 2) < 1e-12

    def test_trace_preserved(self, rng):
        spec = symmetrization_spec(2, 2)
        C = extremal_choi(spec)
        rho = random_state(4, rng)
        assert abs(np.trace(C.apply(rho)) - 1) < 1e-10

    def test_shape_mismatch(self):
        C = ChoiMatrix(np.outer(VEC_I, VEC_I), 1, 1, 2)
        with pytest.raises(ValueError):
            C.apply(np.eye(3))


class TestCheckSymmetries:
    def test_symmetrization_channel_passes(self, rng):
        C = extremal_choi(symmetrization_spec(2, 2))
        rep = check_symmetries(C, trials=10, rng=rng)
        assert rep.max_unitary_residual < 1e-9
        assert rep.max_permutation_residual < 1e-9
        assert rep.passed(1e-8)

    def test_identity_channel(self, rng):
        C = ChoiMatrix(np.outer(VEC_I, VEC_I), 1, 1, 2)
        rep = check_symmetries(C, trials=10, rng=rng)
        assert rep.max_unitary_residual < 1e-12

    def test_negative_control_flagged(self, rng):
        # trace out site 2, emit a fixed state: breaks both symmetries
        sigma = np.diag([1.0, 0.0])

        def phi(rho):
            red = np.einsum("iaja->ij", rho.reshape(2, 2, 2, 2))
            return np.kron(red, sigma)

        C = np.zeros((16, 16), dtype=complex)
        for i in range(4):
            for j in range(4):
                E = np.zeros((4, 4), dtype=complex)
                E[i, j] = 1
                C[i * 4 : (i + 1) * 4, j * 4 : (j + 1) * 4] = phi(E)
        choi = ChoiMatrix(C, 2, 2, 2)
        choi.validate()
        rep = check_symmetries(choi, trials=5, rng=rng)
        assert rep.max_permutation_residual > 0.1
        assert not rep.passed(1e-8)


class TestEnumerateTriples:
    def test_m1_n1_d2(self):
        got = enumerate_extremal_triples(1, 1, 2)
        assert [(t[0], t[1], t[2], t[3]) for t in got] == [
            (staircase(1, 0), staircase(1, 0), staircase(1, -1), 1),
            (staircase(1, 0), staircase(1, 0), staircase(0, 0), 1),
        ]

    def test_n0_edge(self):
        got = enumerate_extremal_triples(2, 0, 2)
        assert got == [
            (staircase(2, 0), staircase(0, 0), staircase(0, -2), 1),
            (staircase(1, 1), staircase(0, 0), staircase(-1, -1), 1),
        ]

    def test_m1_n2_d2(self):
        got = enumerate_extremal_triples(1, 2, 2)
        for lam, mu, gamma, c in got:
            assert mu in partitions_of(2, 2)
            assert c == lr_coeff(lam.dual(), mu, gamma)
            assert c >= 1
        mus = {t[1] for t in got}
        assert mus == set(partitions_of(2, 2))


class TestExtremalChoi:
    def test_identity_triple(self):
        lam = staircase(1, 0)
        spec = ExtremalSpec(
            1, 1, 2, {lam: ExtremalTriple(lam, staircase(0, 0), np.ones(1))}
        )
        C = extremal_choi(spec)
        assert np.linalg.norm(C.matrix - np.outer(VEC_I, VEC_I)) < 1e-10

    def test_universal_not_triple(self):
        lam = staircase(1, 0)
        spec = ExtremalSpec(
            1, 1, 2, {lam: ExtremalTriple(lam, staircase(1, -1), np.ones(1))}
        )
        C = extremal_choi(spec)
        assert np.linalg.norm(C.matrix - (2 / 3) * (np.eye(4) - OMEGA)) < 1e-10

    def test_symmetrization_matches_brute_force(self, rng):
        for m, d in [(2, 2), (3, 2), (2, 3)]:
            C = extremal_choi(symmetrization_spec(m, d))
            rho = random_state(d**m, rng)
            got = C.apply(rho)
            expected = symmetrize_brute(rho, m, d)
            assert np.linalg.norm(got - expected) < 1e-9, (m, d)

    def test_always_cptp(self, rng):
        for m, n, d in [(1, 1, 2), (2, 1, 2), (1, 2, 2)]:
            for lam, mu, gamma, c in enumerate_extremal_triples(m, n, d):
                psi = rng.normal(size=c) + 1j * rng.normal(size=c)
                psi /= np.linalg.norm(psi)
                assignments = {}
                for l2 in partitions_of(m, d):
                    if l2 == lam:
                        assignments[l2] = ExtremalTriple(mu, gamma, psi)
                    else:
                        t = next(
                            x for x in enumerate_extremal_triples(m, n, d) if x[0] == l2
                        )
                        e = np.zeros(t[3])
                        e[0] = 1.0
                        assignments[l2] = ExtremalTriple(t[1], t[2], e)
                spec = ExtremalSpec(m, n, d, assignments)
                C = extremal_choi(spec)
                C.validate()

    def test_invalid_gamma_rejected(self):
        lam = staircase(1, 0)
        with pytest.raises(ValueError):
            ExtremalSpec(
                1, 1, 2, {lam: ExtremalTriple(lam, staircase(2, 0), np.ones(1))}
            )


class TestBlockDecompose:
    def test_identity_channel_blocks(self):
        C = ChoiMatrix(np.outer(VEC_I, VEC_I), 1, 1, 2)
        M = block_decompose_choi(C)
        for (gamma, lam_dual, mu), mat in M.items():
            if gamma.is_empty:
                assert abs(mat[0, 0] - 1) < 1e-10
            else:
                assert abs(mat[0, 0]) < 1e-10

    def test_extremal_round_trip(self, rng):
        lam = staircase(1, 0)
        psi = np.ones(1)
        spec = ExtremalSpec(1, 1, 2, {lam: ExtremalTriple(lam, staircase(1, -1), psi)})
        C = extremal_choi(spec)
        M = block_decompose_choi(C)
        got = M[(staircase(1, -1), lam.dual(), lam)]
        assert np.linalg.norm(got - np.outer(psi, psi.conj())) < 1e-10

    def test_mixture_linearity(self):
        lam = staircase(1, 0)
        s1 = ExtremalSpec(1, 1, 2, {lam: ExtremalTriple(lam, staircase(0, 0), np.ones(1))})
        s2 = ExtremalSpec(1, 1, 2, {lam: ExtremalTriple(lam, staircase(1, -1), np.ones(1))})
        C = ChoiMatrix(
            0.25 * extremal_choi(s1).matrix + 0.75 * extremal_choi(s2).matrix, 1, 1, 2
        )
        M = block_decompose_choi(C)
        assert abs(M[(staircase(0, 0), staircase(0, -1), lam)][0, 0] - 0.25) < 1e-10
        assert abs(M[(staircase(1, -1), staircase(0, -1), lam)][0, 0] - 0.75) < 1e-10

    def test_non_symmetric_rejected(self, rng):
        C = random_cptp_choi(1, 1, 2, rng)
        with pytest.raises(NotSymmetricError):
            block_decompose_choi(C)

    def test_twirled_random_channel(self, rng):
        # finite unitary twirl + exact permutation twirl of a random channel
        m, n, d = 2, 1, 2
        C = random_cptp_choi(m, n, d, rng).matrix
        perms_in = list(itertools.permutations(range(m)))
        perms_out = list(itertools.permutations(range(n)))
        from equichan.transforms import permutation_operator

        acc = np.zeros_like(C)
        for si in perms_in:
            for so in perms_out:
                P = np.kron(
                    permutation_operator(si, m, d), permutation_operator(so, n, d)
                )
                acc += P @ C @ P.conj().T
        C = acc / (len(perms_in) * len(perms_out))
        acc = np.zeros_like(C)
        trials = 200
        for _ in range(trials):
            U = haar_unitary(d, rng)
            W = np.kron(np.kron(U.conj(), U.conj()), U)
            acc += W @ C @ W.conj().T
        C = acc / trials
        choi = ChoiMatrix(C, m, n, d)
        M = block_decompose_choi(choi, tol=0.5)
        per_lam: dict = {}
        for (gamma, lam_dual, mu), mat in M.items():
            evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
            assert evals.min() > -1e-9
            per_lam[lam_dual] = per_lam.get(lam_dual, 0.0) + np.trace(mat).real
        for lam_dual, total in per_lam.items():
            assert abs(total - 1.0) < 1e-3, (str(lam_dual), total)


class TestUssChannels:
    def test_singlet_lands_in_antisymmetric_block(self):
        ch = uss_channel(2, 0, 2)
        singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        out = ch.apply(np.outer(singlet, singlet))
        blk = next(b for b in ch.layout if b.label == staircase(1, 1))
        assert abs(out[blk.offset, blk.offset] - 1.0) < 1e-12
        assert abs(np.trace(out) - 1.0) < 1e-12

    def test_product_state_lands_in_symmetric_block(self):
        from equichan.realize import canonical_realization

        ch = uss_channel(2, 0, 2)
        v = np.zeros(4)
        v[0] = 1.0
        out = ch.apply(np.outer(v, v))
        blk = next(b for b in ch.layout if b.label == staircase(2, 0))
        sub = out[blk.offset : blk.offset + blk.size, blk.offset : blk.offset + blk.size]
        assert abs(np.trace(sub) - 1.0) < 1e-12
        # the block state is the canonical-coordinate image of |00><00|
        V = canonical_realization(staircase(2, 0)).embedding
        expected = V.conj().T @ np.outer(v, v) @ V
        assert np.linalg.norm(sub - expected) < 1e-10

    def test_projection_property_on_invariant_states(self, rng):
        # dual o uss is the identity on permutation-averaged states
        for m, d in [(2, 2), (3, 2)]:
            ch = uss_channel(m, 0, d)
            dual = dual_uss_channel(m, 0, d)
            rho = symmetrize_brute(random_state(d**m, rng), m, d)
            back = dual.apply(ch.apply(rho))
            assert np.linalg.norm(back - rho) < 1e-10

    def test_werner_states_are_fixed_points(self):
        # p * (sym projector)/3 + (1-p) * antisym projector, two qubits
        from oracles import symmetric_projector

        ch = uss_channel(2, 0, 2)
        dual = dual_uss_channel(2, 0, 2)
        P = symmetric_projector(2, 2)
        for p in (0.0, 0.3, 1.0):
            rho = p * P / 3 + (1 - p) * (np.eye(4) - P)
            back = dual.apply(ch.apply(rho.astype(complex)))
            assert np.linalg.norm(back - rho) < 1e-10

    def test_projection_property_general(self, rng):
        # on arbitrary states, dual o uss is the permutation average
        m, d = 3, 2
        ch = uss_channel(m, 0, d)
        dual = dual_uss_channel(m, 0, d)
        rho = random_state(d**m, rng)
        back = dual.apply(ch.apply(rho))
        assert np.linalg.norm(back - symmetrize_brute(rho, m, d)) < 1e-10

    def test_adjoint_duality_exact(self, rng):
        # tr[Phi(A)^dag B] = tr[A^dag Phi*(B)] with the unnormalized adjoint,
        # including a case where some path space has dimension > 1
        for m, d in [(2, 2), (3, 2)]:
            ch = uss_channel(m, 0, d)
            adj = dual_uss_channel(m, 0, d, weighting="adjoint")
            for _ in range(10):
                A = rng.normal(size=(ch.in_dim,) * 2) + 1j * rng.normal(size=(ch.in_dim,) * 2)
                B = rng.normal(size=(ch.out_dim,) * 2) + 1j * rng.normal(size=(ch.out_dim,) * 2)
                lhs = np.trace(ch.apply(A).conj().T @ B)
                rhs = np.trace(A.conj().T @ adj.apply(B))
                assert abs(lhs - rhs) < 1e-10

    def test_mixed_weighting_is_trace_preserving(self, rng):
        dual = dual_uss_channel(3, 0, 2)
        rho = random_state(dual.in_dim, rng)
        assert abs(np.trace(dual.apply(rho)) - 1.0) < 1e-10
        # and the unnormalized adjoint is not, on multi-path sectors
        adj = dual_uss_channel(3, 0, 2, weighting="adjoint")
        assert abs(np.trace(adj.apply(rho)) - 1.0) > 0.1

    def test_mixed_schur_sampling(self, rng):
        ch = uss_channel(1, 1, 2)
        rho = random_state(4, rng)
        out = ch.apply(rho)
        assert abs(np.trace(out) - 1.0) < 1e-10
        assert set(b.label for b in ch.layout) == {staircase(1, -1), staircase(0, 0)}
        # the mixed reverse channel is trace preserving as well
        dual = dual_uss_channel(1, 1, 2)
        back = dual.apply(out)
        assert abs(np.trace(back) - 1.0) < 1e-10
        assert back.shape == (4, 4)


class TestIrrepChannel:
    def test_identity_when_gamma_trivial(self, rng):
        from equichan.staircases import empty_staircase

        for lam in [staircase(2, 0), staircase(2, 1), staircase(2, 1, 0)]:
            ch = irrep_channel(lam, lam, empty_staircase(lam.d))
            X = rng.normal(size=(ch.in_dim,) * 2)
            assert np.linalg.norm(ch.apply(X) - X) < 1e-10

    def test_cptp_and_equivariant(self, rng):
        from equichan.realize import canonical_realization

        lam, mu, gamma = staircase(2, 0), staircase(1, 1), staircase(1, -1)
        if lr_coeff(lam.dual(), mu, gamma) < 1:
            pytest.skip("triple not admissible")
        ch = irrep_channel(lam, mu, gamma)
        rho = random_state(ch.in_dim, rng)
        out = ch.apply(rho)
        assert abs(np.trace(out) - 1.0) < 1e-10
        rl = canonical_realization(lam)
        rm = canonical_realization(mu)
        for _ in range(5):
            U = haar_unitary(2, rng)
            left = ch.apply(rl.group_element(U) @ rho @ rl.group_element(U).conj().T)
            right = rm.group_element(U) @ out @ rm.group_element(U).conj().T
            assert np.linalg.norm(left - right) < 1e-8

    def test_three_forms_agree(self, rng):
        cases = [
            (staircase(2, 0), staircase(2, 0), staircase(1, -1)),
            (staircase(1, 0), staircase(2, 0), staircase(1, 0)),
            (staircase(2, 1), staircase(1, 0), staircase(0, -2)),
            (staircase(2, 1, 0), staircase(1, 1, 1), staircase(1, 1, -2)),
        ]
        for lam, mu, gamma in cases:
            c = lr_coeff(lam.dual(), mu, gamma)
            if c < 1:
                continue
            psi = rng.normal(size=c) + 1j * rng.normal(size=c)
            psi /= np.linalg.norm(psi)
            outs = []
            X = rng.normal(size=(dim_gl_irrep(lam),) * 2) + 1j * rng.normal(
                size=(dim_gl_irrep(lam),) * 2
            )
            for form in ("choi", "embed-trace", "sandwich"):
                ch = irrep_channel(lam, mu, gamma, psi, form=form)
                outs.append(ch.apply(X))
            assert np.linalg.norm(outs[0] - outs[1]) < 1e-8
            assert np.linalg.norm(outs[0] - outs[2]) < 1e-8

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            irrep_channel(staircase(1, 0), staircase(1, 0), staircase(2, 0))
        with pytest.raises(ValueError):
            irrep_channel(
                staircase(1, 0), staircase(1, 0), staircase(0, 0), psi=np.array([2.0])
            )


class TestFactoredChannel:
    def test_identity_spec(self):
        lam = staircase(1, 0)
        spec = ExtremalSpec(1, 1, 2, {lam: ExtremalTriple(lam, staircase(0, 0), np.ones(1))})
        F = factored_channel(spec)
        assert np.linalg.norm(F.matrix - np.outer(VEC_I, VEC_I)) < 1e-10

    def test_symmetrization_three_way(self, rng):
        spec = symmetrization_spec(2, 2)
        F = factored_channel(spec)
        E = extremal_choi(spec)
        assert np.linalg.norm(F.matrix - E.matrix) < 1e-10
        rho = random_state(4, rng)
        assert np.linalg.norm(F.apply(rho) - symmetrize_brute(rho, 2, 2)) < 1e-10

    def test_exhaustive_sweep_2_1_2(self, rng):
        m, n, d = 2, 1, 2
        triples = enumerate_extremal_triples(m, n, d)
        by_lam: dict = {}
        for lam, mu, gamma, c in triples:
            by_lam.setdefault(lam, []).append((mu, gamma, c))
        worst = 0.0
        for choice in itertools.product(*(by_lam[l] for l in partitions_of(m, d))):
            assignments = {}
            for lam, (mu, gamma, c) in zip(partitions_of(m, d), choice):
                e = np.zeros(c)
                e[0] = 1.0
                assignments[lam] = ExtremalTriple(mu, gamma, e)
            spec = ExtremalSpec(m, n, d, assignments)
            resid = np.linalg.norm(
                factored_channel(spec).matrix - extremal_choi(spec).matrix
            )
            worst = max(worst, resid)
        assert worst < 1e-8


class TestMultiplicityTwoSpec:
    def test_factored_matches_extremal_with_random_psi(self, rng):
        # the first label triple with a two-dimensional multiplicity space
        # appears at m = n = 3, d = 3; a random complex psi exercises the
        # multiplicity-slot correspondence between the two constructions
        m = n = d = 3
        triples = enumerate_extremal_triples(m, n, d)
        lam0, mu0, gamma0, c = next(t for t in triples if t[3] >= 2)
        assert c == 2
        psi = rng.normal(size=c) + 1j * rng.normal(size=c)
        psi /= np.linalg.norm(psi)
        assignments = {}
        for lam in partitions_of(m, d):
            if lam == lam0:
                assignments[lam] = ExtremalTriple(mu0, gamma0, psi)
            else:
                t = next(x for x in triples if x[0] == lam)
                e = np.zeros(t[3])
                e[0] = 1.0
                assignments[lam] = ExtremalTriple(t[1], t[2], e)
        spec = ExtremalSpec(m, n, d, assignments)
        E = extremal_choi(spec)
        E.validate()
        F = factored_channel(spec)
        assert np.linalg.norm(F.matrix - E.matrix) < 1e-8
        assert check_symmetries(E, trials=5, rng=rng).passed(1e-8)


class TestEdgeCases:
    def test_spec_with_trivial_output_space(self, rng):
        # n = 0: the only output label is empty and the channel is the trace
        spec_triples = enumerate_extremal_triples(2, 0, 2)
        assignments = {
            lam: ExtremalTriple(mu, gamma, np.ones(1))
            for lam, mu, gamma, c in spec_triples
        }
        spec = ExtremalSpec(2, 0, 2, assignments)
        C = extremal_choi(spec)
        C.validate()
        rho = random_state(4, rng)
        out = C.apply(rho)
        assert out.shape == (1, 1)
        assert abs(out[0, 0] - 1.0) < 1e-10

    def test_psi_length_mismatch_rejected(self):
        lam = staircase(1, 0)
        with pytest.raises(ValueError, match="multiplicity"):
            ExtremalSpec(
                1,
                1,
                2,
                {lam: ExtremalTriple(lam, staircase(0, 0), np.array([1.0, 0.0]))},
            )

    def test_psi_not_normalized_rejected(self):
        lam = staircase(1, 0)
        with pytest.raises(ValueError, match="normalized"):
            ExtremalSpec(
                1, 1, 2, {lam: ExtremalTriple(lam, staircase(0, 0), np.array([2.0]))}
            )

    def test_missing_label_rejected(self):
        lam = staircase(2, 0)
        with pytest.raises(ValueError, match="every input label"):
            ExtremalSpec(
                2, 2, 2, {lam: ExtremalTriple(lam, staircase(0, 0), np.ones(1))}
            )


class TestGammaMin:
    def test_examples(self):
        assert gamma_min(staircase(4, 2, 1)) == staircase(3, 2, 1)
        assert gamma_min(staircase(2, 2)) == staircase(2, 1)
        assert gamma_min(staircase(3, 0)) == staircase(2, 0)

    def test_purity_spec_valid(self):
        spec = purity_spec(3, 2)
        for lam, t in spec.assignments.items():
            assert t.gamma == gamma_min(lam).dual()
