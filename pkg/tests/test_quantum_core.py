import math

import numpy as np
import pytest

from authsim.errors import ParameterError
from authsim.quantum_core import (
    HermitianOperator,
    PureState,
    UnitaryOperator,
    basis_state,
    density_operator,
    hermitian_from_json_dict,
    max_eigenpair,
    measure_projective,
    operator_to_json_dict,
    overlap,
    partial_trace,
    random_state,
    random_unitary,
    state_from_json_dict,
    state_to_json_dict,
    symmetric_projector,
    tensor,
    unitary_from_json_dict,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class TestConstruction:
    def test_norm_enforced(self):
        with pytest.raises(ParameterError):
            PureState(np.array([1.0, 1.0]))
        PureState(np.array([1.0, 1.0]) / math.sqrt(2))

    def test_dims_consistency(self):
        with pytest.raises(ParameterError):
            PureState(np.array([1.0, 0, 0, 0]), dims=(2, 3))
        s = PureState(np.array([1.0, 0, 0, 0]))
        assert s.dims == (4,)

    def test_unitarity_enforced(self):
        with pytest.raises(ParameterError):
            UnitaryOperator(np.array([[1, 0], [0, 2]], dtype=complex))
        UnitaryOperator(X)

    def test_hermiticity_enforced(self):
        with pytest.raises(ParameterError):
            HermitianOperator(np.array([[0, 1], [0, 0]], dtype=complex))
        HermitianOperator(np.array([[0, 1j], [-1j, 0]]))

    def test_arrays_read_only(self):
        s = basis_state(0, (2,))
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0.0


class TestTensorAndOverlap:
    def test_kets(self):
        s = tensor([basis_state(0, (2,)), basis_state(1, (2,))])
        assert s.dims == (2, 2)
        assert np.allclose(s.amplitudes, basis_state(1, (2, 2)).amplitudes)

    def test_identity_operators(self):
        eye = UnitaryOperator(np.eye(2, dtype=complex))
        assert np.allclose(tensor([eye, eye]).matrix, np.eye(4))

    def test_flip_first_qubit(self):
        gate = tensor([UnitaryOperator(X), UnitaryOperator(np.eye(2, dtype=complex))])
        out = gate.apply(basis_state(0, (2, 2)))
        assert np.allclose(out.amplitudes, basis_state(2, (2, 2)).amplitudes)

    def test_norm_and_unitarity_preserved(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            s = tensor([random_state(2, rng), random_state(3, rng)])
            assert np.linalg.norm(s.amplitudes) == pytest.approx(1.0, abs=1e-10)
            u = tensor([random_unitary(2, rng), random_unitary(3, rng)])
            assert np.abs(u.matrix.conj().T @ u.matrix - np.eye(6)).max() < 1e-10

    def test_mixed_kinds_rejected(self):
        with pytest.raises(ParameterError):
            tensor([basis_state(0, (2,)), UnitaryOperator(X)])
        with pytest.raises(ParameterError):
            tensor([])

    def test_dimension_cap(self):
        big = UnitaryOperator(np.eye(64, dtype=complex))
        assert tensor([big, big]).d == 4096  # exactly at the cap
        with pytest.raises(ParameterError):
            tensor([big, big, UnitaryOperator(np.eye(2, dtype=complex))])

    def test_overlap_values(self):
        v = random_state(4, np.random.default_rng(3))
        assert overlap(v, v) == pytest.approx(1.0, abs=1e-12)
        assert overlap(basis_state(0, (2,)), basis_state(1, (2,))) == 0
        plus = PureState(np.array([1, 1]) / math.sqrt(2), (2,))
        assert overlap(basis_state(0, (2,)), plus) == pytest.approx(1 / math.sqrt(2))

    def test_overlap_mismatch(self):
        with pytest.raises(ParameterError):
            overlap(basis_state(0, (2,)), basis_state(0, (4,)))


class TestPartialTrace:
    def test_singlet_marginal(self):
        amps = np.zeros(4, dtype=complex)
        amps[1], amps[2] = 1 / math.sqrt(2), -1 / math.sqrt(2)
        singlet = PureState(amps, (2, 2))
        reduced = partial_trace(singlet, keep=(0,))
        assert np.allclose(reduced.matrix, np.eye(2) / 2)

    def test_product_state(self):
        rng = np.random.default_rng(5)
        a, b = random_state(2, rng), random_state(3, rng)
        joint = tensor([a, b])
        reduced = partial_trace(joint, keep=(0,))
        assert np.allclose(reduced.matrix, density_operator(a).matrix, atol=1e-12)

    def test_operator_input_and_trace_preserved(self):
        rng = np.random.default_rng(6)
        joint = density_operator(tensor([random_state(2, rng), random_state(2, rng)]))
        reduced = partial_trace(joint, keep=(1,))
        assert reduced.trace == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.eigvalsh(reduced.matrix).min() > -1e-9

    def test_keep_order_preserved(self):
        rng = np.random.default_rng(7)
        a, b, c = random_state(2, rng), random_state(2, rng), random_state(3, rng)
        joint = tensor([a, b, c])
        reduced = partial_trace(joint, keep=(0, 2))
        expected = np.kron(density_operator(a).matrix, density_operator(c).matrix)
        assert reduced.dims == (2, 3)
        assert np.allclose(reduced.matrix, expected, atol=1e-12)

    def test_bad_keep_set(self):
        s = basis_state(0, (2, 2))
        with pytest.raises(ParameterError):
            partial_trace(s, keep=())
        with pytest.raises(ParameterError):
            partial_trace(s, keep=(2,))


class TestMeasureProjective:
    def test_pure_state_in_basis(self):
        rho = density_operator(basis_state(0, (2, 2)))
        basis = [basis_state(j, (2, 2)) for j in range(4)]
        assert np.allclose(measure_projective(rho, basis), [1, 0, 0, 0])

    def test_maximally_mixed(self):
        rho = HermitianOperator(np.eye(4, dtype=complex) / 4, (2, 2))
        basis = [basis_state(j, (2, 2)) for j in range(4)]
        assert np.allclose(measure_projective(rho, basis), [0.25] * 4)

    def test_even_mixture_of_flipped_states(self):
        # (|00><00| + |10><10|)/2 measured in the computational basis
        rho = HermitianOperator(np.diag([0.5, 0, 0.5, 0]).astype(complex), (2, 2))
        basis = [basis_state(j, (2, 2)) for j in range(4)]
        assert np.allclose(measure_projective(rho, basis), [0.5, 0, 0.5, 0])

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(8)
        rho = density_operator(random_state(4, rng))
        gate = random_unitary(4, rng)
        basis = [
            PureState(gate.matrix[:, j], (4,)) for j in range(4)
        ]
        probs = measure_projective(rho, basis)
        assert probs.min() >= 0
        assert probs.sum() == pytest.approx(1.0, abs=1e-9)

    def test_invalid_inputs(self):
        basis = [basis_state(j, (2,)) for j in range(2)]
        with pytest.raises(ParameterError):
            measure_projective(HermitianOperator(np.eye(2, dtype=complex)), basis)  # trace 2
        skewed = [basis_state(0, (2,)), PureState(np.array([1, 1]) / math.sqrt(2))]
        rho = HermitianOperator(np.eye(2, dtype=complex) / 2)
        with pytest.raises(ParameterError):
            measure_projective(rho, skewed)
        with pytest.raises(ParameterError):
            measure_projective(rho, basis[:1])


class TestMaxEigenpair:
    def test_diagonal(self):
        value, vec = max_eigenpair(HermitianOperator(np.diag([0.2, 0.9, 0.5]).astype(complex)))
        assert value == pytest.approx(0.9, abs=1e-12)
        assert np.allclose(np.abs(vec.amplitudes), [0, 1, 0], atol=1e-12)

    def test_degenerate_returns_first_basis_vector(self):
        value, vec = max_eigenpair(HermitianOperator(np.eye(4, dtype=complex)))
        assert value == pytest.approx(1.0)
        assert np.allclose(vec.amplitudes, basis_state(0, (4,)).amplitudes, atol=1e-12)

    def test_residual(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            z = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            a = HermitianOperator((z + z.conj().T) / 2)
            value, vec = max_eigenpair(a)
            residual = np.linalg.norm(a.matrix @ vec.amplitudes - value * vec.amplitudes)
            assert residual < 1e-8

    def test_matches_general_eigensolver(self):
        # independent route: the general eigensolver on the same matrix
        rng = np.random.default_rng(10)
        z = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        a = HermitianOperator((z + z.conj().T) / 2)
        value, _ = max_eigenpair(a)
        general = np.linalg.eig(a.matrix.astype(complex))[0].real.max()
        assert value == pytest.approx(general, abs=1e-9)


class TestSymmetricProjector:
    @pytest.mark.parametrize("d,n,rank", [(2, 2, 3), (2, 3, 4), (3, 2, 6), (2, 4, 5), (3, 3, 10)])
    def test_rank(self, d, n, rank):
        proj = symmetric_projector(d, n)
        eigenvalues = np.linalg.eigvalsh(proj.matrix)
        assert int((eigenvalues > 0.5).sum()) == rank == math.comb(d + n - 1, n)

    def test_idempotent_and_hermitian(self):
        proj = symmetric_projector(3, 3).matrix
        assert np.abs(proj @ proj - proj).max() < 1e-9
        assert np.abs(proj - proj.conj().T).max() < 1e-12

    def test_symmetric_input_is_fixed(self):
        rng = np.random.default_rng(12)
        state = random_state(2, rng)
        copies = tensor([state] * 4)
        proj = symmetric_projector(2, 4)
        assert np.allclose(proj.matrix @ copies.amplitudes, copies.amplitudes, atol=1e-12)

    def test_caps(self):
        with pytest.raises(ParameterError):
            symmetric_projector(2, 9)
        with pytest.raises(ParameterError):
            symmetric_projector(13, 4)  # 13**4 > 4096
        with pytest.raises(ParameterError):
            symmetric_projector(2, 0)


class TestSerialization:
    def test_state_round_trip(self):
        state = random_state((2, 2), np.random.default_rng(13))
        doc = state_to_json_dict(state)
        back = state_from_json_dict(doc)
        assert back.dims == (2, 2)
        assert np.allclose(back.amplitudes, state.amplitudes)

    def test_operator_round_trip(self):
        gate = random_unitary((2, 2), np.random.default_rng(14))
        back = unitary_from_json_dict(operator_to_json_dict(gate))
        assert np.allclose(back.matrix, gate.matrix)
        herm = HermitianOperator(np.diag([0.25, 0.75]).astype(complex))
        back_h = hermitian_from_json_dict(operator_to_json_dict(herm))
        assert np.allclose(back_h.matrix, herm.matrix)

    def test_malformed_documents(self):
        with pytest.raises(ParameterError):
            state_from_json_dict({"dims": [2]})
        with pytest.raises(ParameterError):
            unitary_from_json_dict({"dims": [2]})
