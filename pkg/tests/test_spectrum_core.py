import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kgnc.errors import DomainError
from kgnc.spectrum_core import (
    PhysicalParams,
    QuantumNumbers,
    RadialState,
    effective_quantities,
    energy_unperturbed,
    equation_residual,
    make_radial_state,
    r_of_rho,
    rho_of_r,
    varsigma,
)

STATES = [(n, ell) for n in range(1, 5) for ell in range(n)]


def params(za=0.5, M=1.0, mode="rederived", theta=0.0):
    return PhysicalParams(M, za, theta, mode)


class TestParams:
    @pytest.mark.parametrize(
        "kw", [dict(M=0.0), dict(M=-1.0), dict(z_alpha=0.0), dict(theta=-1e-3), dict(mode="other")]
    )
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            PhysicalParams(**kw)

    @pytest.mark.parametrize("n, ell, m", [(1, 1, 0), (2, 2, 0), (0, 0, 0), (3, 1, 2), (3, -1, 0)])
    def test_invalid_quantum_numbers(self, n, ell, m):
        with pytest.raises(DomainError):
            QuantumNumbers(n, ell, m)


class TestEnergy:
    def test_paper_small_coupling_limit(self):
        for n, ell in STATES:
            e = energy_unperturbed(params(1e-12, mode="paper"), QuantumNumbers(n, ell))
            assert e == pytest.approx(-1.0, abs=1e-12)

    def test_rederived_small_coupling_limit(self):
        for n, ell in STATES:
            e = energy_unperturbed(params(1e-12), QuantumNumbers(n, ell))
            assert e == pytest.approx(1.0, abs=1e-12)

    def test_rederived_ground_state(self):
        # Za sqrt((1+E)/(1-E)) = 1 with Za = 1/2  =>  E = 3/5
        assert energy_unperturbed(params(0.5), QuantumNumbers(1, 0)) == pytest.approx(0.6, rel=1e-15)

    def test_rederived_solves_quantization_condition(self):
        for za in (0.1, 0.3, 0.5, 0.9):
            for n, ell in STATES:
                p = params(za, M=1.7)
                e = energy_unperturbed(p, QuantumNumbers(n, ell))
                assert varsigma(p, e).rederived == pytest.approx(n, rel=1e-13)

    def test_rederived_independent_of_ell(self):
        p = params(0.3)
        assert len({energy_unperturbed(p, QuantumNumbers(4, ell)) for ell in range(4)}) == 1

    def test_paper_formula_transcription(self):
        p = params(0.3, M=2.0, mode="paper")
        za, M, k = 0.3, 2.0, 3 - 1
        expected = M * (za**2 - k**2 * M**2) / (za**2 + k**2 * M**2)
        assert energy_unperturbed(p, QuantumNumbers(3, 1)) == expected

    def test_monotone_in_principal_number(self):
        for za in (0.1, 0.3, 0.5):
            es = [energy_unperturbed(params(za), QuantumNumbers(n, 0)) for n in range(1, 9)]
            assert all(b > a for a, b in zip(es, es[1:]))

    @given(za=st.floats(0.01, 0.99), M=st.floats(0.1, 10.0), n=st.integers(1, 8), data=st.data())
    def test_bound_bracket(self, za, M, n, data):
        ell = data.draw(st.integers(0, n - 1))
        for mode in ("paper", "rederived"):
            e = energy_unperturbed(PhysicalParams(M, za, 0.0, mode), QuantumNumbers(n, ell))
            assert abs(e) < M


class TestVarsigma:
    def test_zero_energy(self):
        v = varsigma(params(0.4, M=2.0), 0.0)
        assert v.paper == pytest.approx(0.2)
        assert v.rederived == pytest.approx(0.4)

    def test_unit_mass_modes_coincide(self):
        for e in (-0.5, 0.0, 0.3, 0.9):
            v = varsigma(params(0.5), e)
            assert v.paper == v.rederived

    def test_documented_mass_discrepancy(self):
        v = varsigma(params(0.5, M=2.0), 1.0)
        assert v.paper == pytest.approx(0.25 * math.sqrt(3), rel=1e-15)
        assert v.rederived == pytest.approx(0.5 * math.sqrt(3), rel=1e-15)
        assert v.rederived / v.paper == pytest.approx(2.0, rel=1e-15)

    @pytest.mark.parametrize("e", [1.0, 1.5, -1.5])
    def test_domain(self, e):
        with pytest.raises(DomainError):
            varsigma(params(0.5), e)


class TestEffectiveQuantities:
    def test_e_eff(self):
        e_eff, _ = effective_quantities(params(0.5), 0.0, 0)
        assert e_eff == 1.0

    def test_v_eff_vanishes(self):
        _, v = effective_quantities(params(1e-300), 0.3, 0)
        assert np.all(np.abs(v(np.linspace(0.1, 5, 9))) < 1e-290)

    def test_v_eff_arithmetic(self):
        _, v = effective_quantities(params(0.5), 0.6, 1)
        assert v(1.0) == pytest.approx(-1.6 + 2.0, rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            effective_quantities(params(0.5), 1.0, 0)


class TestRhoMapping:
    def test_examples(self):
        assert rho_of_r(1.0, 1.0) == 2.0
        assert rho_of_r(0.5, 4.0) == 2.0

    @given(r=st.floats(1e-6, 1e6), e=st.floats(1e-6, 1e2))
    def test_round_trip(self, r, e):
        assert r_of_rho(rho_of_r(r, e), e) == pytest.approx(r, rel=1e-14)

    @pytest.mark.parametrize("r, e", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_domain(self, r, e):
        with pytest.raises(DomainError):
            rho_of_r(r, e)


class TestRadialState:
    def test_ground_state_shape(self):
        s = make_radial_state(params(), QuantumNumbers(1, 0))
        rho = np.linspace(0.1, 20, 50)
        ratio = s(rho) / (rho * np.exp(-rho / 2))
        assert np.allclose(ratio, ratio[0], rtol=1e-13)

    @pytest.mark.parametrize("n, ell", STATES)
    def test_node_count(self, n, ell):
        s = make_radial_state(params(), QuantumNumbers(n, ell))
        rho = np.linspace(1e-3, 80, 10_000)
        v = s(rho)
        v = v[np.abs(v) > 1e-12 * np.abs(v).max()]
        assert np.count_nonzero(np.diff(np.sign(v))) == n - ell - 1

    @pytest.mark.parametrize("n, ell", STATES)
    def test_measured_norm_is_inverse_energy(self, n, ell):
        # the printed normalization yields int R^2 = 1/|E0|, not 1/(2|E0|) or 1
        s = make_radial_state(params(0.3), QuantumNumbers(n, ell))
        assert s.measured_norm == pytest.approx(1.0 / abs(s.energy), rel=1e-12)

    def test_norm_candidates_for_2p(self):
        s = make_radial_state(params(0.5), QuantumNumbers(2, 1))
        e = abs(s.energy)
        assert s.measured_norm != pytest.approx(1.0 / (2 * e), rel=1e-3)
        assert s.measured_norm == pytest.approx(1.0 / e, rel=1e-12)

    def test_norm_log_matches_direct_formula(self):
        n, ell = 3, 1
        s = make_radial_state(params(0.5), QuantumNumbers(n, ell))
        direct = math.sqrt(
            math.factorial(n + ell) / (2 * abs(s.energy) * n * math.factorial(n - ell - 1))
        ) / math.factorial(2 * ell + 1)
        assert math.exp(s.norm_log) == pytest.approx(direct, rel=1e-13)

    def test_large_quantum_numbers_do_not_overflow(self):
        s = make_radial_state(params(0.5), QuantumNumbers(120, 100))
        assert math.isfinite(s.norm_log) and math.isfinite(s.measured_norm)
        assert s.measured_norm == pytest.approx(1.0 / abs(s.energy), rel=1e-9)

    @pytest.mark.parametrize("n, ell", STATES)
    def test_boundary_behaviour(self, n, ell):
        s = make_radial_state(params(), QuantumNumbers(n, ell))
        small = s(1e-6) / 1e-6 ** (ell + 1)
        assert math.isfinite(small) and small != 0.0
        assert small == pytest.approx(s(1e-8) / 1e-8 ** (ell + 1), rel=1e-5)
        # e^{rho/2} R grows no faster than the degree-(n) polynomial envelope
        envelope = math.exp(s.amplitude_log) * 200.0 ** (ell + 1) * 200.0 ** (n - ell - 1) * 10
        assert abs(s(200.0) * math.exp(100.0)) < envelope

    @pytest.mark.parametrize("n, ell", STATES)
    def test_equation_residual(self, n, ell):
        s = make_radial_state(params(0.3), QuantumNumbers(n, ell))
        rho = np.linspace(0.1, 50, 500)
        peak = np.abs(s(np.linspace(0, 60, 4000))).max()
        assert np.abs(equation_residual(s, rho)).max() <= 1e-8 * peak

    def test_residual_detects_wrong_coefficient(self):
        s = make_radial_state(params(0.3), QuantumNumbers(3, 1))
        rho = np.linspace(0.1, 50, 500)
        peak = np.abs(s(rho)).max()
        assert np.abs(equation_residual(s, rho, coefficient=2.0)).max() > 1e-3 * peak

    def test_state_is_immutable(self):
        s = make_radial_state(params(), QuantumNumbers(2, 1))
        with pytest.raises(AttributeError):
            s.energy = 0.0
        assert isinstance(s, RadialState)

    def test_zero_energy_rejected(self):
        with pytest.raises(DomainError):
            make_radial_state(params(1.0, mode="paper"), QuantumNumbers(2, 1))
