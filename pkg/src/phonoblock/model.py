"""Rotating-frame Hamiltonians and collapse operators.

Two systems are assembled here. The two-mode system couples a nanomechanical
resonator (NAMR) to a qubit on resonance, with coherent drives on both; the
three-mode system adds a readout cavity coupled to the NAMR by a linearized
beam-splitter interaction. Both drives share one frequency, so a single
detuning ``delta`` parameterizes the rotating frame. All rates and couplings
are expected in a common unit (conventionally the qubit damping ``kappa``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError
from .hilbert import HilbertSpace, Operator, lowering, make_space

DEFAULT_MECH_CUTOFF = 8
DEFAULT_MECH_CUTOFF_THREE_MODE = 6
DEFAULT_CAVITY_CUTOFF = 3


def wrap_phase(phi: float) -> float:
    """Wrap an angle to the interval (-pi, pi]."""
    w = (phi + math.pi) % (2.0 * math.pi) - math.pi
    if w == -math.pi:
        w = math.pi
    return w


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value}")


def _require_nonneg(name: str, value: float) -> None:
    _require_finite(name, value)
    if value < 0:
        raise ParameterError(f"{name} must be >= 0, got {value}")


def _require_positive(name: str, value: float) -> None:
    _require_finite(name, value)
    if value <= 0:
        raise ParameterError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class MqParams:
    """Rotating-frame parameters of the driven NAMR-qubit system.

    Attributes
    ----------
    delta : float
        Detuning of qubit and NAMR from the shared drive frequency.
    j : float
        NAMR-qubit coupling strength.
    eps : float
        Mechanical drive amplitude.
    omega_drv : float
        Qubit drive amplitude.
    phi : float
        Phase of the qubit drive relative to the mechanical drive,
        wrapped to (-pi, pi] on construction.
    kappa, gamma : float
        Qubit and NAMR energy damping rates.
    n_th : float
        Thermal occupation shared by the qubit and NAMR baths (resonant
        condition makes the two occupations equal).
    """

    delta: float = 0.0
    j: float = 0.0
    eps: float = 0.0
    omega_drv: float = 0.0
    phi: float = 0.0
    kappa: float = 1.0
    gamma: float = 1.0
    n_th: float = 0.0

    def __post_init__(self) -> None:
        _require_finite("delta", self.delta)
        _require_nonneg("j", self.j)
        _require_nonneg("eps", self.eps)
        _require_nonneg("omega_drv", self.omega_drv)
        _require_finite("phi", self.phi)
        _require_positive("kappa", self.kappa)
        _require_positive("gamma", self.gamma)
        _require_nonneg("n_th", self.n_th)
        object.__setattr__(self, "phi", wrap_phase(self.phi))


@dataclass(frozen=True)
class DetectionParams:
    """Two-mode parameters plus the linearized readout cavity.

    ``g_om`` is the effective optomechanical coupling (complex in general);
    ``gamma_cav`` is the cavity damping rate. The cavity detuning equals the
    shared ``delta`` of the base parameters, and its bath is at zero
    temperature.
    """

    base: MqParams = field(default_factory=MqParams)
    g_om: complex = 0.1
    gamma_cav: float = 10.0

    def __post_init__(self) -> None:
        _require_positive("gamma_cav", self.gamma_cav)
        g = complex(self.g_om)
        if not (math.isfinite(g.real) and math.isfinite(g.imag)):
            raise ParameterError(f"g_om must be finite, got {g}")
        object.__setattr__(self, "g_om", g)


@dataclass(frozen=True)
class LabFrameParams:
    """Laboratory-frame frequencies and temperature for thermal helpers.

    Only used to derive thermal occupations and effective readout parameters;
    the numerical core works in damping-rate units. Conversion to
    :class:`MqParams` asserts the resonance condition.
    """

    omega_m: float  # mechanical frequency, Hz
    omega_0: float  # qubit frequency, Hz
    temperature: float  # K

    def __post_init__(self) -> None:
        _require_positive("omega_m", self.omega_m)
        _require_positive("omega_0", self.omega_0)
        _require_nonneg("temperature", self.temperature)

    def thermal_occupation(self) -> float:
        """Shared bath occupation at the (asserted) resonant frequency."""
        from .analytics import thermal_occupation

        if abs(self.omega_0 - self.omega_m) > 1e-9 * self.omega_m:
            raise ParameterError(
                "resonance omega_0 = omega_m required to define a shared n_th; "
                f"got omega_0={self.omega_0}, omega_m={self.omega_m}"
            )
        return thermal_occupation(self.omega_m, self.temperature)


def device_preset() -> tuple[LabFrameParams, MqParams]:
    """Parameters of a demonstrated GHz NAMR-phase-qubit device.

    Returns the lab-frame numbers (6 GHz resonator at 25 mK) and their
    rotating-frame counterpart in units of the qubit damping rate.
    """
    lab = LabFrameParams(omega_m=6e9, omega_0=6e9, temperature=0.025)
    kappa_hz = 9e6
    mq = MqParams(
        delta=0.0,
        j=124e6 / kappa_hz,
        eps=0.01,
        omega_drv=0.0,
        phi=0.0,
        kappa=1.0,
        gamma=26e6 / kappa_hz,
        n_th=lab.thermal_occupation(),
    )
    return lab, mq


def two_mode_space(mech_cutoff: int = DEFAULT_MECH_CUTOFF) -> HilbertSpace:
    """Mechanical mode (label ``m``) tensor qubit (label ``q``)."""
    return make_space([("m", mech_cutoff), ("q", "qubit")])


def three_mode_space(
    cavity_cutoff: int = DEFAULT_CAVITY_CUTOFF,
    mech_cutoff: int = DEFAULT_MECH_CUTOFF_THREE_MODE,
) -> HilbertSpace:
    """Cavity (``a``) tensor mechanical mode (``m``) tensor qubit (``q``)."""
    return make_space([("a", cavity_cutoff), ("m", mech_cutoff), ("q", "qubit")])


def _mq_factor_labels(space: HilbertSpace) -> tuple[str, str]:
    bosons = space.bosons()
    qubits = space.qubits()
    if len(bosons) != 1 or len(qubits) != 1:
        raise ParameterError(
            "two-mode model needs exactly one boson and one qubit factor, "
            f"got {space!r}"
        )
    return bosons[0].label, qubits[0].label


def _detection_factor_labels(space: HilbertSpace) -> tuple[str, str, str]:
    bosons = space.bosons()
    qubits = space.qubits()
    if len(bosons) != 2 or len(qubits) != 1:
        raise ParameterError(
            "three-mode model needs two boson factors (cavity first, then "
            f"mechanical) and one qubit, got {space!r}"
        )
    return bosons[0].label, bosons[1].label, qubits[0].label


def _drive_terms(eps: float, omega_drv: float, phi: float, b: Operator, sm: Operator) -> Operator:
    half = omega_drv * np.exp(-1j * phi) * sm.dag() + eps * b.dag()
    return half + half.dag()


def build_h_mq(p: MqParams, space: HilbertSpace) -> Operator:
    """Two-mode rotating-frame Hamiltonian.

    H = delta (sigma+ sigma- + b'b) + j (sigma+ b + b' sigma-)
        + (omega_drv e^{-i phi} sigma+ + eps b' + h.c.)
    """
    m_label, q_label = _mq_factor_labels(space)
    b = lowering(space, m_label)
    sm = lowering(space, q_label)
    h = p.delta * (sm.dag() @ sm + b.dag() @ b) + p.j * (sm.dag() @ b + b.dag() @ sm)
    return h + _drive_terms(p.eps, p.omega_drv, p.phi, b, sm)


def build_h_total(p: DetectionParams, space: HilbertSpace) -> Operator:
    """Three-mode Hamiltonian with the linearized readout cavity.

    Adds delta a'a + (g_om a'b + conj(g_om) a b') to the two-mode terms. The
    cavity detuning is tied to the shared rotating frame.
    """
    a_label, m_label, q_label = _detection_factor_labels(space)
    a = lowering(space, a_label)
    b = lowering(space, m_label)
    sm = lowering(space, q_label)
    base = p.base
    h = base.delta * (a.dag() @ a + b.dag() @ b + sm.dag() @ sm)
    h = h + p.g_om * (a.dag() @ b) + np.conj(p.g_om) * (a @ b.dag())
    h = h + base.j * (sm.dag() @ b + b.dag() @ sm)
    return h + _drive_terms(base.eps, base.omega_drv, base.phi, b, sm)


def collapse_ops(
    p: MqParams | DetectionParams, space: HilbertSpace
) -> list[tuple[float, Operator]]:
    """Thermal Lindblad channels as (rate, operator) pairs.

    Mechanical and qubit channels carry the shared bath occupation; the
    cavity channel (three-mode only) is a plain decay at rate ``gamma_cav``.
    Zero-rate entries are omitted.
    """
    if isinstance(p, DetectionParams):
        a_label, m_label, q_label = _detection_factor_labels(space)
        base = p.base
        cavity = [(p.gamma_cav, lowering(space, a_label))]
    else:
        m_label, q_label = _mq_factor_labels(space)
        base = p
        cavity = []
    b = lowering(space, m_label)
    sm = lowering(space, q_label)
    channels = [
        (base.gamma * (base.n_th + 1.0), b),
        (base.gamma * base.n_th, b.dag()),
        (base.kappa * (base.n_th + 1.0), sm),
        (base.kappa * base.n_th, sm.dag()),
    ]
    channels.extend(cavity)
    return [(rate, op) for rate, op in channels if rate > 0.0]


def dressed_spectrum(j: float, delta: float, n_max: int) -> list[tuple[int, float, float]]:
    """Eigenvalues of the undriven resonant system per excitation manifold.

    The n-excitation manifold splits into E(n, +/-) = n delta +/- sqrt(n) j;
    the ground state sits at zero.
    """
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    return [
        (n, n * delta + math.sqrt(n) * j, n * delta - math.sqrt(n) * j)
        for n in range(1, n_max + 1)
    ]


def with_two_drive_optimum(
    p: MqParams, delta_opt: float, branch: str = "+"
) -> MqParams:
    """Replace the qubit-drive settings by the interference optimum.

    The drive ratio and phase are taken from the closed-form roots at
    (delta_opt, j) for the params' damping rates; ``branch`` picks the root.
    The detuning itself is left untouched.
    """
    from .analytics import optimal_drive_roots

    roots = optimal_drive_roots(delta_opt, p.j, p.kappa, p.gamma)
    if branch == "+":
        eta, phi = roots.eta_plus, roots.phi_plus
    elif branch == "-":
        eta, phi = roots.eta_minus, roots.phi_minus
    else:
        raise ParameterError(f"branch must be '+' or '-', got {branch!r}")
    return replace(p, omega_drv=eta * p.eps, phi=phi)
