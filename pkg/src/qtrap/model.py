"""Truncated-basis model of a two-level ion in a deformed harmonic trap.

Everything is expressed in units of the Rabi frequency (Omega = hbar = 1),
so the model constants are the dimensionless ratios omega_bar, delta_bar,
epsilon_bar.  The joint basis is ordered g-block first: index u = m encodes
|g, m> and u = (n_max + 1) + m encodes |e, m> for trap level m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qalgebra import DeformationParams, coherent_amplitudes, q_factorial, q_number

INITIAL_KINDS = ("ground", "excited", "cat")


def _default_deformation() -> DeformationParams:
    return DeformationParams(tau=0.004, n_max=32)


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless model parameters.

    omega_bar: trap frequency over Rabi frequency.
    delta_bar: detuning (atomic minus laser frequency) over Rabi frequency.
    epsilon_bar: Lamb-Dicke-like coupling strength over Rabi frequency.
    beta: coherent amplitude of the initial trap state.
    """

    omega_bar: float = 50.0
    delta_bar: float = -50.0
    epsilon_bar: float = 0.05
    beta: complex = 4.0 + 0.0j
    deformation: DeformationParams = field(default_factory=_default_deformation)

    def __post_init__(self) -> None:
        if self.deformation.n_max < 1:
            raise ValueError("n_max must be at least 1 for the two-level model")

    @property
    def dim(self) -> int:
        """Dimension 2(n_max + 1) of the joint ion + trap space."""
        return 2 * (self.deformation.n_max + 1)


@dataclass
class JointState:
    """Joint ion + trap amplitudes: g[m] for |g, m>, e[m] for |e, m>.

    Unit norm (sum |g_m|^2 + |e_m|^2 = 1) is expected everywhere; the
    propagator validates it on entry and preserves it.
    """

    g: np.ndarray
    e: np.ndarray

    def vector(self) -> np.ndarray:
        """Flat joint vector in the documented basis order (g-block, e-block)."""
        return np.concatenate([self.g, self.e])

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "JointState":
        half = v.shape[0] // 2
        return cls(g=v[:half].copy(), e=v[half:].copy())

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.g) ** 2) + np.sum(np.abs(self.e) ** 2)))


def fq_matrix(params: SystemParams) -> np.ndarray:
    """Matrix of F = e^(-eps^2/2) e^(i*eps*A+) e^(i*eps*A) on the truncated trap space.

    Closed form of the normal-ordered product on deformed Fock states:

        <m|F|n> = e^(-eps^2/2) sum_k (i*eps)^(m-n+2k) sqrt([n]! [m]!)
                  / ( k! (m-n+k)! [n-k]! ),   k from max(0, n-m) to n,

    where plain factorials are ordinary integers and bracketed ones are
    q-factorials.  Because the product is normal ordered, no intermediate
    level exceeds n_max and the truncation is exact.
    """
    eps = params.epsilon_bar
    p = params.deformation
    dim = p.n_max + 1
    qf = [q_factorial(n, p) for n in range(dim)]
    pref = math.exp(-0.5 * eps * eps)
    out = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for n in range(dim):
            acc = 0.0 + 0.0j
            root = math.sqrt(qf[n] * qf[m])
            for k in range(max(0, n - m), n + 1):
                den = math.factorial(k) * math.factorial(m - n + k) * qf[n - k]
                acc += (1j * eps) ** (m - n + 2 * k) * root / den
            out[m, n] = pref * acc
    return out


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Dense Hermitian Hamiltonian on the joint basis, in energy units of hbar*Omega.

    H = (omega_bar/2) diag_m([m+1] + [m]) on both ion blocks
      + (delta_bar/2) sigma_z, with the convention <e|sigma_z|e> = +1
      + (1/2)(F sigma_plus + F+ sigma_minus).
    """
    p = params.deformation
    d = p.n_max + 1
    trap = 0.5 * params.omega_bar * np.array(
        [q_number(m + 1, p) + q_number(m, p) for m in range(d)]
    )
    fq = fq_matrix(params)
    ham = np.zeros((2 * d, 2 * d), dtype=complex)
    ham[:d, :d] = np.diag(trap - 0.5 * params.delta_bar)
    ham[d:, d:] = np.diag(trap + 0.5 * params.delta_bar)
    ham[d:, :d] = 0.5 * fq
    ham[:d, d:] = 0.5 * fq.conj().T
    return ham


def initial_state(kind: str, params: SystemParams) -> JointState:
    """One of the three initial states: ground/excited products or their cat.

    ground:  |g, beta>         excited: |e, -beta>
    cat:     (|g, beta> + |e, -beta>) / sqrt(2)

    All use the deformed coherent amplitudes at the configured truncation and
    come out unit norm (the two cat components live in orthogonal ion states).
    """
    p = params.deformation
    zero = np.zeros(p.n_max + 1, dtype=complex)
    if kind == "ground":
        return JointState(g=coherent_amplitudes(params.beta, p), e=zero.copy())
    if kind == "excited":
        return JointState(g=zero.copy(), e=coherent_amplitudes(-params.beta, p))
    if kind == "cat":
        s = 1.0 / math.sqrt(2.0)
        return JointState(
            g=s * coherent_amplitudes(params.beta, p),
            e=s * coherent_amplitudes(-params.beta, p),
        )
    raise ValueError(f"unknown initial state kind {kind!r}, expected one of {INITIAL_KINDS}")
