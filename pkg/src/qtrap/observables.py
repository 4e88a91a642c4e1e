"""Reductions of the joint state and the entropy observables built on them.

Two ion entropies are computed side by side at every sample:

* entropy_entrywise applies -x ln x to the entries of the reduced 2x2
  density (diagonal terms plus twice the real part of the off-diagonal log
  term).  It is a closed form in the populations and the coherence, can
  exceed ln 2 or go negative, and differs from the spectral entropy whenever
  the coherence is nonzero.
* entropy_vn is the exact von Neumann entropy through the 2x2 eigenvalues.

The relative entropy and the mutual entropy built from it use the same
entrywise form, with zero-numerator terms contributing nothing and zero
denominators under nonzero weight flagged as divergent samples.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import JointState

# Coherences below this magnitude are numerical zeros; log terms built on
# them would be pure branch noise.
COHERENCE_FLOOR = 1e-15

_EIGENVALUE_FLOOR = 1e-14
_NEGATIVITY_TOL = -1e-10

LN2 = math.log(2.0)


class DivergenceError(Exception):
    """A relative-entropy ratio diverged: zero reference under nonzero weight."""


@dataclass(frozen=True)
class IonState2x2:
    """Reduced ion density: populations pg, pe and the g-e coherence c_ge.

    Valid instances satisfy pg + pe = 1 (to 1e-10) and |c_ge|^2 <= pg*pe
    (positivity); reductions of unit-norm joint states always do.
    """

    pg: float
    pe: float
    c_ge: complex


@dataclass(frozen=True)
class EntropyRecord:
    """Per-sample observables; mutual-entropy fields are None on divergent samples."""

    t_rescaled: float
    inv: float
    s_entrywise: float
    s_vn: float
    s_vn_motion: float
    i_mutual: float | None
    s_p: float | None
    s_c: float | None


def reduce_ion(psi: JointState) -> IonState2x2:
    """Trace out the trap: pg = sum |g_n|^2, pe = sum |e_n|^2, c_ge = sum g_n* e_n."""
    pg = float(np.sum(np.abs(psi.g) ** 2))
    pe = float(np.sum(np.abs(psi.e) ** 2))
    c_ge = complex(np.vdot(psi.g, psi.e))
    return IonState2x2(pg=pg, pe=pe, c_ge=c_ge)


def reduce_motion(psi: JointState) -> np.ndarray:
    """Trace out the ion: rho[m, n] = g_m g_n* + e_m e_n*.

    Hermitian, trace one, positive semidefinite, and of rank at most two
    (one dyad per ion branch).
    """
    return np.outer(psi.g, psi.g.conj()) + np.outer(psi.e, psi.e.conj())


def inversion(ion: IonState2x2) -> float:
    """Population inversion pg - pe."""
    return ion.pg - ion.pe


def _xlnx(x: float) -> float:
    """x ln x with the 0 ln 0 := 0 convention."""
    if x <= 0.0:
        return 0.0
    return x * math.log(x)


def entropy_entrywise(ion: IonState2x2) -> float:
    """Entrywise entropy functional -[pg ln pg + pe ln pe + 2 Re(c ln c*)].

    The complex logarithm is taken on the principal branch; the coherence
    term is dropped below the numerical-zero floor.
    """
    s = _xlnx(ion.pg) + _xlnx(ion.pe)
    if abs(ion.c_ge) >= COHERENCE_FLOOR:
        s += 2.0 * (ion.c_ge * cmath.log(ion.c_ge.conjugate())).real
    return -s


def entropy_vn(ion: IonState2x2) -> float:
    """Von Neumann entropy of the 2x2 reduction via its closed-form eigenvalues.

    lambda_pm = (1 pm sqrt((pg - pe)^2 + 4 |c_ge|^2)) / 2.  Raises ValueError
    if an eigenvalue is negative beyond rounding (invalid density).
    """
    gap = math.sqrt((ion.pg - ion.pe) ** 2 + 4.0 * abs(ion.c_ge) ** 2)
    lam_hi = 0.5 * (1.0 + gap)
    lam_lo = 0.5 * (1.0 - gap)
    if lam_lo < _NEGATIVITY_TOL:
        raise ValueError(f"invalid 2x2 density: eigenvalue {lam_lo:.3e} < 0")
    # Rounding can push the pair marginally outside [0, 1]; clamp after the
    # negativity check so the entropy itself stays in [0, ln 2].
    lam_hi = min(lam_hi, 1.0)
    lam_lo = max(lam_lo, 0.0)
    return -(_xlnx(lam_hi) + _xlnx(lam_lo))


def entropy_vn_motion(rho_cm: np.ndarray) -> float:
    """Von Neumann entropy -sum lambda ln lambda of the trap reduction."""
    lam = np.linalg.eigvalsh(rho_cm)
    if float(lam[0]) < _NEGATIVITY_TOL:
        raise ValueError(f"invalid trap density: eigenvalue {float(lam[0]):.3e} < 0")
    lam = lam[lam >= _EIGENVALUE_FLOOR]
    return float(-np.sum(lam * np.log(lam)))


def _population_terms(ion_i: IonState2x2, ion_ref: IonState2x2) -> float:
    """Sum of P^(i) ln(P^(i)/P) over the two populations (binary KL divergence)."""
    total = 0.0
    for weight, ref, label in (
        (ion_i.pg, ion_ref.pg, "Pg"),
        (ion_i.pe, ion_ref.pe, "Pe"),
    ):
        if weight <= 0.0:
            continue
        if ref <= 0.0:
            raise DivergenceError(f"reference {label} = 0 under branch weight {weight:.3g}")
        total += weight * math.log(weight / ref)
    return total


def relative_entropy_entrywise(ion_i: IonState2x2, ion_ref: IonState2x2) -> float:
    """Entrywise relative entropy of a branch reduction against a reference.

    P_g^(i) ln(P_g^(i)/P_g) + P_e^(i) ln(P_e^(i)/P_e) + 2 Re[C^(i) (ln(C^(i)/C))*],
    principal-branch logarithms.  Zero numerators contribute 0; a numerically
    zero reference under a nonzero weight raises DivergenceError.
    """
    total = _population_terms(ion_i, ion_ref)
    ci = ion_i.c_ge
    if abs(ci) >= COHERENCE_FLOOR:
        if abs(ion_ref.c_ge) < COHERENCE_FLOOR:
            raise DivergenceError(
                f"reference coherence {abs(ion_ref.c_ge):.3g} is a numerical zero "
                f"under branch coherence {abs(ci):.3g}"
            )
        total += 2.0 * (ci * cmath.log(ci / ion_ref.c_ge).conjugate()).real
    return total


def mutual_entropy(ion_1: IonState2x2, ion_2: IonState2x2, ion_cat: IonState2x2) -> float:
    """Equal-weight average of the branch relative entropies against the evolved cat."""
    return 0.5 * relative_entropy_entrywise(ion_1, ion_cat) + 0.5 * relative_entropy_entrywise(
        ion_2, ion_cat
    )


def population_part(ion_1: IonState2x2, ion_2: IonState2x2, ion_cat: IonState2x2) -> float:
    """Population-only share S(P) of the mutual entropy.

    Equal-weight average of the two binary KL divergences of the branch
    populations against the cat populations; nonnegative wherever defined.
    """
    return 0.5 * _population_terms(ion_1, ion_cat) + 0.5 * _population_terms(ion_2, ion_cat)


def coherence_part(i_mutual: float, s_p: float) -> float:
    """Coherence share S(C) = I - S(P), so additivity holds identically."""
    return i_mutual - s_p
