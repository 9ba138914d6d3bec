"""Self-energies of the symmetric and antisymmetric collective modes.

Each kernel is a finite sum of delayed exponentials over the pairwise
coupling-point delays, hence an entire function of the complex frequency s.
Everything is dimensionless: arguments are s*tau and return values are
Sigma*tau.  The finite sums are the canonical evaluation everywhere in the
package; the resummed rational closed forms (which are 0/0 exactly at the
dark-mode frequencies) are exposed only as independent cross-checks.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache

import numpy as np

from .model import SystemConfig, Topology, coupling_positions


class BranchSign(Enum):
    """Selects the symmetric (+) or antisymmetric (-) collective mode."""

    PLUS = 1
    MINUS = -1

    @property
    def sign(self) -> int:
        return self.value


@lru_cache(maxsize=None)
def _kernel_table(topology: Topology, n_points: int):
    layout = coupling_positions(SystemConfig(topology, n_points, 1.0, 1.0))
    d_same = np.array(sorted(layout.same_atom_delays), dtype=float)
    m_same = np.array([layout.same_atom_delays[int(d)] for d in d_same], dtype=float)
    d_cross = np.array(sorted(layout.cross_atom_delays), dtype=float)
    m_cross = np.array([layout.cross_atom_delays[int(d)] for d in d_cross], dtype=float)
    return d_same, m_same, d_cross, m_cross


def _kernel_sum(s, delays, weights, gamma_tau):
    s_arr = np.asarray(s, dtype=np.complex128)
    out = 0.5 * gamma_tau * np.exp(-np.multiply.outer(s_arr, delays)) @ weights
    if np.ndim(s) == 0 and not isinstance(s, np.ndarray):
        return complex(out)
    return out


def sigma_same_atom(s, config: SystemConfig):
    """Kernel from photon exchange between points of one atom: the finite sum
    (gamma/2) * sum_d mult(d) exp(-s d) over the same-atom delay multiset."""
    d, m, _, _ = _kernel_table(config.topology, config.n_points)
    return _kernel_sum(s, d, m, config.gamma_tau)


def sigma_cross_atom(s, config: SystemConfig):
    """Kernel from photon exchange between the two atoms; for the braided
    layout every cross delay is an odd multiple of tau."""
    _, _, d, m = _kernel_table(config.topology, config.n_points)
    return _kernel_sum(s, d, m, config.gamma_tau)


def sigma_pm(s, branch: BranchSign, config: SystemConfig):
    """Self-energy of the collective mode: same-atom part +/- cross part."""
    d1, m1, d2, m2 = _kernel_table(config.topology, config.n_points)
    delays = np.concatenate([d1, d2])
    weights = np.concatenate([m1, branch.sign * m2])
    return _kernel_sum(s, delays, weights, config.gamma_tau)


def sigma_pm_deriv(s, branch: BranchSign, config: SystemConfig):
    """Exact d/ds of sigma_pm: term-by-term derivative of the finite sum."""
    d1, m1, d2, m2 = _kernel_table(config.topology, config.n_points)
    delays = np.concatenate([d1, d2])
    weights = np.concatenate([-d1 * m1, branch.sign * (-d2 * m2)])
    return _kernel_sum(s, delays, weights, config.gamma_tau)


# --- resummed closed forms (test oracles only) ------------------------------

def sigma_plus_closed(s, config: SystemConfig):
    """Rational resummation of the symmetric self-energy; identical form for
    both topologies.  Singular (0/0) where exp(s) = 1."""
    n = config.n_points
    e = np.exp(np.asarray(s, dtype=np.complex128))
    num = n * (e**2 - 1.0) - e * (1.0 - e ** (-2 * n))
    return config.gamma_tau * num / (2.0 * (e - 1.0) ** 2)


def sigma_minus_closed(s, config: SystemConfig):
    """Rational resummation of the antisymmetric self-energy.  Singular at
    exp(s) = 1 (separate) or exp(s) = -1 (braided)."""
    n = config.n_points
    e = np.exp(np.asarray(s, dtype=np.complex128))
    if config.topology is Topology.SEPARATE:
        num = n * (e**2 - 1.0) - e * (3.0 - 4.0 * e ** (-n) + e ** (-2 * n))
        return config.gamma_tau * num / (2.0 * (e - 1.0) ** 2)
    num = n * (e**2 - 1.0) + e * (1.0 - e ** (-2 * n))
    return config.gamma_tau * num / (2.0 * (e + 1.0) ** 2)


def sigma_closed(s, branch: BranchSign, config: SystemConfig):
    if branch is BranchSign.PLUS:
        return sigma_plus_closed(s, config)
    return sigma_minus_closed(s, config)
