"""Domain model: geometry and physical configuration for a pair of identical
giant atoms attached to a one-dimensional waveguide.

Natural units are used throughout the package: the travel time tau between
neighbouring coupling points and the group velocity v are both 1.  All
frequencies therefore appear as omega*tau, decay rates as gamma*tau,
positions in units of v*tau and times in units of tau.

The 2N coupling points occupy the half-integer grid
{-(2N-1)/2, ..., -1/2, +1/2, ..., +(2N-1)/2}, equidistant with unit spacing
and symmetric about x = 0.  Positions are stored as *twice* their value so
that every coordinate, and hence every pairwise delay, is an exact integer.
"""

from __future__ import annotations

import cmath
import math
import warnings
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Mapping

TWO_PI = 2.0 * math.pi

SQRT_HALF = math.sqrt(0.5)


class DomainError(Exception):
    """Base class for all errors raised by this package."""


class BraidedWithSinglePoint(DomainError):
    """Braided layouts alternate the two atoms' points; N = 1 cannot."""


class ConfigError(DomainError):
    """Malformed configuration file or inconsistent parameter set."""


class RWAValidityWarning(UserWarning):
    """The rotating-wave regime Omega >> N^2 gamma is not comfortably met."""


class Topology(Enum):
    SEPARATE = "separate"
    BRAIDED = "braided"

    @classmethod
    def parse(cls, text: str) -> "Topology":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ConfigError(f"unknown topology {text!r}; expected 'separate' or 'braided'")


@dataclass(frozen=True)
class SystemConfig:
    """One physical setup: coupling topology, points per atom, and the two
    dimensionless rates Omega*tau and gamma*tau."""

    topology: Topology
    n_points: int
    omega_tau: float
    gamma_tau: float
    rwa_threshold: float = 10.0

    def __post_init__(self):
        if self.n_points < 1:
            raise DomainError(f"n_points must be >= 1, got {self.n_points}")
        if self.topology is Topology.BRAIDED and self.n_points < 2:
            raise BraidedWithSinglePoint("braided topology requires N >= 2")
        if not self.omega_tau > 0:
            raise DomainError(f"omega_tau must be positive, got {self.omega_tau}")
        if not self.gamma_tau > 0:
            raise DomainError(f"gamma_tau must be positive, got {self.gamma_tau}")
        if self.rwa_margin < self.rwa_threshold:
            warnings.warn(
                f"RWA margin Omega/(N^2 gamma) = {self.rwa_margin:.3g} below "
                f"{self.rwa_threshold:g}; results are formally exact for the model "
                "equations but the model itself may not describe a physical device",
                RWAValidityWarning,
                stacklevel=2,
            )

    @property
    def rwa_margin(self) -> float:
        return self.omega_tau / (self.n_points**2 * self.gamma_tau)

    @property
    def omega_over_2pi(self) -> float:
        return self.omega_tau / TWO_PI

    @property
    def gamma_over_2pi(self) -> float:
        return self.gamma_tau / TWO_PI

    @classmethod
    def from_caption(cls, topology, n_points, omega_over_2pi, gamma_over_2pi, **kw):
        """Build from Omega*tau/(2*pi) and gamma*tau/(2*pi), the convention
        used for quoting parameter points."""
        if isinstance(topology, str):
            topology = Topology.parse(topology)
        return cls(topology, n_points, omega_over_2pi * TWO_PI, gamma_over_2pi * TWO_PI, **kw)

    def at(self, omega_tau: float, gamma_tau: float) -> "SystemConfig":
        """Same layout, different parameter point."""
        return SystemConfig(self.topology, self.n_points, omega_tau, gamma_tau,
                            rwa_threshold=self.rwa_threshold)


@dataclass(frozen=True)
class InitialAtomState:
    """Single-excitation atomic state c1|eg> + c2|ge>, unit norm."""

    c1: complex
    c2: complex

    def __post_init__(self):
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"|c1|^2 + |c2|^2 = {norm!r}, must be 1 within 1e-12")

    @property
    def c_plus(self) -> complex:
        return (self.c1 + self.c2) * SQRT_HALF

    @property
    def c_minus(self) -> complex:
        return (self.c1 - self.c2) * SQRT_HALF

    @classmethod
    def plus(cls):
        return cls(SQRT_HALF, SQRT_HALF)

    @classmethod
    def minus(cls):
        return cls(SQRT_HALF, -SQRT_HALF)

    @classmethod
    def eg(cls):
        return cls(1.0, 0.0)

    @classmethod
    def ge(cls):
        return cls(0.0, 1.0)

    @classmethod
    def from_label(cls, label: str) -> "InitialAtomState":
        text = label.strip().lower()
        named = {"plus": cls.plus, "+": cls.plus, "minus": cls.minus, "-": cls.minus,
                 "eg": cls.eg, "ge": cls.ge}
        if text in named:
            return named[text]()
        if text.startswith("custom"):
            text = text[len("custom"):].lstrip(" :")
        parts = text.split(",")
        if len(parts) != 2:
            raise ConfigError(f"cannot parse initial state {label!r}")
        try:
            c1, c2 = (complex(p.strip().replace("i", "j")) for p in parts)
        except ValueError:
            raise ConfigError(f"cannot parse initial state {label!r}")
        return cls(c1, c2)


@dataclass(frozen=True)
class CouplingLayout:
    """Coupling-point coordinates (as twice-integers) and the pairwise delay
    multisets that drive every kernel in the package.

    same_atom_delays maps delay -> multiplicity over the N^2 ordered point
    pairs of one atom (identical for either atom); cross_atom_delays does the
    same for the N^2 pairs taking one point from each atom.  Delays are exact
    integer multiples of tau by construction.
    """

    atom1_twice: tuple[int, ...]
    atom2_twice: tuple[int, ...]
    same_atom_delays: Mapping[int, int]
    cross_atom_delays: Mapping[int, int]

    def positions(self, atom: int) -> tuple[float, ...]:
        twice = self.atom1_twice if atom == 0 else self.atom2_twice
        return tuple(t / 2.0 for t in twice)

    @property
    def all_positions(self) -> tuple[tuple[int, float], ...]:
        """(atom_index, position) for every coupling point."""
        return tuple((i, x) for i in (0, 1) for x in self.positions(i))

    @property
    def half_span(self) -> float:
        """Distance from the origin to the outermost coupling point."""
        return max(abs(t) for t in self.atom1_twice + self.atom2_twice) / 2.0


def _delay_multiset(points_a: tuple[int, ...], points_b: tuple[int, ...]) -> dict[int, int]:
    counts: Counter[int] = Counter()
    for xa in points_a:
        for xb in points_b:
            counts[abs(xa - xb) // 2] += 1
    return dict(sorted(counts.items()))


@lru_cache(maxsize=None)
def _layout(topology: Topology, n_points: int) -> CouplingLayout:
    n = n_points
    slots = tuple(range(-(2 * n - 1), 2 * n, 2))  # twice-positions, unit spacing
    if topology is Topology.SEPARATE:
        atom1, atom2 = slots[:n], slots[n:]
    else:
        atom1, atom2 = slots[0::2], slots[1::2]
    same = _delay_multiset(atom1, atom1)
    cross = _delay_multiset(atom1, atom2)
    assert _delay_multiset(atom2, atom2) == same
    return CouplingLayout(atom1, atom2, same, cross)


def coupling_positions(config: SystemConfig) -> CouplingLayout:
    """Coupling-point layout for the configured topology.

    Separate: atom 1 takes the N leftmost slots, atom 2 the N rightmost.
    Braided: slots alternate atom 1, atom 2 from left to right.  The mirror
    relation x_{1j} = -x_{2,N-j+1} holds for both.
    """
    if config.topology is Topology.BRAIDED and config.n_points < 2:
        raise BraidedWithSinglePoint("braided topology requires N >= 2")
    return _layout(config.topology, config.n_points)


# --- flat key-value configuration files ------------------------------------
#
# Grammar (one `key = value` pair per line, '#' starts a comment):
#   topology            = separate | braided
#   n_points            = <positive integer>
#   omega_tau_over_2pi  = <positive float>
#   gamma_tau_over_2pi  = <positive float>
#   initial_state       = plus | minus | eg | ge | custom <c1>,<c2>
#
# Complex amplitudes use Python literal syntax ('0.6', '0.8j', '0.5+0.5j');
# 'i' is accepted as a synonym for 'j'.

_CONFIG_KEYS = {"topology", "n_points", "omega_tau_over_2pi", "gamma_tau_over_2pi",
                "initial_state"}


def parse_config_text(text: str) -> dict[str, str]:
    """Parse the flat key-value grammar into a raw string mapping."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def parse_config_file(path) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config_text(handle.read())


def build_scenario(values: Mapping[str, str]) -> tuple[SystemConfig, InitialAtomState]:
    """Construct the typed configuration from raw key-value strings."""
    missing = {"topology", "n_points", "omega_tau_over_2pi", "gamma_tau_over_2pi"} - set(values)
    if missing:
        raise ConfigError(f"missing keys: {', '.join(sorted(missing))}")
    try:
        n_points = int(values["n_points"])
        omega = float(values["omega_tau_over_2pi"])
        gamma = float(values["gamma_tau_over_2pi"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    config = SystemConfig.from_caption(values["topology"], n_points, omega, gamma)
    initial = InitialAtomState.from_label(values.get("initial_state", "eg"))
    return config, initial
