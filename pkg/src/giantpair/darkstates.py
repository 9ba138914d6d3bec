"""Dark-mode bookkeeping.

Purely imaginary poles of the collective propagators exist only on a family
of straight lines in the Omega-gamma plane, one line per admissible mode
index n (frequency omega_n = n*pi/N).  This module enumerates those lines,
the vertical special families at Omega*tau = m*pi, the line intersections
that host oscillating bound states, and classifies the resulting long-time
dynamics for the standard initial states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import DomainError, InitialAtomState, SystemConfig, Topology
from .selfenergy import BranchSign, sigma_pm, sigma_pm_deriv

#: pole-equation residual below which a parameter point counts as lying on a
#: dark line; the formulas are exact, so this only absorbs round-off
ON_LINE_TOL = 1e-9


class NonPositiveGamma(DomainError):
    """The requested Omega sits on the gamma <= 0 side of the line."""


class NotOnDarkLine(DomainError):
    """Parameter point does not satisfy the dark condition within tolerance."""


class NoPositiveGammaIntersection(DomainError):
    """The two lines do not cross at any gamma > 0."""


class UnclassifiedCell(DomainError):
    """Mode inventory matches no known long-time pattern (defect signal)."""


class BoundStateClass(Enum):
    S1 = "S1"            # synchronous, single oscillation frequency
    S2 = "S2"            # synchronous, frequencies Omega~ and Omega~/2
    H2_0 = "H2-0"        # hybrid: two-frequency atom 1, static atom 2
    H2_1 = "H2-1"        # hybrid: two-frequency atom 1, single-frequency atom 2
    E1 = "E1"            # exchange, single frequency per atom
    E2 = "E2"            # exchange, two frequencies per atom
    SINGLE_ATOM = "SingleAtom"   # atom 2 fully quenched by interference
    STATIC = "Static"    # one surviving mode, constant populations
    NONE = "None"        # no dark mode survives for this initial state


def mode_q(n: int, branch: BranchSign, config: SystemConfig) -> Optional[int]:
    """Reduced line index q in {1..2N-1} for an admissible mode index n, or
    None when (n, branch) supports no dark line of the sloped/q=N family.
    The separate antisymmetric family with n/N even is handled separately."""
    if n < 1:
        return None
    n_pts = config.n_points
    ratio = n // n_pts if n % n_pts == 0 else None
    if branch is BranchSign.PLUS:
        if ratio is not None and ratio % 2 == 0:
            return None
        return n % (2 * n_pts)
    if config.topology is Topology.SEPARATE:
        if n % 2:
            return None
        if ratio is not None and ratio % 2 == 0:
            return None  # special vertical family, not q-indexed
        return n % (2 * n_pts)
    if ratio is not None and ratio % 2 == 1:
        return None
    return (n + n_pts) % (2 * n_pts)


def is_special_minus(n: int, config: SystemConfig) -> bool:
    """Separate-topology antisymmetric family with omega_n = Omega = m*pi,
    m even: vertical lines with their own amplitude law."""
    return (config.topology is Topology.SEPARATE
            and n % config.n_points == 0
            and (n // config.n_points) % 2 == 0
            and n // config.n_points > 0)


@dataclass(frozen=True)
class DarkLine:
    """One Omega-gamma parameter line carrying a dark mode of frequency
    omega_n; vertical lines (q = N and the special antisymmetric family) are
    flagged `special`."""

    n: int
    branch: BranchSign
    q: int
    omega_n_tau: float
    slope: Optional[float]          # d(gamma)/d(omega) is -slope; None if vertical
    special: bool
    minus_family: bool = False      # True for the separate S- vertical family

    def gamma_at(self, omega_tau: float) -> float:
        if self.special:
            raise DomainError("vertical line: gamma is unconstrained at Omega = omega_n")
        return self.slope * (self.omega_n_tau - omega_tau)


def dark_line(n: int, branch: BranchSign, config: SystemConfig) -> DarkLine:
    n_pts = config.n_points
    omega_n = n * math.pi / n_pts
    if is_special_minus(n, config) and branch is BranchSign.MINUS:
        return DarkLine(n, branch, 0, omega_n, None, True, minus_family=True)
    q = mode_q(n, branch, config)
    if q is None:
        raise DomainError(f"mode n={n} is not admissible for {branch} / {config.topology}")
    if q == n_pts:
        return DarkLine(n, branch, q, omega_n, None, True)
    slope = (2.0 / n_pts) * math.tan(q * math.pi / (2 * n_pts))
    return DarkLine(n, branch, q, omega_n, slope, False)


def dark_mode_indices(config: SystemConfig, branch: BranchSign,
                      omega_window: tuple[float, float]) -> list[DarkLine]:
    """All dark lines whose frequency omega_n lies in (lo, hi]."""
    lo, hi = omega_window
    if not hi > lo:
        return []
    n_pts = config.n_points
    n_lo = max(1, math.floor(lo * n_pts / math.pi) + 1)
    n_hi = math.floor(hi * n_pts / math.pi + 1e-9)
    out = []
    for n in range(n_lo, n_hi + 1):
        if branch is BranchSign.MINUS and is_special_minus(n, config):
            out.append(dark_line(n, branch, config))
        elif mode_q(n, branch, config) is not None:
            out.append(dark_line(n, branch, config))
    return out


@dataclass(frozen=True)
class LineSolution:
    """gamma solving the dark condition at a given Omega, or the vertical
    constraint Omega*tau = m*pi when the line has no slope."""

    gamma_tau: Optional[float]
    vertical: bool
    omega_tau_required: Optional[float] = None


def gamma_on_line(n: int, branch: BranchSign, omega_tau: float,
                  config: SystemConfig) -> LineSolution:
    line = dark_line(n, branch, config)
    if line.special:
        return LineSolution(None, True, line.omega_n_tau)
    gamma = line.gamma_at(omega_tau)
    if gamma <= 0:
        raise NonPositiveGamma(
            f"line n={n} gives gamma_tau = {gamma:.3g} <= 0 at omega_tau = {omega_tau:.6g}")
    return LineSolution(gamma, False)


def pole_equation_residual(n: int, branch: BranchSign, config: SystemConfig) -> float:
    """|s + i Omega + Sigma(s)| at the candidate dark frequency s = -i omega_n."""
    omega_n = n * math.pi / config.n_points
    s = -1j * omega_n
    return abs(s + 1j * config.omega_tau + sigma_pm(s, branch, config))


def on_dark_line(n: int, branch: BranchSign, config: SystemConfig,
                 tol: float = ON_LINE_TOL) -> bool:
    return pole_equation_residual(n, branch, config) < tol


def dark_amplitude(n: int, branch: BranchSign, config: SystemConfig,
                   tol: float = ON_LINE_TOL) -> float:
    """Excitation amplitude retained by the collective state in the dark mode
    (the pole residue, which is real and in (0, 1) on a dark line)."""
    residual = pole_equation_residual(n, branch, config)
    if residual >= tol:
        raise NotOnDarkLine(
            f"(Omega*tau={config.omega_tau:.6g}, gamma*tau={config.gamma_tau:.6g}) is not on "
            f"the n={n} {branch.name} line (residual {residual:.3g})")
    n_pts = config.n_points
    g = config.gamma_tau
    if branch is BranchSign.MINUS and is_special_minus(n, config):
        return 1.0 / (1.0 + n_pts * (2 * n_pts**2 + 1) * g / 6.0)
    q = mode_q(n, branch, config)
    if q == n_pts:
        return 1.0 / (1.0 + 0.5 * n_pts * g)
    sin_half = math.sin(q * math.pi / (2 * n_pts))
    return 1.0 / (1.0 + 0.5 * n_pts * g / sin_half**2)


def residue_amplitude(n: int, branch: BranchSign, config: SystemConfig) -> complex:
    """Independent amplitude route: 1/(1 + Sigma'(s)) at s = -i omega_n."""
    s = -1j * n * math.pi / config.n_points
    return 1.0 / (1.0 + sigma_pm_deriv(s, branch, config))


# --- intersections hosting oscillating bound states -------------------------

@dataclass(frozen=True)
class PointMode:
    """One dark mode passing through a parameter point."""

    n: int
    branch: BranchSign
    omega_tau: float
    amplitude: float
    special: bool = False


@dataclass(frozen=True)
class ObsPoint:
    """Intersection of a pair of opposite-slope dark lines: Omega = m*pi,
    gamma fixed by (p, q_tilde); the two line modes have indices
    n_{1,2} = (m -+ p) N +- q_tilde and share one amplitude."""

    config: SystemConfig
    m: Fraction
    p: Fraction
    q_tilde: int
    omega_tau: float
    gamma_tau: float
    n1: int
    n2: int
    branch1: BranchSign
    branch2: BranchSign
    omega_n1_tau: float
    omega_n2_tau: float
    amplitude: float
    extra_modes: tuple[PointMode, ...] = field(default_factory=tuple)

    @property
    def omega_tilde(self) -> float:
        """Beat frequency of the mode pair."""
        return self.omega_n2_tau - self.omega_n1_tau

    def point_config(self) -> SystemConfig:
        return self.config

    def modes(self, branch: BranchSign) -> tuple[PointMode, ...]:
        core = [PointMode(self.n1, self.branch1, self.omega_n1_tau, self.amplitude),
                PointMode(self.n2, self.branch2, self.omega_n2_tau, self.amplitude)]
        out = [m for m in core if m.branch is branch]
        out += [m for m in self.extra_modes if m.branch is branch]
        return tuple(sorted(out, key=lambda m: m.omega_tau))

    @property
    def all_modes(self) -> tuple[PointMode, ...]:
        return self.modes(BranchSign.PLUS) + self.modes(BranchSign.MINUS)


def _pair_amplitude(n_pts: int, gamma_tau: float, q_tilde: int) -> float:
    # csc^2((N +- q~) pi / 2N) = sec^2(q~ pi / 2N): equal for both pair members
    cos_half = math.cos(q_tilde * math.pi / (2 * n_pts))
    return 1.0 / (1.0 + 0.5 * n_pts * gamma_tau / cos_half**2)


def _scan_extra_modes(config_at_point: SystemConfig, p: Fraction,
                      exclude: set[tuple[int, BranchSign]]) -> tuple[PointMode, ...]:
    """All further dark lines passing through the point, within the window
    |omega_n - Omega| <= (p + 1) * pi that is guaranteed to contain them."""
    n_pts = config_at_point.n_points
    half_width = (float(p) + 1.0) * math.pi + 1e-9
    lo = config_at_point.omega_tau - half_width
    hi = config_at_point.omega_tau + half_width
    found = []
    for branch in (BranchSign.PLUS, BranchSign.MINUS):
        for line in dark_mode_indices(config_at_point, branch, (max(lo, 0.0), hi)):
            if (line.n, branch) in exclude:
                continue
            if on_dark_line(line.n, branch, config_at_point):
                amp = dark_amplitude(line.n, branch, config_at_point)
                found.append(PointMode(line.n, branch, line.omega_n_tau, amp,
                                       special=line.special))
    return tuple(sorted(found, key=lambda m: (m.branch.name, m.omega_tau)))


def _build_point(config: SystemConfig, m: Fraction, p: Fraction, q_tilde: int,
                 branch1: BranchSign, branch2: BranchSign) -> Optional[ObsPoint]:
    n_pts = config.n_points
    omega_tilde = float(p) * math.pi - q_tilde * math.pi / n_pts
    if omega_tilde <= 1e-12:
        return None
    tan_half = math.tan(q_tilde * math.pi / (2 * n_pts))
    gamma_tau = 2.0 * omega_tilde / (n_pts * tan_half)
    if gamma_tau <= 0:
        return None
    omega_tau = float(m) * math.pi
    n1 = int((m - p) * n_pts) + q_tilde
    n2 = int((m + p) * n_pts) - q_tilde
    if n1 < 1:
        return None
    at_point = config.at(omega_tau, gamma_tau)
    amplitude = _pair_amplitude(n_pts, gamma_tau, q_tilde)
    extras = _scan_extra_modes(at_point, p, {(n1, branch1), (n2, branch2)})
    return ObsPoint(at_point, m, p, q_tilde, omega_tau, gamma_tau, n1, n2,
                    branch1, branch2, n1 * math.pi / n_pts, n2 * math.pi / n_pts,
                    amplitude, extras)


def obs_points(config: SystemConfig, m_range: tuple[float, float]) -> list[ObsPoint]:
    """Enumerate every opposite-slope intersection point with m in the given
    inclusive range.  Separate topology: symmetric-branch pairs only (the
    antisymmetric lines coincide with them and appear as extra modes).
    Braided: symmetric pairs, antisymmetric pairs, and the mixed family at
    half-odd-integer m."""
    m_lo, m_hi = m_range
    n_pts = config.n_points
    points: list[ObsPoint] = []

    def add(m, p, q_tilde, b1, b2):
        pt = _build_point(config, m, p, q_tilde, b1, b2)
        if pt is not None:
            points.append(pt)

    m_int_lo = max(1, math.ceil(m_lo - 1e-9))
    m_int_hi = math.floor(m_hi + 1e-9)
    for m in range(m_int_lo, m_int_hi + 1):
        # same-branch pairs, opposite parities of m and p
        if m >= 2:
            branches = [BranchSign.PLUS]
            for p in range(m - 1, 0, -2):
                for q_tilde in range(1, n_pts):
                    for b in branches:
                        add(Fraction(m), Fraction(p), q_tilde, b, b)
        # antisymmetric braided pairs, equal parities
        if config.topology is Topology.BRAIDED:
            for p in range(m, 0, -2):
                for q_tilde in range(1, n_pts):
                    add(Fraction(m), Fraction(p), q_tilde, BranchSign.MINUS, BranchSign.MINUS)
    if config.topology is Topology.BRAIDED:
        # mixed symmetric/antisymmetric pairs at half-odd-integer m
        k_lo = max(1, math.ceil(2 * m_lo - 1e-9))
        k_hi = math.floor(2 * m_hi + 1e-9)
        for k in range(k_lo | 1, k_hi + 1, 2):   # odd numerators only
            m = Fraction(k, 2)
            for j in range(1, k + 1, 2):
                p = Fraction(j, 2)
                q_max = n_pts // 2 if p == Fraction(1, 2) else n_pts - 1
                for q_tilde in range(1, q_max + 1):
                    # which member of the pair is antisymmetric follows the
                    # parity of m - p
                    if (int(m - p)) % 2 == 0:
                        add(m, p, q_tilde, BranchSign.MINUS, BranchSign.PLUS)
                    else:
                        add(m, p, q_tilde, BranchSign.PLUS, BranchSign.MINUS)
    points.sort(key=lambda pt: (pt.omega_tau, pt.gamma_tau, pt.n1))
    return points


@dataclass(frozen=True)
class GeneralIntersection:
    """Crossing of two arbitrary sloped dark lines (not necessarily with
    opposite slopes)."""

    n1: int
    n2: int
    branch1: BranchSign
    branch2: BranchSign
    q1: int
    q2: int
    q_bar: Fraction
    q_tilde: Fraction
    r: int
    p: Fraction
    omega_tau: float
    gamma_tau: float


def general_intersections(config: SystemConfig,
                          index_pairs: Iterable[tuple[tuple[int, BranchSign],
                                                      tuple[int, BranchSign]]]
                          ) -> list[GeneralIntersection]:
    """Intersection points of arbitrary line pairs.  Raises
    NoPositiveGammaIntersection when the pair cannot cross at gamma > 0
    (q1 <= q2 after ordering n1 < n2, or negative solution)."""
    n_pts = config.n_points
    out = []
    for (na, ba), (nb, bb) in index_pairs:
        if na == nb and ba is bb:
            raise DomainError("need two distinct lines")
        (n1, b1), (n2, b2) = sorted([(na, ba), (nb, bb)], key=lambda t: t[0])
        q1 = mode_q(n1, b1, config)
        q2 = mode_q(n2, b2, config)
        if q1 is None or q2 is None:
            raise DomainError(f"pair ({n1},{b1.name}) / ({n2},{b2.name}) not admissible")
        if q1 <= q2:
            raise NoPositiveGammaIntersection(
                f"lines n1={n1} (q={q1}) and n2={n2} (q={q2}) do not cross at gamma > 0")
        q_bar = Fraction(q1 + q2, 2)
        q_tilde = Fraction(q1 - q2, 2)
        w_qbar = float(q_bar) * math.pi / n_pts
        w_qtilde = float(q_tilde) * math.pi / n_pts
        w_bar = (n1 + n2) * math.pi / (2 * n_pts)
        w_tilde = (n2 - n1) * math.pi / (2 * n_pts)
        omega = w_bar - math.sin(w_qbar) / math.sin(w_qtilde) * w_tilde
        gamma = (2.0 * w_tilde / n_pts) * (math.cos(w_qtilde) - math.cos(w_qbar)) \
            / math.sin(w_qtilde)
        if gamma <= 0:
            raise NoPositiveGammaIntersection(
                f"lines n1={n1}, n2={n2} cross at gamma_tau = {gamma:.3g} <= 0")
        r = round((w_bar - w_qbar) / math.pi)
        p = Fraction(n2 - n1 + q1 - q2, 2 * n_pts)
        out.append(GeneralIntersection(n1, n2, b1, b2, q1, q2, q_bar, q_tilde,
                                       r, p, omega, gamma))
    return out


# --- classification by long-time dynamics -----------------------------------

_FREQ_TOL = 1e-9


def _deduplicate(modes: Sequence[PointMode]) -> list[PointMode]:
    out: list[PointMode] = []
    for m in sorted(modes, key=lambda m: m.omega_tau):
        if out and abs(out[-1].omega_tau - m.omega_tau) < _FREQ_TOL:
            continue
        out.append(m)
    return out


def _synchronous_label(modes: Sequence[PointMode]) -> BoundStateClass:
    k = len(modes)
    if k == 0:
        return BoundStateClass.NONE
    if k == 1:
        return BoundStateClass.STATIC
    if k == 2:
        return BoundStateClass.S1
    if k == 3:
        lo, mid, hi = (m.omega_tau for m in modes)
        if abs((lo + hi) / 2 - mid) < _FREQ_TOL:
            return BoundStateClass.S2
    raise UnclassifiedCell(f"{k} same-branch modes with unrecognised spacing")


def _split_by_degeneracy(plus: Sequence[PointMode], minus: Sequence[PointMode]):
    matched, only_plus, only_minus = [], [], list(minus)
    for pm in plus:
        hit = next((mm for mm in only_minus
                    if abs(mm.omega_tau - pm.omega_tau) < _FREQ_TOL), None)
        if hit is None:
            only_plus.append(pm)
        else:
            only_minus.remove(hit)
            matched.append((pm, hit))
    return matched, only_plus, only_minus


def classify_inventory(plus: Sequence[PointMode], minus: Sequence[PointMode],
                       initial: InitialAtomState) -> BoundStateClass:
    """Long-time class of the dynamics from the surviving-mode inventory."""
    plus = _deduplicate(plus)
    minus = _deduplicate(minus)
    c_plus, c_minus = initial.c_plus, initial.c_minus
    if abs(c_minus) < 1e-12:
        return _synchronous_label(plus)
    if abs(c_plus) < 1e-12:
        return _synchronous_label(minus)
    if not minus:
        return _synchronous_label(plus)
    if not plus:
        return _synchronous_label(minus)
    matched, only_plus, only_minus = _split_by_degeneracy(plus, minus)
    for pm, mm in matched:
        if abs(pm.amplitude - mm.amplitude) > 1e-9:
            raise UnclassifiedCell(
                f"degenerate modes at omega*tau={pm.omega_tau:.6g} have unequal amplitudes")
    leftovers = only_plus + only_minus
    if not leftovers:
        return BoundStateClass.STATIC if len(matched) == 1 else BoundStateClass.SINGLE_ATOM
    if matched:
        if len(matched) == 2 and len(leftovers) == 1:
            return BoundStateClass.H2_0
        if len(matched) == 1 and len(leftovers) == 2 and (not only_plus or not only_minus):
            return BoundStateClass.H2_1
        raise UnclassifiedCell(
            f"{len(matched)} degenerate + {len(leftovers)} single-branch modes")
    if len(plus) == 1 and len(minus) == 1:
        return BoundStateClass.E1
    if {len(plus), len(minus)} == {1, 2}:
        return BoundStateClass.E2
    raise UnclassifiedCell(
        f"non-degenerate inventory with {len(plus)}+{len(minus)} modes")


def classify(point: ObsPoint, initial: InitialAtomState):
    """Bound-state class at an intersection point for the given initial
    state.  For initial states that are neither parity eigenstates nor a
    single-atom excitation, the full mode inventory is returned instead of a
    single label."""
    plus = point.modes(BranchSign.PLUS)
    minus = point.modes(BranchSign.MINUS)
    c_p, c_m = abs(initial.c_plus), abs(initial.c_minus)
    canonical = (c_p < 1e-12 or c_m < 1e-12
                 or (abs(c_p - c_m) < 1e-12 and abs(c_p**2 - 0.5) < 1e-12))
    if not canonical:
        return point.all_modes
    return classify_inventory(plus, minus, initial)


def point_modes_at(config: SystemConfig, omega_window_half_width: float = 4 * math.pi
                   ) -> tuple[tuple[PointMode, ...], tuple[PointMode, ...]]:
    """Dark modes passing through an arbitrary parameter point, by direct
    residual scan; used by the CLI classify/sweep paths."""
    lo = max(config.omega_tau - omega_window_half_width, 0.0)
    hi = config.omega_tau + omega_window_half_width
    per_branch = []
    for branch in (BranchSign.PLUS, BranchSign.MINUS):
        modes = []
        for line in dark_mode_indices(config, branch, (lo, hi)):
            if on_dark_line(line.n, branch, config):
                modes.append(PointMode(line.n, branch, line.omega_n_tau,
                                       dark_amplitude(line.n, branch, config),
                                       special=line.special))
        per_branch.append(tuple(modes))
    return per_branch[0], per_branch[1]
