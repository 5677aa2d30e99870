"""Three-stage resonance steering toward EDIT.

Stage 1 finds the spectral parameter beta_g at which a single pinned grating
is a perfect mirror (reflectance 1) for the chosen angle of incidence.  Stage
2 places two such mirrors a separation eta d apart and tunes eta to eta*
where the pair transmittance returns to exactly 1: the pair then supports an
optimized trapped mode between the gratings, with the slab (Fabry-Perot)
estimate eta = pi m / sqrt(beta_g^2 - alpha0^2) as the starting guess.  Stage
3 inserts a central grating and tunes its lateral shift xi until the even
trapped-mode resonance of the triplet merges, in beta, with the shift-
invariant odd resonance; at the merged shift xi_edit the transmission
spectrum develops an extremely narrow notch splitting a full-transmission
peak (Elasto-Dynamically Inhibited Transmission).

Resonance positions are tracked through the moduli of the two dispersion
factors of the mode matrix (the factors of det M), and quality factors are
measured on transmission spectra by FWHM.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    DomainError,
    ModesDidNotMerge,
    NoUnityReflectance,
    NoUnityTransmittance,
    Unresolved,
)
from .greens import (
    DEFAULT_POLICY,
    SpectralPoint,
    TruncationPolicy,
    TWO_PI,
    _lattice_sum,
    greens,
)
from .modes import StackGeometry, assemble, dispersion_residual
from .scattering import PinStack, SpectrumRecord, single_grating_reflectance, transmittance

_R_TOL = 1e-10   # 1 - R_g at beta_g ("to at least ten decimal places")
_T_TOL = 1e-8    # 1 - T_pair at eta*
_MERGE_TOL = 1e-7  # |beta_even - beta_odd| at xi_edit


@dataclass
class SteeringResult:
    """Per-angle output of the steering pipeline.

    Stages that were not run (or not applicable, such as EDIT tuning at
    normal incidence) leave their fields None; a failed stage stores the
    exception message in error and leaves later stages unset.
    """

    theta_i: float
    beta_g: float | None = None
    alpha0_g: float | None = None
    eta_star: float | None = None
    m_eff: float | None = None
    beta_even: float | None = None   # unshifted triplet, xi = 0
    beta_odd: float | None = None
    xi_edit: float | None = None
    beta_edit: float | None = None
    q_notch: float | None = None
    q_pair: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class ResonancePeak:
    """A measured spectral feature: center, width, and quality factor."""

    beta_center: float
    fwhm: float
    q: float
    kind: str = "unknown"       # "even" | "odd" when the caller knows
    is_notch: bool = False


def _alpha0_at(beta: float, theta_i: float | None, alpha0: float | None) -> float:
    if (theta_i is None) == (alpha0 is None):
        raise ValueError("specify exactly one of theta_i, alpha0")
    return beta * math.sin(theta_i) if theta_i is not None else alpha0


def default_bracket(theta_i: float | None = None,
                    alpha0: float | None = None) -> tuple[float, float]:
    """A beta bracket below the first light line for the given incidence.

    For fixed theta the n = -1 order turns propagating at
    beta = 2 pi / (1 + sin theta); for fixed alpha0 > 0 at beta = 2 pi - alpha0.
    The bracket spans (0.55, 0.99) of that limit, clipped above |alpha0|.
    """
    if theta_i is not None:
        limit = TWO_PI / (1.0 + math.sin(theta_i))
        return 0.55 * limit, 0.99 * limit
    if alpha0 is None:
        raise ValueError("specify theta_i or alpha0")
    limit = TWO_PI - abs(alpha0)
    lo = max(0.55 * limit, 1.02 * abs(alpha0))
    return lo, 0.99 * limit


def find_beta_g(
    theta_i: float | None = None,
    beta_bracket: tuple[float, float] | None = None,
    policy: TruncationPolicy = DEFAULT_POLICY,
    *,
    alpha0: float | None = None,
    coarse: int = 241,
) -> float:
    """Stage 1: beta at which the single-grating reflectance reaches 1.

    The bracket must contain exactly one reflectance maximum reaching 1 and
    keep every retained order away from its light line.  A coarse grid
    brackets the maximum, a bounded derivative-free refinement polishes it.
    Raises NoUnityReflectance when the refined maximum misses 1 by more than
    1e-10.
    """
    if beta_bracket is None:
        beta_bracket = default_bracket(theta_i, alpha0)
    lo, hi = beta_bracket

    def one_minus_r(beta: float) -> float:
        a0 = _alpha0_at(beta, theta_i, alpha0)
        return 1.0 - single_grating_reflectance(SpectralPoint(a0, beta), policy)

    grid = np.linspace(lo, hi, coarse)
    values = np.array([one_minus_r(float(b)) for b in grid])
    i = int(np.argmin(values))
    b_lo = grid[max(i - 1, 0)]
    b_hi = grid[min(i + 1, coarse - 1)]
    res = minimize_scalar(one_minus_r, bounds=(b_lo, b_hi), method="bounded",
                          options={"xatol": 1e-13})
    if res.fun > _R_TOL:
        raise NoUnityReflectance(
            f"max single-grating reflectance in bracket ({lo:g}, {hi:g}) is "
            f"1 - {res.fun:.3e}; wrong bracket or multiple propagating orders"
        )
    return float(res.x)


def slab_guess(beta_g: float, alpha0_g: float, m: int = 1) -> float:
    """Fabry-Perot slab estimate of the pair separation, pi m / sqrt(beta_g^2 - alpha0^2)."""
    if m < 1:
        raise ValueError(f"mode order m must be >= 1, got {m}")
    if not beta_g > abs(alpha0_g):
        raise DomainError(
            f"beta_g = {beta_g} must exceed |alpha0_g| = {abs(alpha0_g)}"
        )
    return math.pi * m / math.sqrt(beta_g * beta_g - alpha0_g * alpha0_g)


def find_eta_star(
    beta_g: float,
    eta_guess: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
    *,
    theta_i: float | None = None,
    alpha0: float | None = None,
    coarse: int = 41,
) -> float:
    """Stage 2: pair separation at which the pair transmittance returns to 1.

    Searches [0.9, 1.1] * eta_guess, widening once to [0.8, 1.2] before
    raising NoUnityTransmittance.  The guess is expected within 10% of the
    optimum (the slab model lands within ~2.5%).

    At beta_g each grating is a perfect mirror, so T(eta) is a resonance
    spike that can be orders of magnitude narrower than any fixed grid (and
    narrower for steeper incidence).  The spike is first located through the
    smooth proxy |M11^2 - G(0, eta d)^2|, the determinant modulus of the
    2x2 pair mode matrix, whose minimum marks the trapped-mode separation;
    the transmittance maximum is then polished inside a window a few spike
    widths wide.
    """
    a0 = _alpha0_at(beta_g, theta_i, alpha0)
    point = SpectralPoint(a0, beta_g)
    m11 = greens(point, 0.0, 0.0, policy)

    def pair_det(eta: float) -> float:
        g_eta = greens(point, 0.0, eta, policy)
        return abs(m11 * m11 - g_eta * g_eta)

    def one_minus_t(eta: float) -> float:
        return 1.0 - transmittance(PinStack.pair(eta), beta_g, alpha0=a0,
                                   policy=policy)

    best = None
    for spread in (0.1, 0.2):
        lo, hi = (1.0 - spread) * eta_guess, (1.0 + spread) * eta_guess
        grid = np.linspace(lo, hi, coarse)
        values = np.array([pair_det(float(e)) for e in grid])
        i = int(np.argmin(values))
        res = minimize_scalar(pair_det,
                              bounds=(grid[max(i - 1, 0)], grid[min(i + 1, coarse - 1)]),
                              method="bounded", options={"xatol": 1e-14})
        eta_res = float(res.x)
        # Spike half-width in eta: the determinant floor (set by radiative
        # leakage) over its linear slope, the latter sampled away from the
        # rounded bottom where |det| ~ slope * |eta - eta_res|.
        step = 0.02 * eta_guess
        slope = (pair_det(eta_res + step) + pair_det(eta_res - step)) / (2 * step)
        width = max(res.fun / slope if slope > 0 else 0.0, 1e-9 * eta_guess)
        fine = np.linspace(eta_res - 8 * width, eta_res + 8 * width, 257)
        t_values = np.array([one_minus_t(float(e)) for e in fine])
        j = int(np.argmin(t_values))
        t_res = minimize_scalar(one_minus_t,
                                bounds=(fine[max(j - 1, 0)], fine[min(j + 1, 256)]),
                                method="bounded", options={"xatol": 1e-13})
        best = t_res if best is None or t_res.fun < best.fun else best
        if best.fun <= _T_TOL:
            return float(best.x)
    raise NoUnityTransmittance(
        f"pair transmittance at beta_g = {beta_g:.9g} reaches only "
        f"1 - {best.fun:.3e} for eta within 20% of the guess {eta_guess:.6g}"
    )


def resonance_beta(
    kind: str,
    eta: float,
    xi: float,
    beta_window: tuple[float, float],
    policy: TruncationPolicy = DEFAULT_POLICY,
    *,
    theta_i: float | None = None,
    alpha0: float | None = None,
    d: float = 1.0,
    coarse: int = 241,
) -> float:
    """beta of the local minimum of one dispersion-factor modulus.

    kind selects the odd factor |M11 - M13| or the even factor
    |2 M12 M21 - M11 (M11 + M13)|; their minima over real beta locate the
    triplet's trapped-mode resonances (the minima of log|det M| split by
    parity).  Scans the window on a coarse grid, refines the deepest interior
    minimum, then sharpens it to the real part of the factor's complex zero,
    which removes the half-linewidth bias a leaky resonance imprints on its
    real-axis minimum.
    """
    if kind not in ("odd", "even"):
        raise ValueError(f"kind must be 'odd' or 'even', got {kind!r}")
    geometry = StackGeometry(eta=eta, xi=xi, d=d)

    def modulus(beta: float) -> float:
        a0 = _alpha0_at(beta, theta_i, alpha0)
        r = dispersion_residual(assemble(SpectralPoint(a0, beta, d), geometry, policy))
        return r.odd if kind == "odd" else r.even

    lo, hi = beta_window
    grid = np.linspace(lo, hi, coarse)
    values = np.array([modulus(float(b)) for b in grid])
    interior = np.arange(1, coarse - 1)
    minima = interior[(values[interior] < values[interior - 1])
                      & (values[interior] <= values[interior + 1])]
    if len(minima) == 0:
        raise Unresolved(
            f"no interior minimum of the {kind} factor in ({lo:g}, {hi:g})"
        )
    i = int(minima[np.argmin(values[minima])])
    res = minimize_scalar(modulus, bounds=(grid[i - 1], grid[i + 1]),
                          method="bounded", options={"xatol": 1e-14})
    polished = _polish_resonance(kind, float(res.x), eta, xi, d, policy,
                                 theta_i, alpha0, max_shift=0.1 * (hi - lo))
    return float(res.x) if polished is None else polished


def _factor_complex(kind: str, beta: complex, eta: float, xi: float, d: float,
                    policy: TruncationPolicy, theta_i: float | None,
                    alpha0: float | None) -> complex:
    """One dispersion factor continued to complex beta (no light-line guard)."""
    a0 = beta * math.sin(theta_i) if theta_i is not None else complex(alpha0)
    m11 = _lattice_sum(a0, beta, d, 0.0, 0.0, policy.n_self)
    m13 = _lattice_sum(a0, beta, d, 0.0, 2.0 * eta * d, policy.n_far)
    if kind == "odd":
        return m11 - m13
    m12 = _lattice_sum(a0, beta, d, -xi * d, eta * d, policy.n_far)
    m21 = _lattice_sum(a0, beta, d, xi * d, eta * d, policy.n_far)
    return 2.0 * m12 * m21 - m11 * (m11 + m13)


def _factor_pole(kind: str, beta0: float, eta: float, xi: float, d: float,
                 policy: TruncationPolicy, theta_i: float | None,
                 alpha0: float | None, max_shift: float) -> complex | None:
    """Complex zero of a dispersion factor near real beta0.

    On the real axis a leaky resonance leaves only a rounded minimum whose
    position is biased by up to its half linewidth; the underlying zero sits
    at complex beta, its real part is the resonance centre and |Im| its half
    linewidth.  A secant iteration (the factors are analytic, so no
    derivative bookkeeping is needed) recovers it from the real-axis
    minimum.  Returns None when the iteration fails to converge, degrades
    the residual, or leaves the neighbourhood, so the caller can keep the
    real-axis result.
    """

    def f(beta: complex) -> complex:
        return _factor_complex(kind, beta, eta, xi, d, policy, theta_i, alpha0)

    z0 = complex(beta0)
    z1 = complex(beta0 + 1e-7)
    f0, f1 = f(z0), f(z1)
    start = abs(f0)
    for _ in range(60):
        denom = f1 - f0
        if denom == 0:
            return None
        dz = -f1 * (z1 - z0) / denom
        z0, f0 = z1, f1
        z1 = z1 + dz
        f1 = f(z1)
        if abs(dz) <= 1e-14 * abs(z1) or f1 == 0:
            break
    else:
        return None
    if not (abs(f1) < 0.5 * start and abs(z1.real - beta0) <= max_shift
            and abs(z1.imag) <= max_shift and z1.real > 0):
        return None
    return complex(z1)


def _polish_resonance(kind: str, beta0: float, eta: float, xi: float, d: float,
                      policy: TruncationPolicy, theta_i: float | None,
                      alpha0: float | None, max_shift: float) -> float | None:
    pole = _factor_pole(kind, beta0, eta, xi, d, policy, theta_i, alpha0,
                        max_shift)
    return None if pole is None else float(pole.real)


def find_xi_edit(
    theta_i: float,
    beta_g: float,
    eta_star: float,
    xi_bracket: tuple[float, float] = (0.15, 0.30),
    policy: TruncationPolicy = DEFAULT_POLICY,
    *,
    beta_window_halfwidth: float = 0.05,
    xi_step: float = 1e-3,
    merge_tol: float = _MERGE_TOL,
) -> tuple[float, float]:
    """Stage 3: central-grating shift merging the even resonance into the odd.

    The odd resonance beta_odd is shift-invariant (the odd factor involves
    only M11 and M13, neither of which depends on xi).  The even resonance
    beta_even(xi) is tracked while xi steps across the bracket; a sign change
    of the gap beta_even - beta_odd is then closed by bisection.  Returns
    (xi_edit, beta_edit) with |beta_even(xi_edit) - beta_odd| <= merge_tol.

    Raises ModesDidNotMerge (reporting the closest approach) when the gap
    never changes sign over the bracket.
    """
    window = (beta_g - beta_window_halfwidth, beta_g + beta_window_halfwidth)
    beta_odd = resonance_beta("odd", eta_star, 0.0, window,
                              policy, theta_i=theta_i)
    even_window = (beta_odd - beta_window_halfwidth,
                   beta_odd + beta_window_halfwidth)

    def gap(xi: float) -> float:
        beta_even = resonance_beta("even", eta_star, xi, even_window,
                                   policy, theta_i=theta_i)
        return beta_even - beta_odd

    lo, hi = xi_bracket
    n_steps = max(2, int(math.ceil((hi - lo) / xi_step)) + 1)
    xs = np.linspace(lo, hi, n_steps)
    g_prev = gap(float(xs[0]))
    best = (abs(g_prev), float(xs[0]))
    for x in xs[1:]:
        g_here = gap(float(x))
        if abs(g_here) < best[0]:
            best = (abs(g_here), float(x))
        if np.sign(g_here) != np.sign(g_prev):
            xi_edit = brentq(gap, float(x) - (hi - lo) / (n_steps - 1), float(x),
                             xtol=1e-9)
            residual_gap = abs(gap(xi_edit))
            if residual_gap > merge_tol:
                raise ModesDidNotMerge(
                    f"bisection left |beta_even - beta_odd| = {residual_gap:.3e}"
                )
            return float(xi_edit), float(beta_odd)
        g_prev = g_here
    raise ModesDidNotMerge(
        f"no sign change of beta_even - beta_odd over xi in ({lo:g}, {hi:g}); "
        f"closest approach {best[0]:.3e} at xi = {best[1]:.6g}"
    )


def q_factor(
    spectrum: list[SpectrumRecord],
    feature: str,
    kind: str = "unknown",
) -> ResonancePeak:
    """Q = beta_center / FWHM of a peak or notch in a transmittance scan.

    For a notch the FWHM is measured at half depth, midway between the local
    plateau (the maximum over the scan window) and the notch floor; for a
    peak at half height above the window baseline.  Raises Unresolved when
    fewer than 20 scan points fall inside the half-width interval.
    """
    if feature not in ("peak", "notch"):
        raise ValueError(f"feature must be 'peak' or 'notch', got {feature!r}")
    pts = [(r.beta, r.T) for r in spectrum if r.error is None and not math.isnan(r.T)]
    if len(pts) < 5:
        raise Unresolved("spectrum has fewer than 5 valid points")
    pts.sort()
    beta = np.array([b for b, _ in pts])
    t = np.array([v for _, v in pts])
    if feature == "notch":
        i0 = int(np.argmin(t))
        level = 0.5 * (np.max(t) + t[i0])
        inside = t < level
    else:
        i0 = int(np.argmax(t))
        level = 0.5 * (np.min(t) + t[i0])
        inside = t > level
    if i0 in (0, len(t) - 1) or not inside[i0]:
        raise Unresolved("feature extremum sits on the scan boundary")

    def crossing(i_from: int, step: int) -> float:
        i = i_from
        while 0 <= i + step < len(t) and inside[i + step]:
            i += step
        j = i + step
        if j < 0 or j >= len(t):
            raise Unresolved("half-width crossing outside the scan window")
        # linear interpolation of the T = level crossing
        frac = (level - t[i]) / (t[j] - t[i])
        return float(beta[i] + frac * (beta[j] - beta[i]))

    left = crossing(i0, -1)
    right = crossing(i0, +1)
    across = int(np.sum(inside & (beta >= left) & (beta <= right)))
    if across < 20:
        raise Unresolved(
            f"only {across} scan points across the half-width; need >= 20"
        )
    fwhm = right - left
    center = float(beta[i0])
    return ResonancePeak(beta_center=center, fwhm=fwhm, q=center / fwhm,
                         kind=kind, is_notch=(feature == "notch"))


def feature_scan(
    stack: PinStack,
    center: float,
    halfwidth: float,
    feature: str,
    policy: TruncationPolicy = DEFAULT_POLICY,
    *,
    theta_i: float | None = None,
    alpha0: float | None = None,
    points: int = 1001,
    max_zoom: int = 60,
) -> list[SpectrumRecord]:
    """Zoom onto a spectral feature until its half-width is well resolved.

    Repeatedly scans a uniform beta window, re-centers on the extremum of T
    and shrinks (or grows) the window toward ~12 half-widths until at least
    40 points fall inside the half-width interval.  Used for Q measurement
    of features narrower than any practical uniform scan (EDIT notches reach
    Q ~ 1e9..1e10).
    """
    def scan(c: float, h: float) -> tuple[np.ndarray, np.ndarray]:
        betas = np.linspace(c - h, c + h, points)
        ts = np.empty_like(betas)
        for i, b in enumerate(betas):
            a0 = _alpha0_at(float(b), theta_i, alpha0)
            ts[i] = transmittance(stack, float(b), alpha0=a0, policy=policy)
        return betas, ts

    center0 = center
    for _ in range(max_zoom):
        # anchor the give-up test to the starting point so neither a boundary
        # extremum nor a drifting baseline minimum can walk the window
        # arbitrarily far from the requested feature
        if halfwidth > 0.2 * center0 or abs(center - center0) > 0.2 * center0:
            raise Unresolved(
                f"no {feature} found near beta = {center0:.9g}; window grew "
                f"to +-{halfwidth:.3g} without bracketing an extremum"
            )
        betas, ts = scan(center, halfwidth)
        i0 = int(np.argmin(ts)) if feature == "notch" else int(np.argmax(ts))
        if feature == "notch":
            level = 0.5 * (np.max(ts) + ts[i0])
            inside = ts < level
        else:
            level = 0.5 * (np.min(ts) + ts[i0])
            inside = ts > level
        across = int(np.sum(inside))
        center = float(betas[i0])
        if i0 in (0, len(ts) - 1):
            halfwidth *= 3.0          # feature fell off the edge; widen
            continue
        if not inside[i0] or across < 3:
            halfwidth *= 0.1          # feature unresolved; tighten toward center
            continue
        frac = across / len(ts)
        if across >= 40 and 0.05 <= frac <= 0.5:
            a0s = [_alpha0_at(float(b), theta_i, alpha0) for b in betas]
            return [SpectrumRecord(alpha0=a, beta=float(b), T=float(t), R=1.0 - float(t),
                                   energy_residual=0.0)
                    for a, b, t in zip(a0s, betas, ts)]
        # aim for the half-width spanning ~1/8 of the window
        est_width = max(frac, 2.0 / len(ts)) * 2.0 * halfwidth
        halfwidth = min(max(4.0 * est_width, 20.0 * 2.0 * halfwidth / points),
                        halfwidth * 3.0)
    raise Unresolved(f"feature near beta = {center:.9g} not resolved after zooming")


def _fixed_scan(
    stack: PinStack,
    center: float,
    halfwidth: float,
    points: int,
    policy: TruncationPolicy,
    *,
    theta_i: float | None = None,
    alpha0: float | None = None,
) -> list[SpectrumRecord]:
    """Uniform transmittance scan over center +- halfwidth, no zooming."""
    records = []
    for b in np.linspace(center - halfwidth, center + halfwidth, points):
        a0 = _alpha0_at(float(b), theta_i, alpha0)
        t = transmittance(stack, float(b), alpha0=a0, policy=policy)
        records.append(SpectrumRecord(alpha0=a0, beta=float(b), T=float(t),
                                      R=1.0 - float(t), energy_residual=0.0))
    return records


def steer(
    theta_list: list[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
    *,
    m: int = 1,
    with_modes: bool = True,
    with_edit: bool = False,
    with_q: bool = False,
) -> list[SteeringResult]:
    """Run the steering pipeline for each angle, collecting per-angle results.

    Stages: beta_g and eta_star always; the unshifted triplet's even/odd
    resonance pair when with_modes; EDIT shift tuning when with_edit; notch
    and outer-pair Q factors when with_q (implies with_edit).  Failures are
    recorded per angle and do not stop the sweep.  EDIT tuning is skipped at
    normal incidence (no even/odd merging without a symmetry-breaking
    lateral shift relative to an oblique wave).
    """
    results = []
    for theta in theta_list:
        res = SteeringResult(theta_i=theta)
        results.append(res)
        try:
            res.beta_g = find_beta_g(theta, policy=policy)
            res.alpha0_g = res.beta_g * math.sin(theta)
            chi0 = math.sqrt(res.beta_g**2 - res.alpha0_g**2)
            guess = slab_guess(res.beta_g, res.alpha0_g, m)
            res.eta_star = find_eta_star(res.beta_g, guess, policy, theta_i=theta)
            res.m_eff = res.eta_star * chi0 / math.pi
            if with_modes or with_edit or with_q:
                window = (res.beta_g - 0.05, res.beta_g + 0.05)
                res.beta_odd = resonance_beta("odd", res.eta_star, 0.0, window,
                                              policy, theta_i=theta)
                res.beta_even = resonance_beta("even", res.eta_star, 0.0, window,
                                               policy, theta_i=theta)
            if (with_edit or with_q):
                if theta == 0.0:
                    res.error = "EDIT unsupported at normal incidence"
                    continue
                res.xi_edit, res.beta_edit = find_xi_edit(
                    theta, res.beta_g, res.eta_star, policy=policy)
                if with_q:
                    # the merged resonance is the notch centre; label it by
                    # the parity whose pole is darker (smaller |Im|)
                    poles = {
                        k: _factor_pole(k, res.beta_edit, res.eta_star,
                                        res.xi_edit, 1.0, policy, theta, None,
                                        max_shift=1e-3)
                        for k in ("odd", "even")
                    }
                    live = {k: z for k, z in poles.items() if z is not None}
                    notch_kind = (min(live, key=lambda k: abs(live[k].imag))
                                  if live else "unknown")
                    triplet = PinStack.triplet(res.eta_star, res.xi_edit)
                    notch = feature_scan(triplet, res.beta_edit, 1e-7, "notch",
                                         policy, theta_i=theta)
                    res.q_notch = q_factor(notch, "notch", kind=notch_kind).q
                    # The broad envelope the notch splits is the outer-pair
                    # cavity mode; its half-linewidth comes from the bright
                    # pole.  An even point count keeps the needle at the
                    # window centre from puncturing the envelope samples.
                    bright_kind = (max(live, key=lambda k: abs(live[k].imag))
                                   if live else "even")
                    bright = live.get(bright_kind)
                    hw = 12.0 * abs(bright.imag) if bright is not None else 1e-4
                    env = _fixed_scan(triplet, res.beta_edit, hw, 2000,
                                      policy, theta_i=theta)
                    res.q_pair = q_factor(env, "peak", kind=bright_kind).q
        except Exception as exc:  # noqa: BLE001 - per-angle failures recorded
            res.error = f"{type(exc).__name__}: {exc}"
    return results
