"""Scale-invariant L2 distance and the two non-Markovianity quantifiers.

The first quantifier measures how far the frequency-domain response is
from satisfying the divisibility (semigroup) identity; the second
measures how far the exact equilibrium correlation spectrum is from the
regression-theorem prediction built out of the mean-value propagator.
Both reduce each 2×2 matrix entry to a number in [0, 1] via the same
normalized distance, so they are insensitive to any global rescaling of
the underlying functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlations import covariance0, exact_entries_vec, rt_entries_vec
from .errors import TailDominates, ZeroNorm
from .quadrature import Integrand, QuadratureConfig, inner_product_info
from .response import (
    chi_qq_prime_vec,
    chi_qq_vec,
    feature_frequencies,
    is_decoupled,
)
from .spectral import SpectralDensity

_DEFAULT_CFG = QuadratureConfig()

# Truncation-sensitivity thresholds on the scale-free tail ratio:
# above _TAIL_FLAG the report flags the entry, above _TAIL_RAISE the
# window is too small for the number to mean anything.
_TAIL_FLAG = 1e-3
_TAIL_RAISE = 0.1

_ENTRY_KEYS = ("qq", "qp", "pp")


@dataclass(frozen=True)
class EntryDiagnostics:
    """Truncation diagnostics for one quantifier entry.

    tail_ratio is the largest estimated out-of-window contribution of
    the three underlying integrals, each normalized by its own scale,
    so it is invariant under rescaling of either function.
    """

    tail_ratio: float
    panels: int
    flagged: bool


@dataclass(frozen=True)
class QuantifierReport:
    """Both quantifier matrices plus per-entry truncation diagnostics.

    n1 and n2 are 2×2 real arrays ordered [[qq, qp], [pq, pp]]; a
    matrix is None when it was not requested.  Diagnostics are keyed
    'n1_qq', 'n2_qp', ... matching the CSV column names.
    """

    n1: np.ndarray | None
    n2: np.ndarray | None
    diagnostics: dict[str, EntryDiagnostics]


def _distance_info(f: Integrand, g: Integrand,
                   cfg: QuadratureConfig, breakpoints=()):
    """Normalized distance plus diagnostics; raises ZeroNorm on a
    degenerate argument and TailDominates when the window is too small."""
    ip = inner_product_info(f, g, cfg, breakpoints=breakpoints)
    ff = inner_product_info(f, f, cfg, breakpoints=breakpoints)
    gg = inner_product_info(g, g, cfg, breakpoints=breakpoints)

    nf2 = max(ff.value.real, 0.0)
    ng2 = max(gg.value.real, 0.0)
    if math.sqrt(nf2) < 1e-14 or math.sqrt(ng2) < 1e-14:
        raise ZeroNorm("degenerate argument: norm below 1e-14")

    scale = math.sqrt(nf2 * ng2)
    tail_ratio = max(ff.tail / nf2, gg.tail / ng2, abs(ip.tail) / scale)
    panels = ip.panels + ff.panels + gg.panels
    if tail_ratio > _TAIL_RAISE:
        raise TailDominates(
            f"estimated out-of-window contribution ({tail_ratio:.2g} of the "
            "norm scale) dominates the distance; increase half_width",
            tail=tail_ratio)

    ratio = abs(ip.value) ** 2 / (nf2 * ng2)
    r = min(max(1.0 - ratio, 0.0), 1.0)  # clamp window 1e-12 vs rounding
    diag = EntryDiagnostics(tail_ratio=float(tail_ratio), panels=panels,
                            flagged=bool(tail_ratio > _TAIL_FLAG))
    return math.sqrt(r), diag


def distance(f: Integrand, g: Integrand,
             cfg: QuadratureConfig | None = None, *, breakpoints=()) -> float:
    """Normalized L2 distance 𝒟 = √(1 − |⟨f,g⟩|²/(‖f‖²‖g‖²)) ∈ [0, 1].

    𝒟 vanishes exactly when g is a (complex) multiple of f and reaches 1
    when the functions are orthogonal over the integration window.

    Raises
    ------
    ZeroNorm
        If either norm is below 1e-14.
    TailDominates
        If the estimated out-of-window contribution is comparable to
        the norms themselves.
    """
    val, _ = _distance_info(f, g, cfg or _DEFAULT_CFG, breakpoints)
    return val


def _n1_pair(p, sd, key):
    """Integrand pair (−iχ̃′ entry, (χ̃χ₊⁻¹χ̃) entry) for one matrix slot."""

    def deriv_side(w):
        c = chi_qq_vec(p, sd, w)
        cp = chi_qq_prime_vec(p, sd, w)
        if key == "qq":
            return -1j * cp
        if key == "qp":
            return c + w * cp
        return -1j * (2.0 * w * c + w * w * cp)

    def quadratic_side(w):
        c = chi_qq_vec(p, sd, w)
        if key == "qq":
            return -2j * w * c * c
        if key == "qp":
            return c + 2.0 * w * w * c * c
        return -2j * w * c - 2j * w ** 3 * c * c

    return (Integrand(deriv_side, "hermitian"),
            Integrand(quadratic_side, "hermitian"))


def _n2_pair(p, sd, key, cov0):
    """Integrand pair (exact spectrum entry, regression prediction)."""

    def exact_side(w):
        return exact_entries_vec(p, sd, np.asarray(w, dtype=float))[key]

    def rt_side(w):
        return rt_entries_vec(p, sd, np.asarray(w, dtype=float), cov0)[key]

    # ħ > 0 breaks the ω ↦ −ω symmetry of the exact spectrum
    return (Integrand(exact_side, "none", skip_check=True),
            Integrand(rt_side, "none", skip_check=True))


def _assemble(entries: dict[str, float]) -> np.ndarray:
    return np.array([[entries["qq"], entries["qp"]],
                     [entries["qp"], entries["pp"]]], dtype=float)


def _quantifier_matrix(p, sd, cfg, prefix, pair_factory):
    """Entrywise distances; qp and pq coincide by the entry structure
    (the two off-diagonal functions differ only by an overall sign or a
    complex conjugation, neither of which moves the distance)."""
    diagnostics: dict[str, EntryDiagnostics] = {}
    if is_decoupled(sd):
        zero = EntryDiagnostics(0.0, 0, False)
        for key in ("qq", "qp", "pq", "pp"):
            diagnostics[f"{prefix}_{key}"] = zero
        return np.zeros((2, 2)), diagnostics

    bps = feature_frequencies(p, sd)
    entries: dict[str, float] = {}
    for key in _ENTRY_KEYS:
        f, g = pair_factory(key)
        try:
            entries[key], diag = _distance_info(f, g, cfg, bps)
        except ZeroNorm:
            entries[key] = 0.0
            diag = EntryDiagnostics(0.0, 0, False)
        diagnostics[f"{prefix}_{key}"] = diag
    diagnostics[f"{prefix}_pq"] = diagnostics[f"{prefix}_qp"]
    return _assemble(entries), diagnostics


def divisibility_quantifier(p, sd: SpectralDensity,
                            cfg: QuadratureConfig | None = None):
    """First quantifier: distance between −i dχ̃/dω and χ̃ χ₊⁻¹ χ̃.

    Vanishes entrywise iff the mean propagator forms a divisible
    (semigroup) family; zero coupling returns the zero matrix.

    Returns (2×2 real array, diagnostics dict).
    """
    cfg = cfg or _DEFAULT_CFG
    return _quantifier_matrix(p, sd, cfg, "n1",
                              lambda key: _n1_pair(p, sd, key))


def regression_quantifier(p, sd: SpectralDensity,
                          cfg: QuadratureConfig | None = None):
    """Second quantifier: distance between the exact equilibrium
    correlation spectrum and the regression-theorem prediction.

    Propagates CutoffSensitive warnings from the underlying equal-time
    covariances (strict Ohmic bath with ħ > 0).

    Returns (2×2 real array, diagnostics dict).
    """
    cfg = cfg or _DEFAULT_CFG
    if is_decoupled(sd):
        return _quantifier_matrix(p, sd, cfg, "n2", None)
    cov0 = covariance0(p, sd, cfg)
    return _quantifier_matrix(p, sd, cfg, "n2",
                              lambda key: _n2_pair(p, sd, key, cov0))


def quantify(p, sd: SpectralDensity, cfg: QuadratureConfig | None = None,
             which: str = "both") -> QuantifierReport:
    """Compute the requested quantifier matrices with diagnostics.

    which ∈ {'n1', 'n2', 'both'}.
    """
    if which not in ("n1", "n2", "both"):
        raise ValueError(f"unknown quantifier selection {which!r}")
    cfg = cfg or _DEFAULT_CFG
    n1 = n2 = None
    diagnostics: dict[str, EntryDiagnostics] = {}
    if which in ("n1", "both"):
        n1, d = divisibility_quantifier(p, sd, cfg)
        diagnostics.update(d)
    if which in ("n2", "both"):
        n2, d = regression_quantifier(p, sd, cfg)
        diagnostics.update(d)
    return QuantifierReport(n1=n1, n2=n2, diagnostics=diagnostics)
