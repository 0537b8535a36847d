"""Resonance functions and the interaction-region partition.

The n-wave resonance function is Omega_n(xi_1..xi_n) = omega(sum xi_i) -
sum omega(xi_i).  Tuples are classified into near-resonant (R1), comparable
third-frequency (R2), non-resonant (N), and comparable-top (D1/D2) regions;
the classifier is a deterministic, exhaustive refinement of the containments
the asymptotic lower bounds permit, driven by PartitionConstants.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .spectral import DispersionSymbol


class UnclassifiableTupleError(ValueError):
    """A tuple landed in a default branch whose lower bound failed."""


@dataclass(frozen=True)
class PartitionConstants:
    """Threshold constants for the region partition.

    ``a >> b`` means |a| >= c_sep*|b|; its complement is ``a ~ b``.  The
    remaining constants witness the lower bounds asserted on the default
    branches; they only rescale implied constants and are configurable.
    """

    c_sep: float = 4.0
    c_r2: float = 0.1
    c_d1: float = 0.5
    c_n: float = 0.05
    c_d2: float = 0.01
    omega_tol: float = 1e-9


class RegionLabel(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    N = "N"
    D1 = "D1"
    D2 = "D2"

    @property
    def in_d(self) -> bool:
        return self in (RegionLabel.D1, RegionLabel.D2)


@dataclass(frozen=True)
class FreqTuple:
    """Ordered tuple of nonzero integer frequencies."""

    freqs: tuple[int, ...]

    def __post_init__(self):
        fr = tuple(int(x) for x in self.freqs)
        if len(fr) < 1:
            raise ValueError("empty frequency tuple")
        if any(x == 0 for x in fr):
            raise ValueError("frequency tuples must have nonzero entries")
        object.__setattr__(self, "freqs", fr)

    def __len__(self):
        return len(self.freqs)

    def __iter__(self):
        return iter(self.freqs)

    @property
    def total(self) -> int:
        return sum(self.freqs)

    def sorted_magnitudes(self) -> tuple[int, ...]:
        """Entries rearranged so |xi_1*| >= |xi_2*| >= ... (stable in position)."""
        return tuple(sorted(self.freqs, key=lambda x: -abs(x)))


def _as_freqs(t) -> tuple[int, ...]:
    if isinstance(t, FreqTuple):
        return t.freqs
    return tuple(int(x) for x in t)


def bracket(x: float) -> float:
    """Japanese bracket <x> = sqrt(1 + x^2)."""
    return math.sqrt(1.0 + float(x) * float(x))


def omega(xi: int, sym: DispersionSymbol):
    """Dispersion symbol omega(xi); rejects xi = 0."""
    if xi == 0:
        raise ValueError("omega is evaluated on nonzero frequencies")
    return sym.omega(xi)


def big_omega(t, sym: DispersionSymbol):
    """Resonance function Omega_n = omega(sum) - sum omega(xi_i).

    Accepts a FreqTuple or any iterable of ints; intermediate sums may be
    zero (omega(0) = 0).  Exact integer on the exact dispersion lanes.
    """
    fr = _as_freqs(t)
    total = sum(fr)
    acc = sym.omega(total)
    for x in fr:
        acc -= sym.omega(x)
    return acc


def rho(t) -> float:
    """min(<xi_1* + xi_2*>, <xi_2* + ... + xi_n*>) for n >= 2."""
    fr = _as_freqs(t)
    if len(fr) < 2:
        raise ValueError("rho needs at least two frequencies")
    stars = sorted(fr, key=lambda x: -abs(x))
    return min(bracket(stars[0] + stars[1]), bracket(sum(stars[1:])))


def _star_mags(fr: Sequence[int]) -> list[int]:
    return sorted((abs(x) for x in fr), reverse=True)


def _residual_bracket(fr: Sequence[int], total: int, top: int) -> float:
    """min over max-magnitude entries e of <total - e> (tie-robust)."""
    return min(bracket(total - x) for x in fr if abs(x) == top)


@lru_cache(maxsize=200_000)
def _classify(fr: tuple, sym: DispersionSymbol, c: PartitionConstants) -> RegionLabel:
    n = len(fr)
    total = sum(fr)
    mags = _star_mags(fr)
    if n == 2:
        return RegionLabel.N
    a = sym.exponent
    if n == 3:
        if any(x == total for x in fr):
            return RegionLabel.R1
        if mags[0] < c.c_sep * mags[2]:
            return RegionLabel.R2
        return RegionLabel.N
    x1, x2, x3, x4 = mags[0], mags[1], mags[2], mags[3]
    if x1 >= c.c_sep * x2:
        res = _residual_bracket(fr, total, x1)
        threshold = c.c_r2 * x1**a * res
        if any(x == total and abs(x) == x1 for x in fr) and x3**a * x4 < threshold:
            return RegionLabel.R1
        if x3**a * x4 >= threshold:
            return RegionLabel.R2
        om = abs(big_omega(fr, sym))
        if om < c.c_n * x1**a * res:
            raise UnclassifiableTupleError(
                f"tuple {fr}: non-resonant lower bound fails "
                f"(|Omega| = {om:.6g} < {c.c_n * x1 ** a * res:.6g})"
            )
        return RegionLabel.N
    if x3 >= c.c_d1 * abs(total):
        return RegionLabel.D1
    om = abs(big_omega(fr, sym))
    rr = rho(fr)
    if om < c.c_d2 * x1**a * rr:
        raise UnclassifiableTupleError(
            f"tuple {fr}: comparable-top lower bound fails "
            f"(|Omega| = {om:.6g} < {c.c_d2 * x1 ** a * rr:.6g})"
        )
    return RegionLabel.D2


def classify_region(
    t, sym: DispersionSymbol, c: PartitionConstants = PartitionConstants()
) -> RegionLabel:
    """Exhaustive, deterministic region label for a tuple with n >= 2."""
    fr = _as_freqs(t)
    if len(fr) < 2:
        raise ValueError("classification needs n >= 2")
    if any(x == 0 for x in fr):
        raise ValueError("frequency tuples must have nonzero entries")
    return _classify(fr, sym, c)


def classify_region_batch(
    tuples: np.ndarray, sym: DispersionSymbol, c: PartitionConstants
):
    """Vectorized classifier for an (n_rows, n) int array, n >= 4.

    Returns (labels, bound_violated) where labels is an array of region
    names and bound_violated flags rows whose default-branch lower bound
    fails (instead of raising, so scans can collect them).
    """
    t = np.asarray(tuples, dtype=np.int64)
    n_rows, n = t.shape
    if n < 4:
        raise ValueError("batch classification is for n >= 4")
    a = sym.exponent
    mags = -np.sort(-np.abs(t), axis=1)
    x1, x2, x3, x4 = mags[:, 0], mags[:, 1], mags[:, 2], mags[:, 3]
    total = t.sum(axis=1)

    # residual bracket: min over max-magnitude entries of <total - entry>
    is_top = np.abs(t) == x1[:, None]
    diff = total[:, None] - t
    br = np.sqrt(1.0 + diff.astype(float) ** 2)
    br[~is_top] = np.inf
    res = br.min(axis=1)

    omega_all = sym.omega_array(total) - sym.omega_array(t).sum(axis=1)
    sep = x1 >= c.c_sep * x2
    x1a = x1.astype(float) ** a
    threshold = c.c_r2 * x1a * res
    sum_is_top = np.logical_and(is_top, diff == 0).any(axis=1)
    small34 = x3.astype(float) ** a * x4 < threshold

    labels = np.empty(n_rows, dtype="U2")
    violated = np.zeros(n_rows, dtype=bool)

    r1 = sep & sum_is_top & small34
    r2 = sep & ~r1 & ~small34
    nn = sep & ~r1 & ~r2
    labels[r1] = "R1"
    labels[r2] = "R2"
    labels[nn] = "N"
    violated |= nn & (np.abs(omega_all) < c.c_n * x1a * res)

    d1 = ~sep & (x3 >= c.c_d1 * np.abs(total))
    d2 = ~sep & ~d1
    labels[d1] = "D1"
    labels[d2] = "D2"
    # rho = min(<xi1*+xi2*>, <sum - xi1*>) needs signed stars; recover them:
    order = np.argsort(-np.abs(t), kind="stable", axis=1)
    sorted_signed = np.take_along_axis(t, order, axis=1)
    s12 = sorted_signed[:, 0] + sorted_signed[:, 1]
    tail = total - sorted_signed[:, 0]
    rho_all = np.minimum(
        np.sqrt(1.0 + s12.astype(float) ** 2), np.sqrt(1.0 + tail.astype(float) ** 2)
    )
    violated |= d2 & (np.abs(omega_all) < c.c_d2 * x1a * rho_all)
    return labels, violated


# ---------------------------------------------------------------------------
# Lemma bound scans


@dataclass
class ScanReport:
    """Empirical extremes of a lemma ratio over an enumerated box."""

    lemma: str
    range: int
    alpha: float
    ratio_min: float = math.inf
    ratio_max: float = -math.inf
    argmin_tuple: tuple = ()
    argmax_tuple: tuple = ()
    violations: list = field(default_factory=list)

    def update(self, ratio: float, t: tuple):
        if ratio < self.ratio_min:
            self.ratio_min, self.argmin_tuple = ratio, t
        if ratio > self.ratio_max:
            self.ratio_max, self.argmax_tuple = ratio, t

    CSV_COLUMNS = (
        "lemma",
        "range",
        "alpha",
        "ratio_min",
        "ratio_max",
        "argmin_tuple",
        "argmax_tuple",
        "violations",
    )

    def csv_row(self) -> dict:
        fmt = lambda t: " ".join(str(x) for x in t)
        return {
            "lemma": self.lemma,
            "range": self.range,
            "alpha": self.alpha,
            "ratio_min": repr(self.ratio_min),
            "ratio_max": repr(self.ratio_max),
            "argmin_tuple": fmt(self.argmin_tuple),
            "argmax_tuple": fmt(self.argmax_tuple),
            "violations": "; ".join(fmt(v) for v in self.violations),
        }


def write_scan_csv(reports: Iterable[ScanReport], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=ScanReport.CSV_COLUMNS)
    writer.writeheader()
    for r in reports:
        writer.writerow(r.csv_row())


def scan_csv_text(reports: Iterable[ScanReport]) -> str:
    buf = io.StringIO()
    write_scan_csv(reports, buf)
    return buf.getvalue()


def _nonzero_range(r: int):
    return [x for x in range(-r, r + 1) if x != 0]


def _scan_l21(r: int, sym: DispersionSymbol, report: ScanReport):
    vals = np.array(_nonzero_range(r), dtype=np.int64)
    x1 = vals[:, None].repeat(len(vals), 1)
    x2 = vals[None, :].repeat(len(vals), 0)
    s = x1 + x2
    m = np.minimum(np.abs(s), np.minimum(np.abs(x1), np.abs(x2)))
    om = sym.omega_array(s) - sym.omega_array(x1) - sym.omega_array(x2)
    top = np.maximum(np.abs(x1), np.abs(x2)).astype(float)
    keep = m > 0
    ratio = np.abs(om[keep]) / (top[keep] ** sym.exponent * m[keep])
    i_min, i_max = int(np.argmin(ratio)), int(np.argmax(ratio))
    pairs = np.stack([x1[keep], x2[keep]], axis=1)
    report.update(float(ratio[i_min]), tuple(int(v) for v in pairs[i_min]))
    report.update(float(ratio[i_max]), tuple(int(v) for v in pairs[i_max]))


def _scan_l22(r: int, sym: DispersionSymbol, report: ScanReport):
    vals = _nonzero_range(r)
    a = sym.exponent
    for t in itertools.product(vals, repeat=3):
        p = sorted((abs(t[0] + t[1]), abs(t[1] + t[2]), abs(t[0] + t[2])))
        if p[0] == 0:
            continue
        denom = p[2] ** (a - 1) * p[1] * p[0]
        om = abs(big_omega(t, sym))
        report.update(om / denom, t)


def _signed_values_by_mag(r: int) -> list[int]:
    out = []
    for m in range(r, 0, -1):
        out.extend((m, -m))
    return out


def _scan_l23(
    r: int, sym: DispersionSymbol, c: PartitionConstants, report: ScanReport, n: int
):
    """Search for tuples the classifier cannot place (must find none).

    Classification is permutation-invariant, so only magnitude-sorted
    representatives are enumerated; batches run through the vectorized
    classifier.
    """
    values = _signed_values_by_mag(r)
    chunk = []
    it = itertools.combinations_with_replacement(values, n)

    def flush():
        if not chunk:
            return
        arr = np.array(chunk, dtype=np.int64)
        _, bad = classify_region_batch(arr, sym, c)
        for row in arr[bad]:
            report.violations.append(tuple(int(v) for v in row))
        chunk.clear()

    for t in it:
        chunk.append(t)
        if len(chunk) >= 1_000_000:
            flush()
    flush()
    report.ratio_min = 0.0 if report.violations else math.inf
    report.ratio_max = float(len(report.violations))


def bound_scan(
    lemma: str,
    scan_range: int,
    sym: DispersionSymbol,
    c: PartitionConstants = PartitionConstants(),
    tuple_len: int = 4,
    k_list: tuple = (2, 2),
) -> ScanReport:
    """Enumerate a box |xi_i| <= scan_range and report ratio extremes.

    lemma in {"L2_1", "L2_2", "L2_3", "L5_1", "L5_2"}.  Cost grows like
    scan_range**n; keep ranges desk-scale.  L2_3 reports classifier
    violations (empty list expected) instead of a ratio.
    """
    report = ScanReport(lemma=lemma, range=scan_range, alpha=sym.exponent)
    if lemma == "L2_1":
        _scan_l21(scan_range, sym, report)
    elif lemma == "L2_2":
        _scan_l22(scan_range, sym, report)
    elif lemma == "L2_3":
        _scan_l23(scan_range, sym, c, report, tuple_len)
    elif lemma in ("L5_1", "L5_2"):
        from . import multipliers  # symbol scans live beside the recursion

        multipliers.symbol_scan(lemma, scan_range, sym, c, k_list, report)
    else:
        raise ValueError(f"unknown lemma {lemma!r}")
    return report
