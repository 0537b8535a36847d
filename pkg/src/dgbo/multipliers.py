"""Normal-form multiplier symbols.

The differentiation-by-parts iteration builds, level by level, symbols on
frequency tuples: a window of k entries is collapsed to its sum (the
elongation), the collapsed parent is restricted to the non-resonant region
and divided by its resonance function, and the window carries a sign-fixed
gauge weight phi_k.  The recursion core C is real-valued; the public
mu/mfrak values attach the printed normalization i^{(n mod 2)} (resp.
i^{(m mod 2)} per expansion level), while assembled term weights attach the
phases that make the Duhamel decomposition an identity and keep every term
Hermitian (real fields map to real fields).

Evaluation is per-tuple and memoized; ``cutoff`` restricts every collapsed
window sum to the resolved band, which is exactly the recursion the
Galerkin-truncated dynamics generates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import ComplexFraction
from .resonance import (
    PartitionConstants,
    RegionLabel,
    ScanReport,
    big_omega,
    classify_region,
)
from .spectral import DispersionSymbol


@dataclass(frozen=True)
class PolynomialSpec:
    """P(x) = sum_k coeffs[k-1] x^k with deg(P) >= 2 and leading c_d != 0."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        cs = tuple(float(v) for v in self.coeffs)
        if len(cs) < 2 or cs[-1] == 0:
            raise ValueError("polynomial must have degree >= 2 with c_d != 0")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def c(self, k: int) -> float:
        return self.coeffs[k - 1]

    def __call__(self, x):
        acc = 0.0
        for ck in reversed(self.coeffs):
            acc = (acc + ck) * x
        return acc

    def derivative(self, x):
        acc = 0.0
        for k in range(self.degree, 0, -1):
            acc = acc * x + k * self.coeffs[k - 1]
        return acc

    def antiderivative(self, x):
        """F(x) = int_0^x P, integrated termwise."""
        acc = 0.0
        for k in range(self.degree, 0, -1):
            acc = (acc + self.coeffs[k - 1] / (k + 1)) * x
        return acc * x


def nu_levels(k_list: tuple[int, ...]) -> tuple[int, ...]:
    """(nu_0, ..., nu_n): nu_0 = k_0, nu_i = nu_{i-1} + k_i - 1."""
    out = [k_list[0]]
    for k in k_list[1:]:
        out.append(out[-1] + k - 1)
    return tuple(out)


_PLAIN_KINDS = ("B", "R1", "R2", "D", "N")
_FRAK_KINDS = ("FrakB", "FrakR", "FrakN")


@dataclass(frozen=True)
class TermSpec:
    """One term of the iterated decomposition.

    kind B/R1/R2/D/N uses the mu recursion on k_list = (k_0..k_n); the
    Frak kinds additionally expand through l_list = (l_1..l_m).
    """

    kind: str
    k_list: tuple[int, ...]
    l_list: tuple[int, ...] = ()
    d: int = 2

    def __post_init__(self):
        if self.kind not in _PLAIN_KINDS + _FRAK_KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}")
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))
        object.__setattr__(self, "l_list", tuple(int(l) for l in self.l_list))
        if not self.k_list:
            raise ValueError("k_list must be nonempty")
        for k in self.k_list + self.l_list:
            if not 1 <= k <= self.d:
                raise ValueError(f"index {k} outside [d] = [1..{self.d}]")
        if self.kind in _PLAIN_KINDS and self.l_list:
            raise ValueError(f"kind {self.kind} takes no l_list")
        if self.nu_nm < 1:
            raise ValueError("term arity must be >= 1")

    @property
    def n(self) -> int:
        return len(self.k_list) - 1

    @property
    def m(self) -> int:
        return len(self.l_list)

    @property
    def nu_n(self) -> int:
        return nu_levels(self.k_list)[-1]

    @property
    def nu_nm(self) -> int:
        return self.nu_n + sum(l - 1 for l in self.l_list)

    @property
    def coefficient_indices(self) -> tuple[int, ...]:
        """Indices whose polynomial coefficients multiply this term."""
        return self.k_list + self.l_list


def phi_k(t) -> int:
    """Gauge weight: 1 minus the number of entries equal to the full sum."""
    fr = tuple(int(x) for x in t)
    if len(fr) < 2:
        raise ValueError("phi_k needs k >= 2")
    if any(x == 0 for x in fr):
        raise ValueError("phi_k rejects zero entries")
    return _phi(fr)


def _phi(fr: tuple[int, ...]) -> int:
    if any(x == 0 for x in fr):
        return 0
    s = sum(fr)
    return 1 - sum(1 for x in fr if x == s)


def elongate(f, k: int, j: int):
    """Substitute the sum of slots j..j+k-1 into slot j of the symbol f."""
    if k < 1 or j < 1:
        raise ValueError("elongation needs k >= 1 and j >= 1")
    if k == 1:
        return f

    def elongated(t):
        fr = tuple(t)
        if j + k - 1 > len(fr):
            raise ValueError(
                f"elongation window {j}..{j + k - 1} exceeds arity {len(fr)}"
            )
        collapsed = fr[: j - 1] + (sum(fr[j - 1 : j - 1 + k]),) + fr[j - 1 + k :]
        return f(collapsed)

    return elongated


def _is_resonant(om, sym: DispersionSymbol, c: PartitionConstants) -> bool:
    if sym.is_exact:
        return om == 0
    return abs(om) < c.omega_tol


@lru_cache(maxsize=None)
def _core_component(
    k_list: tuple[int, ...],
    j_list: tuple[int, ...],
    freqs: tuple[int, ...],
    sym: DispersionSymbol,
    c: PartitionConstants,
    cutoff: int | None,
    exact: bool,
):
    """Unphased recursion core; real-valued (Fraction when exact)."""
    if len(j_list) != len(k_list) - 1:
        raise ValueError("j_list must have one index per iteration level")
    if len(k_list) == 1:
        if len(freqs) != k_list[0]:
            raise ValueError(f"expected arity {k_list[0]}, got {len(freqs)}")
        val = _phi(freqs) if k_list[0] >= 2 else 0
        return Fraction(val) if exact else float(val)
    j, k = j_list[-1], k_list[-1]
    levels = nu_levels(k_list)
    if len(freqs) != levels[-1]:
        raise ValueError(f"expected arity {levels[-1]}, got {len(freqs)}")
    if not 1 <= j <= levels[-2]:
        raise ValueError(f"window index {j} outside 1..{levels[-2]}")
    window = freqs[j - 1 : j - 1 + k]
    s = sum(window)
    if s == 0:
        return Fraction(0) if exact else 0.0
    if cutoff is not None and abs(s) > cutoff:
        return Fraction(0) if exact else 0.0
    phi = _phi(window)
    if phi == 0:
        return Fraction(0) if exact else 0.0
    parent = freqs[: j - 1] + (s,) + freqs[j - 1 + k :]
    if classify_region(parent, sym, c) is not RegionLabel.N:
        return Fraction(0) if exact else 0.0
    om = big_omega(parent, sym)
    if _is_resonant(om, sym, c):
        return Fraction(0) if exact else 0.0
    parent_val = _core_component(
        k_list[:-1], j_list[:-1], parent, sym, c, cutoff, exact
    )
    if exact:
        return Fraction(s * phi) * parent_val / om
    return s * phi * parent_val / om


@lru_cache(maxsize=None)
def _core_total(
    k_list: tuple[int, ...],
    freqs: tuple[int, ...],
    sym: DispersionSymbol,
    c: PartitionConstants,
    cutoff: int | None,
    exact: bool,
):
    """Sum of the recursion core over the full window-index lattice."""
    levels = nu_levels(k_list)
    total = Fraction(0) if exact else 0.0
    for j_list in itertools.product(*(range(1, v + 1) for v in levels[:-1])):
        total += _core_component(k_list, j_list, freqs, sym, c, cutoff, exact)
    return total


def _mu_phase(n: int, value, exact: bool):
    """Printed normalization: level-n mu carries i^(n mod 2)."""
    if n % 2 == 0:
        return ComplexFraction(value, 0) if exact else complex(value)
    return ComplexFraction(0, value) if exact else 1j * value


def mu_component(
    k_list,
    j_list,
    t,
    sym: DispersionSymbol,
    c: PartitionConstants = PartitionConstants(),
    cutoff: int | None = None,
    exact: bool | None = None,
):
    """One window-index component of the level-n multiplier."""
    k_list, j_list, fr = tuple(k_list), tuple(j_list), tuple(t)
    if exact is None:
        exact = sym.is_exact
    core = _core_component(k_list, j_list, fr, sym, c, cutoff, exact)
    return _mu_phase(len(k_list) - 1, core, exact)


def mu_total(
    k_list,
    t,
    sym: DispersionSymbol,
    c: PartitionConstants = PartitionConstants(),
    cutoff: int | None = None,
    exact: bool | None = None,
):
    """Level-n multiplier: component sum over the window-index lattice."""
    k_list, fr = tuple(k_list), tuple(t)
    if exact is None:
        exact = sym.is_exact
    core = _core_total(k_list, fr, sym, c, cutoff, exact)
    return _mu_phase(len(k_list) - 1, core, exact)


# ---------------------------------------------------------------------------
# Iterated expansion of the comparable-top terms


def in_frak_r(t, sym: DispersionSymbol, c: PartitionConstants) -> bool:
    """Expansion-level residue region: large third frequency or resonant."""
    fr = tuple(t)
    mags = sorted((abs(x) for x in fr), reverse=True)
    if len(mags) >= 3 and mags[2] >= c.c_d1 * abs(sum(fr)):
        return True
    return _is_resonant(big_omega(fr, sym), sym, c)


def in_frak_n(t, sym: DispersionSymbol, c: PartitionConstants) -> bool:
    return not in_frak_r(t, sym, c)


def _frak_parent_ok(
    parent, level: int, sym: DispersionSymbol, c: PartitionConstants
) -> bool:
    """Level-0 parents must sit in D2; deeper parents in the frak-N region."""
    if level == 0:
        return classify_region(parent, sym, c) is RegionLabel.D2
    return in_frak_n(parent, sym, c)


@lru_cache(maxsize=None)
def _frak_core(
    k_list: tuple[int, ...],
    l_list: tuple[int, ...],
    freqs: tuple[int, ...],
    sym: DispersionSymbol,
    c: PartitionConstants,
    cutoff: int | None,
    exact: bool,
):
    """Expansion core; the window-index sum sits inside each level."""
    if not l_list:
        return _core_total(k_list, freqs, sym, c, cutoff, exact)
    m = len(l_list)
    l = l_list[-1]
    base = nu_levels(k_list)[-1]
    parent_len = base + sum(v - 1 for v in l_list[:-1])
    if len(freqs) != parent_len + l - 1:
        raise ValueError(f"expected arity {parent_len + l - 1}, got {len(freqs)}")
    total = Fraction(0) if exact else 0.0
    for j in range(1, parent_len + 1):
        window = freqs[j - 1 : j - 1 + l]
        s = sum(window)
        if s == 0:
            continue
        if cutoff is not None and abs(s) > cutoff:
            continue
        phi = _phi(window)
        if phi == 0:
            continue
        parent = freqs[: j - 1] + (s,) + freqs[j - 1 + l :]
        if not _frak_parent_ok(parent, m - 1, sym, c):
            continue
        om = big_omega(parent, sym)
        if _is_resonant(om, sym, c):
            continue
        parent_val = _frak_core(k_list, l_list[:-1], parent, sym, c, cutoff, exact)
        if exact:
            total += Fraction(s * phi) * parent_val / om
        else:
            total += s * phi * parent_val / om
    return total


def mfrak(
    k_list,
    l_list,
    t,
    sym: DispersionSymbol,
    c: PartitionConstants = PartitionConstants(),
    cutoff: int | None = None,
    exact: bool | None = None,
):
    """Iterated-expansion multiplier; l_list = () reduces to mu_total."""
    k_list, l_list, fr = tuple(k_list), tuple(l_list), tuple(t)
    if exact is None:
        exact = sym.is_exact
    core = _frak_core(k_list, l_list, fr, sym, c, cutoff, exact)
    n, m = len(k_list) - 1, len(l_list)
    return _mu_phase(n + m, core, exact)


# ---------------------------------------------------------------------------
# Assembled per-tuple term weights


def _leaf_indicator(term: TermSpec, fr, sym, c) -> bool:
    label = None
    if term.kind in _PLAIN_KINDS:
        label = classify_region(fr, sym, c)
        return {
            "B": label is RegionLabel.N,
            "N": label is RegionLabel.N,
            "R1": label is RegionLabel.R1,
            "R2": label is RegionLabel.R2,
            "D": label.in_d,
        }[term.kind]
    if term.m == 0:
        label = classify_region(fr, sym, c)
        if term.kind == "FrakR":
            return label is RegionLabel.D1
        return label is RegionLabel.D2
    if term.kind == "FrakR":
        return in_frak_r(fr, sym, c)
    return in_frak_n(fr, sym, c)


def term_symbol(
    term: TermSpec,
    t,
    sym: DispersionSymbol,
    c: PartitionConstants = PartitionConstants(),
    cutoff: int | None = None,
    exact: bool | None = None,
):
    """Per-tuple weight w(xi_1..xi_nu) of one decomposition term.

    The term's coefficient at xi is sum_{xi_1+..+xi_nu = xi} w * prod uhat.
    Boundary kinds (B, FrakB) divide by the leaf resonance function with
    resonant tuples skipped; output mode xi = 0 is identically zero.
    """
    fr = tuple(int(x) for x in t)
    if len(fr) != term.nu_nm:
        raise ValueError(f"term arity {term.nu_nm} != tuple length {len(fr)}")
    if exact is None:
        exact = sym.is_exact
    zero = ComplexFraction(0, 0) if exact else 0.0j
    if len(fr) < 2 or any(x == 0 for x in fr):
        return zero
    xi = sum(fr)
    if xi == 0:
        return zero
    if not _leaf_indicator(term, fr, sym, c):
        return zero
    if term.kind in _PLAIN_KINDS:
        core = _core_total(term.k_list, fr, sym, c, cutoff, exact)
        n = term.n
        if term.kind == "B":
            om = big_omega(fr, sym)
            if _is_resonant(om, sym, c):
                return zero
            sign = -1 if n % 2 else 1
            if exact:
                return ComplexFraction(Fraction(sign * xi) * core / om, 0)
            return complex(sign * xi * core / om)
        sign = 1 if n % 2 else -1
        if exact:
            return ComplexFraction(0, Fraction(sign * xi) * core)
        return 1j * (sign * xi * core)
    core = _frak_core(term.k_list, term.l_list, fr, sym, c, cutoff, exact)
    p = term.n + term.m
    if term.kind == "FrakB":
        om = big_omega(fr, sym)
        if _is_resonant(om, sym, c):
            return zero
        sign = -1 if p % 2 else 1
        if exact:
            return ComplexFraction(Fraction(sign * xi) * core / om, 0)
        return complex(sign * xi * core / om)
    sign = 1 if p % 2 else -1
    if exact:
        return ComplexFraction(0, Fraction(sign * xi) * core)
    return 1j * (sign * xi * core)


def multiset_arrangements(K) -> list[tuple[int, ...]]:
    """Distinct orderings of the multiset K of window sizes."""
    return sorted(set(itertools.permutations(sorted(K))))


def r1_symmetrized_symbol(
    K,
    t,
    sym: DispersionSymbol,
    c: PartitionConstants = PartitionConstants(),
    exact: bool | None = None,
):
    """Fully symmetrized near-resonant symbol for the window multiset K.

    Averages the R1 term weight over all tuple orderings and all distinct
    arrangements of K; the average has the same action on symmetric
    products and is the representative the cancellation bounds control.
    Supported inside the leaf near-resonant region only.
    """
    fr = tuple(int(x) for x in t)
    sizes = tuple(sorted(K))
    arity = 1 + sum(k - 1 for k in sizes)
    if len(fr) != arity:
        raise ValueError(f"multiset {sizes} acts on {arity}-tuples")
    if exact is None:
        exact = sym.is_exact
    d = max(sizes)
    total = ComplexFraction(0, 0) if exact else 0.0j
    count = 0
    for perm in itertools.permutations(fr):
        for theta in multiset_arrangements(sizes):
            term = TermSpec("R1", theta, d=d)
            total = total + term_symbol(term, perm, sym, c, exact=exact)
            count += 1
    if exact:
        return total / count
    return total / count


# ---------------------------------------------------------------------------
# Symbol bound scans (same report schema as the resonance scans)


def _nonzero_range(r: int):
    return [x for x in range(-r, r + 1) if x != 0]


def symbol_scan(
    lemma: str,
    scan_range: int,
    sym: DispersionSymbol,
    c: PartitionConstants,
    k_list: tuple,
    report: ScanReport,
) -> None:
    """Pointwise multiplier bounds over a finite box.

    L5_1: sup |mu_{k_list}| * |sum xi|^{n(alpha-1)} is finite.
    L5_2: sup over the comparable-third region of |mu_{2,2}| * |xi_1*|^alpha.
    """
    a = sym.exponent
    vals = _nonzero_range(scan_range)
    if lemma == "L5_1":
        k_list = tuple(k_list)
        n = len(k_list) - 1
        arity = nu_levels(k_list)[-1]
        for t in itertools.product(vals, repeat=arity):
            s = sum(t)
            if s == 0:
                continue
            m = abs(complex(mu_total(k_list, t, sym, c, exact=False)))
            if m == 0:
                continue
            report.update(m * abs(s) ** (n * (a - 1)), t)
    elif lemma == "L5_2":
        for t in itertools.product(vals, repeat=3):
            if classify_region(t, sym, c) is not RegionLabel.R2:
                continue
            m = abs(complex(mu_total((2, 2), t, sym, c, exact=False)))
            if m == 0:
                continue
            x1 = max(abs(x) for x in t)
            report.update(m * x1**a, t)
    else:
        raise ValueError(f"unknown symbol scan {lemma!r}")


def _r1_bound_ratio(sizes, t, value, a):
    """Ratio of |m| to its symmetrized pointwise bound shape."""
    mags = sorted((abs(x) for x in t), reverse=True)
    n_windows = len(sizes)
    if sizes == (2, 2):
        return value * mags[0] ** (a - 1)
    base = value * mags[0] ** ((n_windows - 1) * (a - 1)) / mags[1]
    if set(sizes) <= {2, 3}:
        return base
    return base / mags[3] ** (1.0 / a)


def r1_symmetrized_scan(
    K, scan_range: int, sym: DispersionSymbol, c: PartitionConstants = PartitionConstants()
) -> ScanReport:
    """Scan of the symmetrized near-resonant symbol against its bound shape.

    The leaf support forces the entries off the output mode to sum to zero,
    so only the zero-sum complements are enumerated: (xi, eta, -eta) for
    arity 3 and (xi, a, b, -a-b) for arity 4.
    """
    sizes = tuple(sorted(K))
    arity = 1 + sum(k - 1 for k in sizes)
    a = sym.exponent
    report = ScanReport(
        lemma=f"R1_sym_{'_'.join(map(str, sizes))}", range=scan_range, alpha=a
    )
    if arity == 3:
        rests = (
            (eta, -eta) for eta in _nonzero_range(scan_range)
        )
    elif arity == 4:
        rests = (
            (p, q, -p - q)
            for p in _nonzero_range(scan_range)
            for q in _nonzero_range(scan_range)
            if p + q != 0 and abs(p + q) <= scan_range
        )
    else:
        raise NotImplementedError("symmetrized scans cover arity 3 and 4")
    rests = list(rests)
    for xi in _nonzero_range(scan_range):
        for rest in rests:
            t = (xi,) + rest
            m = abs(complex(r1_symmetrized_symbol(sizes, t, sym, c, exact=False)))
            if m == 0:
                continue
            report.update(_r1_bound_ratio(sizes, t, m, a), t)
    return report


def clear_symbol_caches() -> None:
    """Drop the memoized recursion tables (mainly for long-running sweeps)."""
    _core_component.cache_clear()
    _core_total.cache_clear()
    _frak_core.cache_clear()
