"""Complete exponential sums mod q, the singular series, and local counts.

Every phase here is an exact rational j/q, so sums are evaluated from a
root-of-unity table (or equivalently a DFT of the phase histogram) and the
only error is final-rounding in the trigonometric table itself.

The central identity tying the two local viewpoints together: with
B(q) = sum over primitive (q, r2, r3) of T(q, r), the congruence count
M(q) satisfies M(p^t) = p^(t(s-2)) * sum_{h <= t} B(p^h).  Both sides are
computed independently and compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Optional

import numpy as np

from .budget import DEFAULT_LEDGER_BUDGET, BudgetError, check_budget
from .systems import DiagonalSystem

_MAX_Q_DIRECT = 10_000


def _components(sys: DiagonalSystem) -> list[tuple[str, int, int]]:
    """(kind, cubic phase coefficient, quadratic phase coefficient) per factor."""
    comps = [("f", ai, bi) for ai, bi in zip(sys.a, sys.b)]
    comps += [("g", cj, 0) for cj in sys.c]
    comps += [("h", 0, dk) for dk in sys.d]
    return comps


@lru_cache(maxsize=256)
def _unity_table(q: int) -> tuple[np.ndarray, np.ndarray]:
    ang = 2.0 * math.pi * np.arange(q) / q
    return np.cos(ang), np.sin(ang)


@dataclass(frozen=True)
class CompleteSum:
    kind: str
    q: int
    r2: int
    r3: int
    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def complete_sum(kind: str, q: int, r2: int, r3: int, coeffs) -> CompleteSum:
    """Direct q-term evaluation of S_kind(q, r) from the unity table.

    coeffs is (a, b) for kind f, a single c for kind g, a single d for
    kind h (tuples of length one are accepted).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if q > _MAX_Q_DIRECT:
        raise BudgetError(q, _MAX_Q_DIRECT, "complete sum modulus")
    if kind == "f":
        A3, A2 = coeffs
    elif kind == "g":
        (A3,) = coeffs if isinstance(coeffs, (tuple, list)) else (coeffs,)
        A2 = 0
    elif kind == "h":
        (A2,) = coeffs if isinstance(coeffs, (tuple, list)) else (coeffs,)
        A3 = 0
    else:
        raise ValueError(f"unknown kind {kind!r}")
    u = np.arange(1, q + 1, dtype=np.int64)
    c3 = (A3 % q) * (r3 % q) % q
    c2 = (A2 % q) * (r2 % q) % q
    idx = (c3 * (u**3 % q) + c2 * (u * u % q)) % q
    cos, sin = _unity_table(q)
    value = complex(math.fsum(cos[idx]), math.fsum(sin[idx]))
    return CompleteSum(kind, q, r2 % q, r3 % q, value)


def t_factor(sys: DiagonalSystem, q: int, r2: int, r3: int) -> complex:
    """q^(-s) times the product of all component complete sums."""
    if math.gcd(math.gcd(q, r2), r3) != 1:
        raise ValueError("(q, r2, r3) must be coprime as a triple")
    prod = complex(1.0)
    for kind, A3, A2 in _components(sys):
        if kind == "f":
            cs = complete_sum("f", q, r2, r3, (A3, A2))
        elif kind == "g":
            cs = complete_sum("g", q, r2, r3, (A3,))
        else:
            cs = complete_sum("h", q, r2, r3, (A2,))
        prod *= cs.value
    return prod * float(q) ** (-sys.s)


# -- tabulated route: all residues of one modulus at once ----------------

def _component_table(q: int, A3: int, A2: int) -> np.ndarray:
    """S[r2, r3] for one component, via the DFT of its phase histogram."""
    u = np.arange(1, q + 1, dtype=np.int64)
    j2 = (A2 % q) * (u * u % q) % q
    j3 = (A3 % q) * (u**3 % q) % q
    hist = np.zeros((q, q))
    np.add.at(hist, (j2, j3), 1.0)
    return q * q * np.fft.ifft2(hist)


def _t_table(sys: DiagonalSystem, q: int) -> np.ndarray:
    cache: dict = {}
    prod = np.full((q, q), float(q) ** (-sys.s), dtype=complex)
    for _, A3, A2 in _components(sys):
        key = (A3 % q, A2 % q)
        if key not in cache:
            cache[key] = _component_table(q, A3, A2)
        prod = prod * cache[key]
    return prod


def _primitive_mask(q: int) -> np.ndarray:
    r = np.arange(q)
    return np.gcd.outer(np.gcd(r, q), r) == 1


@dataclass
class LocalFactor:
    Q: int
    value: float  # real part of the height-Q partial series
    imag: float  # residual imaginary part, conjugate symmetry makes it ~0
    A: dict = field(default_factory=dict)  # q -> sum of |T| over primitive r
    B: dict = field(default_factory=dict)  # q -> sum of T  over primitive r
    partials: Optional[np.ndarray] = None  # running sums, index q-1
    chi: dict = field(default_factory=dict)


def singular_series(sys: DiagonalSystem, Q: int, cap: int = 500) -> LocalFactor:
    """Partial singular series through modulus Q, with per-q diagnostics."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if Q > cap:
        raise BudgetError(Q, cap, "singular series height")
    A: dict = {}
    B: dict = {}
    running = np.empty(Q)
    total = complex(0.0)
    for q in range(1, Q + 1):
        vals = _t_table(sys, q)[_primitive_mask(q)]
        A[q] = float(np.abs(vals).sum())
        bsum = complex(vals.sum())
        B[q] = bsum.real
        total += bsum
        running[q - 1] = total.real
    return LocalFactor(Q=Q, value=total.real, imag=total.imag, A=A, B=B, partials=running)


# -- congruence counts ---------------------------------------------------

@dataclass(frozen=True)
class CongruenceCount:
    q: int
    M: int


def _fold_vars(q: int, comps) -> np.ndarray:
    """Ledger over (Phi mod q, Theta mod q), one variable folded at a time.

    int64 until counts could reach 2^62, then object dtype keeps exactness;
    np.roll implements the cyclic key shift of each variable value.
    """
    arr = np.zeros((q, q), dtype=np.int64)
    arr[0, 0] = 1
    bound = 1
    for A3, A2 in comps:
        bound *= q
        if bound >= 2**62 and arr.dtype != object:
            arr = arr.astype(object)
        new = np.zeros_like(arr)
        for u in range(q):
            d3 = (A3 * u**3) % q
            d2 = (A2 * u * u) % q
            new += np.roll(np.roll(arr, d2, axis=0), d3, axis=1)
        arr = new
    return arr


def count_congruences(sys: DiagonalSystem, q: int, budget: int = DEFAULT_LEDGER_BUDGET) -> CongruenceCount:
    """Exact M(q) by meeting two half-variable ledgers in the middle."""
    if q < 1:
        raise ValueError("q must be >= 1")
    check_budget(sys.s * q**3, budget, what="congruence ledger")
    comps = [(A3, A2) for _, A3, A2 in _components(sys)]
    half = len(comps) // 2
    left = _fold_vars(q, comps[:half])
    right = _fold_vars(q, comps[half:])
    if q**sys.s >= 2**62:
        left = left.astype(object)
        right = right.astype(object)
    # right at negated keys: flip both axes, then shift 1 to fix residue 0
    neg = np.roll(np.roll(right[::-1, ::-1], 1, axis=0), 1, axis=1)
    return CongruenceCount(q, int((left * neg).sum()))


@dataclass(frozen=True)
class ChiPartial:
    p: int
    t: int
    series_side: float
    count_side: float
    M: int

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.series_side), abs(self.count_side), 1e-300)
        return abs(self.series_side - self.count_side) / scale


def chi_p_partial(sys: DiagonalSystem, p: int, t: int) -> ChiPartial:
    """Both sides of sum_{h<=t} B(p^h) = p^(-t(s-2)) M(p^t)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    total = complex(1.0)  # h = 0 term
    for h in range(1, t + 1):
        q = p**h
        vals = _t_table(sys, q)[_primitive_mask(q)]
        total += complex(vals.sum())
    M = count_congruences(sys, p**t).M
    count_side = M / float(p) ** (t * (sys.s - 2))
    return ChiPartial(p, t, total.real, count_side, M)


# -- p-adic witnesses ----------------------------------------------------

@dataclass(frozen=True)
class PadicWitness:
    p: int
    found: bool
    solution: Optional[tuple[int, ...]]
    k: Optional[int]
    minor_valuation: Optional[int]
    w_estimate: int
    t_checked: tuple[int, ...]
    inequality_ok: bool


def _valuation(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def _best_minor_valuation(sys: DiagonalSystem, x, p: int, cap: int) -> int:
    cubic = sys.cubic_coeffs()
    quad = sys.quad_coeffs()
    g3 = [3 * cubic[i] * x[i] * x[i] for i in range(sys.s)]
    g2 = [2 * quad[i] * x[i] for i in range(sys.s)]
    best = cap
    for i in range(sys.s):
        for j in range(i + 1, sys.s):
            minor = g3[i] * g2[j] - g3[j] * g2[i]
            best = min(best, _valuation(minor, p, cap))
            if best == 0:
                return 0
    return best


def _grid_candidates(sys: DiagonalSystem, pk: int, tail) -> list[tuple[int, ...]]:
    """Solutions mod pk with the first two variables swept over a full grid."""
    cubic = sys.cubic_coeffs()
    quad = sys.quad_coeffs()
    t0 = sum(c * int(v) ** 3 for c, v in zip(cubic[2:], tail)) % pk
    f0 = sum(c * int(v) ** 2 for c, v in zip(quad[2:], tail)) % pk
    u = np.arange(pk, dtype=np.int64)
    th1 = (cubic[0] * (u**3 % pk)) % pk
    th2 = (cubic[1] * (u**3 % pk)) % pk
    ph1 = (quad[0] * (u * u % pk)) % pk
    ph2 = (quad[1] * (u * u % pk)) % pk
    theta = (th1[:, None] + th2[None, :] + t0) % pk
    phi = (ph1[:, None] + ph2[None, :] + f0) % pk
    rows, cols = np.nonzero((theta == 0) & (phi == 0))
    return [(int(r), int(c), *map(int, tail)) for r, c in zip(rows, cols)]


def padic_witness(
    sys: DiagonalSystem,
    p: int,
    rng: Optional[np.random.Generator] = None,
    tries: int = 40,
    max_depth: int = 2,
) -> PadicWitness:
    """Search for a solution mod p^k whose Jacobian minors allow lifting.

    A solution mod p^k with some 2x2 minor of the (Theta, Phi) Jacobian of
    p-adic valuation v qualifies when k >= 2v + 1.  Depths k = 1, 3, 5, ...
    are tried in turn; mod 2 the Phi row vanishes identically, so p = 2
    genuinely needs k >= 3.  Alongside, M(p^t) is computed exactly for the
    feasible t and the growth floor M(p^t) >= p^((t-w)(s-2)) is used to pin
    the smallest workable w.
    """
    rng = rng if rng is not None else np.random.default_rng(p)
    if sys.s < 2:
        raise ValueError("need at least two variables")
    found = None
    for v_target in range(max_depth + 1):
        k = 2 * v_target + 1
        pk = p**k
        if pk > 2000:
            break
        if pk ** (sys.s - 2) <= 10_000:
            tails = product(range(pk), repeat=sys.s - 2)
        else:
            tails = (rng.integers(0, pk, size=sys.s - 2) for _ in range(tries))
        for tail in tails:
            for x in _grid_candidates(sys, pk, tail):
                v = _best_minor_valuation(sys, x, p, cap=k)
                if 2 * v < k:
                    found = (x, k, v)
                    break
            if found:
                break
        if found:
            break
    # exact M(p^t) for the t within budget; p^t <= 150 keeps folds cheap
    t_list = []
    t = 1
    while p**t <= 150:
        t_list.append(t)
        t += 1
    if not t_list:
        t_list = [1]
    Ms = {t: count_congruences(sys, p**t).M for t in t_list if sys.s * p ** (3 * t) <= DEFAULT_LEDGER_BUDGET}
    w = 0
    while True:
        ok = all(
            M >= p ** ((t - w) * (sys.s - 2)) if t >= w else True
            for t, M in Ms.items()
        )
        if ok or w > max(Ms, default=0) + 1:
            break
        w += 1
    if found:
        x, k, v = found
        return PadicWitness(p, True, tuple(x), k, v, w, tuple(sorted(Ms)), ok)
    return PadicWitness(p, False, None, None, None, w, tuple(sorted(Ms)), ok)
