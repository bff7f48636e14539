"""Oscillatory integrals, the truncated singular integral, and the volume constant.

The box integrals v(beta) rescale exactly: substituting gamma = P*g and
(beta_2, beta_3) = (b_2 P^-2, b_3 P^-3) turns the height-Q truncated
integral of V over the beta box into P^(s-5) times a P-free double
integral W(Q) over |b_i| <= Q at unit scale.  Everything here computes
W(Q) and friends at unit scale; the only place P reappears is the final
P^(s-5) factor and the v values themselves.

Quadrature is plain Gauss-Legendre on panels sized so each panel sees at
most a fixed number of turns of the local phase, which for polynomial
phases keeps the per-panel error far below the panel budget's tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .local import _components, complete_sum
from .arcs import ArcFamily, membership
from .systems import DiagonalSystem

TWO_PI = 2.0 * math.pi
_GL_NODES = 12
_MAX_PANELS = 65536


class QuadratureError(RuntimeError):
    pass


def _gl_grid(lo: float, hi: float, n_panels: int) -> tuple[np.ndarray, np.ndarray]:
    if n_panels > _MAX_PANELS:
        raise QuadratureError(f"panel budget exceeded: {n_panels}")
    x, w = np.polynomial.legendre.leggauss(_GL_NODES)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return nodes, wts


def _phase_rate(c3: float, c2: float, lo: float, hi: float) -> float:
    """max |d/dgamma (c3 g^3 + c2 g^2)| on [lo, hi], in cycles per unit."""
    cands = [lo, hi]
    if c3 != 0:
        vertex = -c2 / (3.0 * c3)
        if lo < vertex < hi:
            cands.append(vertex)
    return max(abs(3.0 * c3 * g * g + 2.0 * c2 * g) for g in cands)


def _panels_for(rate: float, length: float, turns: float) -> int:
    return max(1, math.ceil(rate * length / turns) + 1)


def _kind_coeffs(kind: str, coeffs) -> tuple[int, int]:
    if kind == "f":
        A3, A2 = coeffs
    elif kind == "g":
        A3 = coeffs if isinstance(coeffs, int) else coeffs[0]
        A2 = 0
    elif kind == "h":
        A2 = coeffs if isinstance(coeffs, int) else coeffs[0]
        A3 = 0
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return A3, A2


@dataclass(frozen=True)
class OscillatoryValue:
    kind: str
    beta2: float
    beta3: float
    P: float
    theta: float
    value: complex
    error_estimate: float


def oscillatory_v(
    kind: str,
    beta2: float,
    beta3: float,
    P: float,
    theta_i: float,
    coeffs,
    tol: float = 1e-9,
    turns: float = 1.0,
) -> OscillatoryValue:
    """Integral of e(A3 beta3 g^3 + A2 beta2 g^2) over (theta_i P/2, 2 theta_i P).

    Panel count doubles until two successive refinements agree within tol
    relative; the disagreement is reported as the error estimate.
    """
    A3, A2 = _kind_coeffs(kind, coeffs)
    lo, hi = theta_i * P / 2.0, 2.0 * theta_i * P
    if hi <= lo:
        raise ValueError("box is empty; need theta_i > 0 and P > 0")
    c3 = A3 * beta3
    c2 = A2 * beta2

    def integrate(n_panels: int) -> complex:
        nodes, wts = _gl_grid(lo, hi, n_panels)
        phase = TWO_PI * (c3 * nodes**3 + c2 * nodes * nodes)
        return complex(np.dot(wts, np.exp(1j * phase)))

    n = _panels_for(_phase_rate(c3, c2, lo, hi), hi - lo, turns)
    prev = integrate(n)
    while True:
        n *= 2
        cur = integrate(n)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return OscillatoryValue(kind, beta2, beta3, P, theta_i, cur, err)
        prev = cur


def _theta_blocks(sys: DiagonalSystem, theta: Sequence[float]) -> list[tuple[int, int, float]]:
    """(A3, A2, theta_i) per component, box anchors in variable order."""
    if len(theta) != sys.s:
        raise ValueError("need one box anchor per variable")
    comps = _components(sys)
    return [(A3, A2, float(theta[i])) for i, (_, A3, A2) in enumerate(comps)]


def unit_singular_integral(
    sys: DiagonalSystem,
    theta: Sequence[float],
    Q: float,
    turns: float = 1.0,
) -> tuple[float, dict]:
    """W(Q): the P-free double integral of the unit-scale product V over |b_i| <= Q.

    Each component grid is a single matrix product of unit phase factors;
    a second pass at doubled panel density supplies the error estimate.
    """
    if Q <= 0:
        raise ValueError("Q must be positive")
    blocks = _theta_blocks(sys, theta)

    def compute(turn_budget: float) -> complex:
        rate2 = sum(abs(A2) * (2 * th) ** 2 for _, A2, th in blocks)
        rate3 = sum(abs(A3) * (2 * th) ** 3 for A3, _, th in blocks)
        b2, w2 = _gl_grid(-Q, Q, _panels_for(rate2, 2 * Q, turn_budget))
        b3, w3 = _gl_grid(-Q, Q, _panels_for(rate3, 2 * Q, turn_budget))
        # gamma grids and the gamma->b3 factor are small; build them once per
        # distinct coefficient pair, then stream b2 in row chunks so peak
        # memory stays bounded as Q grows.
        grids: dict = {}
        for A3, A2, th in blocks:
            key = (A3, A2, th)
            if key in grids or (-A3, -A2, th) in grids:
                continue
            lo, hi = th / 2.0, 2.0 * th
            rate_g = _phase_rate(A3 * Q, A2 * Q, lo, hi) + _phase_rate(-A3 * Q, -A2 * Q, lo, hi)
            g, wg = _gl_grid(lo, hi, _panels_for(rate_g, hi - lo, turn_budget))
            E3g = wg[:, None] * np.exp(TWO_PI * 1j * A3 * np.outer(g**3, b3))
            grids[key] = (g, E3g)
        # each live chunk array is chunk*b3 complex entries and the per-chunk
        # cache holds one per distinct coefficient pair
        chunk = max(1, int(1_500_000 / max(1, b3.size)))
        acc = np.zeros(b3.size, dtype=complex)
        for start in range(0, b2.size, chunk):
            rows = slice(start, min(start + chunk, b2.size))
            Vc = np.ones((rows.stop - rows.start, b3.size), dtype=complex)
            cache: dict = {}
            for A3, A2, th in blocks:
                key = (A3, A2, th)
                if key not in cache:
                    conj_key = (-A3, -A2, th)
                    if conj_key in cache:
                        cache[key] = np.conj(cache[conj_key])
                    else:
                        base = key if key in grids else conj_key
                        g, E3g = grids[base]
                        if base is not key:
                            E3g = np.conj(E3g)
                        E2 = np.exp(TWO_PI * 1j * A2 * np.outer(b2[rows], g * g))
                        cache[key] = E2 @ E3g
                Vc = Vc * cache[key]
            acc += w2[rows] @ Vc
        return complex(acc @ w3)

    coarse = compute(turns)
    fine = compute(turns / 2.0)
    err = abs(fine - coarse)
    diag = {"error_estimate": err, "imag_residue": fine.imag, "Q": Q}
    return fine.real, diag


def extrapolate_ladder(values: Sequence[float]) -> tuple[float, float]:
    """Geometric (Aitken) limit estimate from a dyadic ladder of partials."""
    vals = list(values)
    if len(vals) < 3:
        raise ValueError("need at least three ladder values")
    d1 = vals[-2] - vals[-3]
    d2 = vals[-1] - vals[-2]
    if d1 == 0 or abs(d2) >= abs(d1):
        return vals[-1], abs(d2)
    r = d2 / d1
    limit = vals[-1] + d2 * r / (1.0 - r)
    return limit, abs(limit - vals[-1])


def singular_integral(
    sys: DiagonalSystem,
    Q: float,
    P: float,
    theta: Optional[Sequence[float]] = None,
    heights: Optional[Sequence[float]] = None,
    turns: float = 1.0,
) -> tuple[float, dict]:
    """Truncated singular integral J(Q) = P^(s-5) W(Q), with a dyadic ladder.

    The returned diagnostics carry W at each requested height, consecutive
    tail differences, and their ratios, which is what the Q^(-1/2)-style
    convergence checks consume.
    """
    if theta is None:
        from .solver import find_real_anchor

        theta = find_real_anchor(sys).theta
    if heights is None:
        heights = []
        h = Q
        while h >= 2 and len(heights) < 4:
            heights.append(h)
            h /= 2
        heights = heights[::-1]
    ladder = {}
    errs = {}
    imag_residue = 0.0
    for h in [*heights, Q] if Q not in heights else heights:
        W, diag = unit_singular_integral(sys, theta, h, turns=turns)
        ladder[h] = W
        errs[h] = diag["error_estimate"]
        if h == Q:
            imag_residue = diag["imag_residue"]
    W_Q = ladder[Q]
    hs = sorted(ladder)
    tails = [ladder[b] - ladder[a] for a, b in zip(hs, hs[1:])]
    ratios = [b / a for a, b in zip(tails, tails[1:]) if a != 0]
    diagnostics = {
        "W": W_Q,
        "ladder": ladder,
        "quadrature_errors": errs,
        "tails": tails,
        "tail_ratios": ratios,
        "imag_residue": imag_residue,
        "theta": tuple(float(t) for t in theta),
    }
    return P ** (sys.s - 5) * W_Q, diagnostics


def volume_constant(
    sys: DiagonalSystem,
    theta: Sequence[float],
    rng: Optional[np.random.Generator] = None,
    samples: int = 400_000,
    max_rounds: int = 5,
) -> tuple[float, float]:
    """Monte-Carlo density of {Theta = Phi = 0} in the box prod [theta_i/2, 2 theta_i].

    Thin-shell counts vol(|Theta| < d1, |Phi| < d2) / (4 d1 d2) undercount by
    O(d) where the slab clips the box edge, so successive shell halvings are
    Richardson-differenced (2 c(d/2) - c(d)) and sample counts double as the
    shell halves to keep hit counts level.  The Jacobian is checked at shell
    points; if no sampled point has rank 2 the anchor is degenerate and no
    density exists.
    """
    rng = rng if rng is not None else np.random.default_rng(7)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (sys.s,) or np.any(theta <= 0):
        raise ValueError("theta must be s positive box anchors")
    lo, hi = theta / 2.0, 2.0 * theta
    vol = float(np.prod(hi - lo))
    cubic = np.array(sys.cubic_coeffs(), dtype=float)
    quad = np.array(sys.quad_coeffs(), dtype=float)

    def forms(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return (X**3) @ cubic, (X * X) @ quad

    pre = lo + (hi - lo) * rng.random((4096, sys.s))
    th_pre, ph_pre = forms(pre)
    d1 = 0.1 * float(np.std(th_pre))
    d2 = 0.1 * float(np.std(ph_pre))
    if d1 == 0 or d2 == 0:
        raise ValueError("forms are constant on the box; no density")

    shell_rows: list = []

    def estimate(d1: float, d2: float, n: int) -> tuple[float, float]:
        shell_rows.clear()
        hits = 0
        done = 0
        while done < n:
            m = min(n - done, 1_000_000)
            X = lo + (hi - lo) * rng.random((m, sys.s))
            th, ph = forms(X)
            hit = (np.abs(th) < d1) & (np.abs(ph) < d2)
            hits += int(hit.sum())
            if len(shell_rows) < 256:
                shell_rows.extend(X[hit][: 256 - len(shell_rows)])
            done += m
        p = hits / n
        c = vol * p / (4.0 * d1 * d2)
        se = vol * math.sqrt(max(p * (1 - p), 1.0 / n) / n) / (4.0 * d1 * d2)
        return c, se

    cs: list = []
    rich: list = []
    for k in range(max_rounds):
        cs.append(estimate(d1 / 2**k, d2 / 2**k, samples * 2**k))
        if k >= 1:
            (c0, se0), (c1, se1) = cs[-2], cs[-1]
            rich.append((2 * c1 - c0, math.sqrt(4 * se1**2 + se0**2)))
        if len(rich) >= 2:
            gap = abs(rich[-1][0] - rich[-2][0])
            if gap <= 2.0 * math.hypot(rich[-1][1], rich[-2][1]):
                break
    # rank test on the tightest shell only: near a rank-deficient variety the
    # smallest singular value scales with the shell width, and a degenerate
    # density diverges like 1/d so the loop runs to full depth first
    rank_seen = False
    for row in shell_rows:
        sv = np.linalg.svd(np.vstack([3.0 * cubic * row**2, 2.0 * quad * row]), compute_uv=False)
        if sv[-1] > 1e-2 * sv[0]:
            rank_seen = True
            break
    if not rank_seen:
        raise ValueError("Jacobian rank < 2 at all sampled shell points; anchor is singular")
    value, sigma = rich[-1]
    gap = abs(rich[-1][0] - rich[-2][0]) if len(rich) >= 2 else sigma
    return value, math.hypot(sigma, gap / 2.0)


@dataclass(frozen=True)
class StarApprox:
    witness: Optional[tuple[int, int, int]]
    value: complex


def star_approx(
    sys: DiagonalSystem,
    index: int,
    alpha2: float,
    alpha3: float,
    fam: ArcFamily,
    theta: Sequence[float],
    tol: float = 1e-9,
) -> StarApprox:
    """Major-arc model q^-1 S(q, r) v(alpha - r/q) for one component; 0 off the arcs."""
    mem = membership(alpha2, alpha3, fam)
    if not mem.inside:
        return StarApprox(None, 0j)
    q, r2, r3 = mem.witness
    kind, A3, A2 = _components(sys)[index]
    coeffs = (A3, A2) if kind == "f" else (A3,) if kind == "g" else (A2,)
    S = complete_sum(kind, q, r2, r3, coeffs)
    v = oscillatory_v(
        kind, alpha2 - r2 / q, alpha3 - r3 / q, fam.P, float(theta[index]), coeffs, tol=tol
    )
    return StarApprox(mem.witness, S.value * v.value / q)
