"""Sharpness constructions: box data exhibiting lower-bound growth rates.

All fields here are finite sums of characteristic functions of axis-aligned
boxes in (xi1, xi2, tau) or (xi1, xi2), represented analytically. Products of
two box fields have Fourier transforms that factorize into 1D trapezoids, so
weighted L2 norms reduce to low-dimensional quadratures over explicit
supports; no global lattice is ever built (the boxes have widths like 1/N at
centers ~ N, which no uniform lattice can afford).

Convention: "convolution" means the plain integral (f*g)(z) = int f(y)g(z-y)dy
with no 2*pi factors; all ratios computed here are compared across N, so
absolute constants are irrelevant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BoxSpec",
    "CharacteristicField",
    "WeightSpec",
    "trilinear_I_boxes",
    "box_norm",
    "box_product_norm",
    "counterexample_c1",
    "counterexample_c2",
    "duhamel_lower_bound_1",
    "duhamel_lower_bound_2",
]

_GL_POINTS = 16


@dataclass(frozen=True)
class BoxSpec:
    """Axis-aligned box: center and widths per axis (2 or 3 dimensional)."""

    center: tuple
    widths: tuple

    def __post_init__(self):
        if len(self.center) != len(self.widths):
            raise ValueError("center and widths must have equal length")
        if any(w <= 0 for w in self.widths):
            raise ValueError("box widths must be positive")

    @property
    def ndim(self) -> int:
        return len(self.center)

    def interval(self, axis: int):
        c, w = self.center[axis], self.widths[axis]
        return c - w / 2.0, c + w / 2.0

    def reflected(self) -> "BoxSpec":
        return BoxSpec(tuple(-c for c in self.center), self.widths)


@dataclass
class CharacteristicField:
    """Finite sum of coefficients times box indicators, sum c_i * chi_{B_i}."""

    boxes: list

    def __post_init__(self):
        if not self.boxes:
            raise ValueError("field needs at least one box")
        ndims = {b.ndim for b, _ in self.boxes}
        if len(ndims) != 1:
            raise ValueError("all boxes must have the same dimension")

    @property
    def ndim(self) -> int:
        return self.boxes[0][0].ndim

    def reflected_conjugate(self) -> "CharacteristicField":
        return CharacteristicField(
            [(b.reflected(), np.conj(c)) for b, c in self.boxes]
        )


@dataclass(frozen=True)
class WeightSpec:
    """Weight <xi>^{2a} <mod>^{2b} with mod = tau+|xi|^2 (S) or tau+-|xi| (W).

    ``laplace_bracket`` multiplies by (|xi|^2/<xi>)^2, the squared symbol of
    the operator Laplacian over <grad>.
    """

    kind: str
    a: float
    b: float
    laplace_bracket: bool = False

    def __post_init__(self):
        if self.kind not in ("S", "W+", "W-"):
            raise ValueError(f"kind must be 'S', 'W+' or 'W-', got {self.kind!r}")

    def __call__(self, x1, x2, tau):
        r2 = x1 ** 2 + x2 ** 2
        bracket = 1.0 + r2
        if self.kind == "S":
            mod = tau + r2
        elif self.kind == "W+":
            mod = tau + np.sqrt(r2)
        else:
            mod = tau - np.sqrt(r2)
        w = bracket ** self.a * (1.0 + mod ** 2) ** self.b
        if self.laplace_bracket:
            w = w * r2 ** 2 / bracket
        return w


def _trap_value(x, c, w1, w2):
    """1D convolution of two centered indicators, evaluated at x.

    Trapezoid centered at c = c1+c2: support width w1+w2, plateau |w1-w2|,
    height min(w1, w2).
    """
    return np.clip((w1 + w2) / 2.0 - np.abs(np.asarray(x, dtype=float) - c),
                   0.0, min(w1, w2))


def _trap_kinks(c, w1, w2):
    h = (w1 + w2) / 2.0
    p = abs(w1 - w2) / 2.0
    return [c - h, c - p, c + p, c + h]


def _gl_panels(lo: float, hi: float, kinks, q: int):
    """Gauss-Legendre nodes/weights on [lo, hi], panels split at the kinks."""
    if hi <= lo:
        return np.empty(0), np.empty(0)
    edges = sorted({lo, hi, *(k for k in kinks if lo < k < hi)})
    x0, w0 = np.polynomial.legendre.leggauss(q)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = (a + b) / 2.0, (b - a) / 2.0
        nodes.append(mid + half * x0)
        weights.append(half * w0)
    return np.concatenate(nodes), np.concatenate(weights)


def _interval_intersect(i1, i2):
    return max(i1[0], i2[0]), min(i1[1], i2[1])


def trilinear_I_boxes(
    f: CharacteristicField,
    g1: CharacteristicField,
    g2: CharacteristicField,
    weight: WeightSpec | None = None,
    q: int = _GL_POINTS,
):
    """Pairing int f(z) w(z) (g1 corr g2)(z) dz over box fields.

    (g1 corr g2)(z) = int g1(zeta) g2(zeta - z) dzeta is, per box pair, a
    product of 1D trapezoids. With ``weight`` None the integral factorizes
    into per-axis quadratures; otherwise a tensor Gauss-Legendre rule is used
    with panels split at trapezoid kinks and box edges.
    """
    if not f.ndim == g1.ndim == g2.ndim == 3:
        raise ValueError("trilinear pairing needs 3-dimensional box fields")
    total = 0.0 + 0.0j
    for bf, cf in f.boxes:
        for b1, c1 in g1.boxes:
            for b2, c2 in g2.boxes:
                coef = cf * c1 * c2
                axes = []
                for ax in range(3):
                    cc = b1.center[ax] - b2.center[ax]
                    w1, w2 = b1.widths[ax], b2.widths[ax]
                    lo, hi = _interval_intersect(
                        bf.interval(ax),
                        (cc - (w1 + w2) / 2.0, cc + (w1 + w2) / 2.0),
                    )
                    if hi <= lo:
                        break
                    x, w = _gl_panels(lo, hi, _trap_kinks(cc, w1, w2), q)
                    axes.append((x, w))
                if len(axes) < 3:
                    continue
                (xa, wa), (xb, wb), (xc, wc) = axes
                ta = _trap_value(xa, b1.center[0] - b2.center[0], b1.widths[0], b2.widths[0])
                tb = _trap_value(xb, b1.center[1] - b2.center[1], b1.widths[1], b2.widths[1])
                tc = _trap_value(xc, b1.center[2] - b2.center[2], b1.widths[2], b2.widths[2])
                if weight is None:
                    total += coef * (
                        np.sum(wa * ta) * np.sum(wb * tb) * np.sum(wc * tc)
                    )
                else:
                    wv = weight(
                        xa[:, None, None], xb[None, :, None], xc[None, None, :]
                    )
                    tens = (
                        (wa * ta)[:, None, None]
                        * (wb * tb)[None, :, None]
                        * (wc * tc)[None, None, :]
                    )
                    total += coef * np.sum(wv * tens)
    return complex(total)


def box_norm(
    field: CharacteristicField, weight: WeightSpec, q: int = _GL_POINTS
) -> float:
    """Weighted L2 norm of a box field; boxes must be pairwise disjoint."""
    total = 0.0
    for b, c in field.boxes:
        (lo1, hi1), (lo2, hi2), (lo3, hi3) = (b.interval(i) for i in range(3))
        x1, w1 = _gl_panels(lo1, hi1, (), q)
        x2, w2 = _gl_panels(lo2, hi2, (), q)
        x3, w3 = _gl_panels(lo3, hi3, (), q)
        wv = weight(x1[:, None, None], x2[None, :, None], x3[None, None, :])
        tens = w1[:, None, None] * w2[None, :, None] * w3[None, None, :]
        total += abs(c) ** 2 * float(np.sum(wv * tens))
    return math.sqrt(total)


def box_product_norm(
    g1: CharacteristicField,
    g2: CharacteristicField,
    weight: WeightSpec,
    q: int = _GL_POINTS,
    conjugate_second: bool = False,
) -> float:
    """Weighted L2 norm of the convolution of two box fields.

    This is the Fourier transform of the pointwise product of the physical
    fields (of g1 and conj(g2) if ``conjugate_second``).
    """
    h2 = g2.reflected_conjugate() if conjugate_second else g2
    pairs = []
    for b1, c1 in g1.boxes:
        for b2, c2 in h2.boxes:
            pairs.append((b1, b2, c1 * c2))
    # common panelization per axis across all pair trapezoids
    axes = []
    for ax in range(3):
        kinks, los, his = [], [], []
        for b1, b2, _ in pairs:
            cc = b1.center[ax] + b2.center[ax]
            w1, w2 = b1.widths[ax], b2.widths[ax]
            ks = _trap_kinks(cc, w1, w2)
            kinks.extend(ks)
            los.append(ks[0])
            his.append(ks[-1])
        x, w = _gl_panels(min(los), max(his), kinks, q)
        axes.append((x, w))
    (x1, w1), (x2, w2), (x3, w3) = axes
    conv = np.zeros((len(x1), len(x2), len(x3)), dtype=complex)
    for b1, b2, coef in pairs:
        t1 = _trap_value(x1, b1.center[0] + b2.center[0], b1.widths[0], b2.widths[0])
        t2 = _trap_value(x2, b1.center[1] + b2.center[1], b1.widths[1], b2.widths[1])
        t3 = _trap_value(x3, b1.center[2] + b2.center[2], b1.widths[2], b2.widths[2])
        conv += coef * t1[:, None, None] * t2[None, :, None] * t3[None, None, :]
    wv = weight(x1[:, None, None], x2[None, :, None], x3[None, None, :])
    tens = w1[:, None, None] * w2[None, :, None] * w3[None, None, :]
    return math.sqrt(float(np.sum(wv * np.abs(conv) ** 2 * tens)))


def _counter_boxes(N: int, sigma: float):
    widths = (N ** sigma, N ** (0.5 * (1.0 + sigma)), N ** (1.0 + sigma))
    wave = BoxSpec((2.0 * N + 1.0, 0.0, -(2.0 * N + 1.0)), widths)
    schr_low = BoxSpec((-float(N), 0.0, -float(N) ** 2), widths)
    schr_out = BoxSpec((N + 1.0, 0.0, -((N + 1.0) ** 2)), widths)
    return wave, schr_low, schr_out


def _check_counter_args(N: int, sigma: float):
    if N < 16:
        raise ValueError(f"N must be >= 16, got {N}")
    if not -1.0 <= sigma < 0.0:
        raise ValueError(f"sigma must be in [-1, 0), got {sigma}")


def counterexample_c1(
    N: int, sigma: float, k: float, ell: float, bp: float, b1: float, b2: float
) -> float:
    """Ratio ||v u|| / (||v|| ||u||) for the wave-times-free-wave box pair.

    The lower bound grows like N^(-ell-1/2 + (1+sigma)(5/4-(bp+b1+b2))); the
    ratio is returned raw, for log-log slope fitting across N.
    """
    _check_counter_args(N, sigma)
    boxE, boxF, _ = _counter_boxes(N, sigma)
    v = CharacteristicField([(boxE, 1.0)])
    u = CharacteristicField([(boxF, 1.0)])
    num = box_product_norm(v, u, WeightSpec("S", k, -bp))
    den = box_norm(v, WeightSpec("W+", ell, b1)) * box_norm(
        u, WeightSpec("S", k, b2)
    )
    return num / den


def counterexample_c2(
    N: int, sigma: float, k: float, ell: float, bp: float, b1: float, b2: float
) -> float:
    """Ratio ||(Lap/<grad>)(u conj(w))|| / (||u|| ||w||) for the box pair.

    Lower bound ~ N^(ell-2k+1/2 + (1+sigma)(5/4-(bp+b1+b2))).
    """
    _check_counter_args(N, sigma)
    _, boxF, boxE = _counter_boxes(N, sigma)
    u = CharacteristicField([(boxE, 1.0)])
    w = CharacteristicField([(boxF, 1.0)])
    num = box_product_norm(
        u, w, WeightSpec("W+", ell, -bp, laplace_bracket=True),
        conjugate_second=True,
    )
    den = box_norm(u, WeightSpec("S", k, b1)) * box_norm(
        w, WeightSpec("S", k, b2)
    )
    return num / den


def _h_norm_2d(field: CharacteristicField, s: float, q: int = _GL_POINTS) -> float:
    """H^s norm of a 2D box field (disjoint boxes)."""
    total = 0.0
    for b, c in field.boxes:
        (lo1, hi1), (lo2, hi2) = b.interval(0), b.interval(1)
        x1, w1 = _gl_panels(lo1, hi1, (), q)
        x2, w2 = _gl_panels(lo2, hi2, (), q)
        wv = (1.0 + x1[:, None] ** 2 + x2[None, :] ** 2) ** s
        total += abs(c) ** 2 * float(np.sum(wv * w1[:, None] * w2[None, :]))
    return math.sqrt(total)


def _time_integral(phi, t):
    """int_0^t exp(i t' phi) dt' elementwise, stable near phi = 0."""
    phi = np.asarray(phi, dtype=float)
    out = np.empty(phi.shape, dtype=complex)
    small = np.abs(phi * t) < 1e-8
    out[small] = t
    p = phi[~small]
    out[~small] = (np.exp(1j * t * p) - 1.0) / (1j * p)
    return out


def _source_pairs_transform(xi1, xi2, pairs, phase, t, q):
    """Fourier-side Duhamel source summed over box pairs.

    ``pairs`` is a list of (box_eta, box_other, coef): the integration
    variable eta runs over box_eta intersected with xi - box_other (the
    second factor is evaluated at xi - eta and supported on box_other);
    ``phase(xi1, xi2, e1, e2)`` is the resonance argument entering the
    closed-form time integral.
    """
    out = np.zeros(np.broadcast(xi1, xi2).shape, dtype=complex)
    it = np.nditer([xi1, xi2], flags=["multi_index"])
    for a, b in it:
        z1, z2 = float(a), float(b)
        acc = 0.0 + 0.0j
        for beta, bother, coef in pairs:
            o1, o2 = bother.interval(0), bother.interval(1)
            lo1, hi1 = _interval_intersect(
                beta.interval(0), (z1 - o1[1], z1 - o1[0])
            )
            lo2, hi2 = _interval_intersect(
                beta.interval(1), (z2 - o2[1], z2 - o2[0])
            )
            if hi1 <= lo1 or hi2 <= lo2:
                continue
            e1, wq1 = _gl_panels(lo1, hi1, (), q)
            e2, wq2 = _gl_panels(lo2, hi2, (), q)
            ph = phase(z1, z2, e1[:, None], e2[None, :])
            acc += coef * np.sum(
                _time_integral(ph, t) * wq1[:, None] * wq2[None, :]
            )
        out[it.multi_index] = acc
    return out


def duhamel_lower_bound_1(
    N: int, T: float, k: float, ell: float, t: float, q: int = _GL_POINTS
) -> float:
    """Normalized size of the first Duhamel iterate on its resonant region.

    Sources: u on a 2/N x 2 rectangle at xi1 ~ -N; v real-valued, supported
    at xi1 ~ +-(2N+1). The output H^k norm over the resonant window
    xi1 ~ N+1 is divided by ||u||_{H^k} ||v||_{H^ell} and by N^(-ell-1/2);
    the result is bounded below uniformly in N when t is in (1/N, T).
    """
    if not 0.0 < T <= 1.0:
        raise ValueError(f"T must be in (0, 1], got {T}")
    if not 0.0 <= t <= T:
        raise ValueError(f"t must be in [0, T], got {t}")
    if N * T < 8:
        raise ValueError(f"need N >> 1/T, got N*T = {N * T}")
    n = float(N)
    boxA = BoxSpec((-n, 0.0), (2.0 / n, 2.0))
    boxB = BoxSpec((2.0 * n + 1.0, 0.0), (4.0 / n, 4.0))
    boxBm = boxB.reflected()

    def phase_minus(z1, z2, e1, e2):
        d1, d2 = z1 - e1, z2 - e2
        return (z1 ** 2 + z2 ** 2) - (e1 ** 2 + e2 ** 2) - np.sqrt(
            1.0 + d1 ** 2 + d2 ** 2
        )

    def phase_plus(z1, z2, e1, e2):
        d1, d2 = z1 - e1, z2 - e2
        return (z1 ** 2 + z2 ** 2) - (e1 ** 2 + e2 ** 2) + np.sqrt(
            1.0 + d1 ** 2 + d2 ** 2
        )

    # Re(half-wave evolution of v) contributes both phase signs at half weight
    pairs = [(boxA, boxB, 0.5), (boxA, boxBm, 0.5)]
    lo1, hi1 = n + 1.0 - 1.0 / n, n + 1.0 + 1.0 / n
    x1, w1 = _gl_panels(lo1, hi1, (), q)
    x2, w2 = _gl_panels(-1.0, 1.0, (), q)
    X1, X2 = x1[:, None], x2[None, :]
    F = _source_pairs_transform(
        np.broadcast_to(X1, (len(x1), len(x2))),
        np.broadcast_to(X2, (len(x1), len(x2))),
        pairs, phase_minus, t, q,
    ) + _source_pairs_transform(
        np.broadcast_to(X1, (len(x1), len(x2))),
        np.broadcast_to(X2, (len(x1), len(x2))),
        pairs, phase_plus, t, q,
    )
    wgt = (1.0 + X1 ** 2 + X2 ** 2) ** k
    norm = math.sqrt(
        float(np.sum(wgt * np.abs(F) ** 2 * w1[:, None] * w2[None, :]))
    )
    u = CharacteristicField([(boxA, 1.0)])
    v = CharacteristicField([(boxB, 1.0), (boxBm, 1.0)])
    den = _h_norm_2d(u, k) * _h_norm_2d(v, ell)
    return norm / den / n ** (-ell - 0.5)


def duhamel_lower_bound_2(
    N: int, T: float, k: float, ell: float, t: float, q: int = _GL_POINTS
) -> float:
    """Normalized size of the wave Duhamel iterate driven by |u|^2 data.

    Source u lives on two rectangles at xi1 ~ N+1 and xi1 ~ -N; the output
    H^ell norm over xi1 ~ 2N+1 carries the |xi|^2/<xi> symbol and is divided
    by ||u||^2_{H^k} and by N^(ell-2k+1/2).
    """
    if not 0.0 < T <= 1.0:
        raise ValueError(f"T must be in (0, 1], got {T}")
    if not 0.0 <= t <= T:
        raise ValueError(f"t must be in [0, T], got {t}")
    if N < 8:
        raise ValueError(f"need N >> 1, got {N}")
    n = float(N)
    boxD1 = BoxSpec((n + 1.0, 0.0), (2.0 / n, 2.0))
    # second rectangle as printed: xi1 from -N - 2/N^2 to -N + 2/N
    lo, hi = -n - 2.0 / n ** 2, -n + 2.0 / n
    boxD2 = BoxSpec(((lo + hi) / 2.0, 0.0), (hi - lo, 4.0))

    def phase(z1, z2, e1, e2):
        d1, d2 = z1 - e1, z2 - e2
        return (
            np.sqrt(1.0 + z1 ** 2 + z2 ** 2)
            - (e1 ** 2 + e2 ** 2)
            + d1 ** 2 + d2 ** 2
        )

    # conj(u) has Fourier support on the reflected rectangles
    pairs = []
    for beta in (boxD1, boxD2):
        for other in (boxD1, boxD2):
            pairs.append((beta, other.reflected(), 1.0))
    lo1, hi1 = 2.0 * n + 1.0 - 1.0 / n, 2.0 * n + 1.0 + 1.0 / n
    x1, w1 = _gl_panels(lo1, hi1, (), q)
    x2, w2 = _gl_panels(-1.0, 1.0, (), q)
    X1 = np.broadcast_to(x1[:, None], (len(x1), len(x2)))
    X2 = np.broadcast_to(x2[None, :], (len(x1), len(x2)))
    F = _source_pairs_transform(X1, X2, pairs, phase, t, q)
    r2 = X1 ** 2 + X2 ** 2
    wgt = (1.0 + r2) ** ell * (r2 ** 2 / (1.0 + r2))
    norm = math.sqrt(
        float(np.sum(wgt * np.abs(F) ** 2 * w1[:, None] * w2[None, :]))
    )
    u = CharacteristicField([(boxD1, 1.0), (boxD2, 1.0)])
    den = _h_norm_2d(u, k) ** 2
    return norm / den / n ** (ell - 2.0 * k + 0.5)
