"""Domain-coloring renderer for ``1/(s-1)``, ``G_N(s, a)`` and their difference.

Pixels are evaluated in fixed blocks of rows with numpy, so the output bytes
do not depend on how many workers render the blocks.  ``G_N`` uses an
Euler-Maclaurin evaluation of ``zeta(z, a+1)`` vectorised over the block, with
the head powers ``(m+b)^-(s+n)`` advanced in ``n`` by one multiplication each.
"""
from __future__ import annotations

import colorsys
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bernoulli import default_cache
from .errors import CapExceededError, DomainError
from .operators.shift import removable_limit

PIXEL_CAP = 10**8
EPS = 2.220446049250313e-16
BLOCK_ROWS = 16
EM_ORDER = 24
FUNCTIONS = ("reference_pole", "truncated_G", "difference")


@dataclass(frozen=True)
class PlotSpec:
    function: str = "reference_pole"
    N: int = 0
    region: tuple = (-20.0, 20.0, -20.0, 20.0)
    resolution: tuple = (400, 400)
    overlay_circles: tuple = ()
    a: float = 1.0

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise DomainError(f"unknown plot function {self.function!r}")
        re0, re1, im0, im1 = self.region
        if not (re0 < re1 and im0 < im1):
            raise DomainError("region must satisfy re_min < re_max and im_min < im_max")
        w, h = self.resolution
        if w < 1 or h < 1:
            raise DomainError("resolution must be positive")
        if w * h > PIXEL_CAP:
            raise CapExceededError(f"{w}x{h} exceeds the {PIXEL_CAP} pixel cap")
        if not 0 < self.a <= 1:
            raise DomainError("a must lie in (0, 1]")
        if self.N < 0:
            raise DomainError("N must be non-negative")


@dataclass(frozen=True)
class ImageBuffer:
    width: int
    height: int
    data: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.data) != self.width * self.height * 3:
            raise DomainError("buffer length must be width*height*3")

    def array(self) -> np.ndarray:
        return np.frombuffer(self.data, dtype=np.uint8).reshape(self.height, self.width, 3)

    def pixel(self, col: int, row: int) -> tuple:
        i = 3 * (row * self.width + col)
        return tuple(self.data[i:i + 3])

    def to_ppm(self) -> bytes:
        return b"P6\n%d %d\n255\n" % (self.width, self.height) + self.data


# ---------------------------------------------------------------------------
# colour


def _hue(theta: float) -> float:
    # arg 0 -> red (0), arg pi/2 -> green (1/3), the remaining arc spans 1/3..1
    if theta < 0:
        theta += 2 * math.pi
    if theta <= math.pi / 2:
        return theta / (math.pi / 2) / 3.0
    return 1.0 / 3.0 + (theta - math.pi / 2) / (1.5 * math.pi) * (2.0 / 3.0)


def _to_byte(c: float) -> int:
    return int(math.floor(c * 255.0 + 0.5))


def domain_color(z: complex) -> tuple:
    """RGB bytes for ``z``: hue from the argument, lightness ``|z|/(1+|z|)``."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return (255, 255, 255)
    r = abs(z)
    if not math.isfinite(r):
        return (255, 255, 255)
    light = r / (1.0 + r)
    rgb = colorsys.hls_to_rgb(_hue(math.atan2(z.imag, z.real)), light, 1.0)
    return tuple(_to_byte(c) for c in rgb)


def _hls_channel(m1, m2, h):
    h = np.mod(h, 1.0)
    return np.where(
        h < 1.0 / 6.0,
        m1 + (m2 - m1) * h * 6.0,
        np.where(h < 0.5, m2, np.where(h < 2.0 / 3.0, m1 + (m2 - m1) * (2.0 / 3.0 - h) * 6.0, m1)),
    )


def domain_color_array(z: np.ndarray) -> np.ndarray:
    """Vectorised :func:`domain_color`; returns uint8 of shape ``z.shape + (3,)``."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        r = np.abs(z)
        finite = np.isfinite(z.real) & np.isfinite(z.imag) & np.isfinite(r)
        rr = np.where(finite, r, 0.0)
        light = rr / (1.0 + rr)
        theta = np.arctan2(z.imag, z.real)
        theta = np.where(theta < 0, theta + 2 * math.pi, theta)
        theta = np.where(finite, theta, 0.0)
        hue = np.where(
            theta <= math.pi / 2,
            theta / (math.pi / 2) / 3.0,
            1.0 / 3.0 + (theta - math.pi / 2) / (1.5 * math.pi) * (2.0 / 3.0),
        )
        # colorsys with saturation 1
        m2 = np.where(light <= 0.5, light * 2.0, light + 1.0 - light)
        m1 = 2.0 * light - m2
        rgb = np.stack(
            [_hls_channel(m1, m2, hue + 1.0 / 3.0), _hls_channel(m1, m2, hue), _hls_channel(m1, m2, hue - 1.0 / 3.0)],
            axis=-1,
        )
        out = np.floor(rgb * 255.0 + 0.5)
    out = np.where(finite[..., None], out, 255.0)
    return out.astype(np.uint8)


# ---------------------------------------------------------------------------
# vectorised evaluation


def _em_constants(K: int) -> np.ndarray:
    table = default_cache()
    return np.array([table.as_float(2 * l) / math.factorial(2 * l) for l in range(1, K + 1)])


def _phi(w: np.ndarray) -> np.ndarray:
    """``(e^w - 1)/w`` with a series near 0."""
    small = np.abs(w) <= 0.5
    ws = np.where(small, w, 0.0)
    ser = np.ones_like(ws)
    for k in range(20, 0, -1):
        ser = 1.0 + ser * ws / (k + 1)
    with np.errstate(all="ignore"):
        big = (np.exp(w) - 1.0) / np.where(small, 1.0, w)
    return np.where(small, ser, big)


_STIRLING = np.array([1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156, -3617 / 122400])
# left of this line zeta(z) comes from the functional equation (a in {1/2, 1})
REFLECT_BELOW = -0.5
REFLECT_ORDER = 12
CHUNK_SPAN = 16


def _log_gamma_array(w: np.ndarray) -> np.ndarray:
    """A logarithm of Gamma(w) for Re w >= 1 (Stirling after a fixed shift of 14)."""
    shift = np.zeros_like(w)
    for j in range(14):
        shift = shift + np.log(w + j)
    z = w + 14.0
    inv = 1.0 / z
    inv2 = inv * inv
    ser = np.zeros_like(z)
    for c in _STIRLING[::-1]:
        ser = ser * inv2 + c
    return (z - 0.5) * np.log(z) - z + 0.5 * math.log(2 * math.pi) + ser * inv - shift


def _chi(z: np.ndarray, log_gamma: np.ndarray) -> np.ndarray:
    """``zeta(z) / zeta(1-z)`` given a logarithm of ``Gamma(1-z)``."""
    log_mag = z * math.log(2.0) + (z - 1.0) * math.log(math.pi) + log_gamma
    return np.exp(log_mag) * np.sin(0.5 * math.pi * z)


def em_plan(radius: float, K: int = EM_ORDER, b: float = 2.0) -> int:
    """Head length for arguments up to ``|z| <= radius`` at Euler-Maclaurin order ``K``."""
    X = max(12.0, (radius + 2 * K) / math.pi)
    return max(1, int(math.ceil(X - b)))


def _head_for_height(tmax: float, b: float) -> int:
    # for Re u >= -1/2 the order-12 remainder is governed by |Im u| alone
    X = max(12.0, (tmax + 2 * REFLECT_ORDER + 20.0) / math.pi)
    return max(1, int(math.ceil(X - b)))


class _EMStream:
    """``zeta(u, b)`` along ``u = u0 + step * n`` by Euler-Maclaurin, vectorised over ``u0``.

    The head powers ``(m+b)^-u`` and ``X^-u`` are advanced by one
    multiplication per step, so only the first evaluation needs exponentials.
    """

    def __init__(self, u0: np.ndarray, b: float, M: int, K: int, step: int):
        logs = np.log(np.arange(M) + b)
        self.mult = np.exp(-step * logs)[:, None]
        self.X = M + b
        self.xmult = self.X ** (-step)
        self.c = _em_constants(K)
        self.u = u0.copy()
        self.step = step
        self.T = np.exp(-logs[:, None] * u0[None, :])
        self.XS = np.exp(-math.log(self.X) * u0)

    def value(self, with_pole: bool = True) -> np.ndarray:
        u, X, XS = self.u, self.X, self.XS
        corr = np.zeros_like(u)
        y = XS * u / X
        for l in range(len(self.c)):
            corr = corr + self.c[l] * y
            y = y * (u + 2 * l + 1) * (u + 2 * l + 2) / (X * X)
        out = self.T.sum(axis=0) + 0.5 * XS + corr
        if with_pole:
            out = out + X * XS / (u - 1.0)
        return out

    def head_mass(self) -> np.ndarray:
        """``sum |(m+b)^-u|``: the scale of the rounding error in :meth:`value`."""
        return np.abs(self.T).sum(axis=0)

    def advance(self):
        self.T *= self.mult
        self.XS = self.XS * self.xmult
        self.u = self.u + self.step


def _chunk_sum(s, N, a, difference):
    """``G_N`` and ``sum |term|`` on one group of pixels whose switch-over indices are close."""
    b = a + 1.0
    la = math.log(a)
    tmax = float(np.max(np.abs(s.imag))) + 1.0
    # first n with Re(s+n) >= -1/2, clipped to [0, N+1]
    n0 = np.clip(np.ceil(REFLECT_BELOW - s.real), 0, N + 1).astype(int)
    n_lo, n_hi = int(n0.min()), int(n0.max())
    left = right = None
    if n_hi > 0:
        left = _EMStream(1.0 - s, 1.0, _head_for_height(tmax, 1.0), REFLECT_ORDER, -1)
        lg = _log_gamma_array(1.0 - s)  # log Gamma(1-z), stepped down by log(-z)
    p = np.ones_like(s)
    acc = np.zeros_like(s)
    mass = np.zeros(s.shape)
    for n in range(N + 1):
        z = s + n
        if n == n_lo:
            right = _EMStream(z, b, _head_for_height(tmax, b), REFLECT_ORDER, +1)
        f = np.zeros_like(s)
        if right is not None:
            if n == 0 and difference:
                lx = math.log(right.X / a)
                f = right.value(with_pole=False) - np.exp((1.0 - s) * la) * lx * _phi((1.0 - s) * lx)
            else:
                f = right.value()
        if left is not None and n < n_hi:
            mask = n < n0
            zl = z[mask]
            zr = _chi(zl, lg[mask]) * left.value()[mask]
            if a == 0.5:
                two = np.exp(zl * math.log(2.0))
                zr = (two - 1.0) * zr - two
            else:
                zr = zr - 1.0
            if n == 0 and difference:
                zr = zr - np.exp((1.0 - zl) * la) / (zl - 1.0)
            f[mask] = zr
            left.advance()
            lg = lg - np.log(-z)
        term = np.where(p == 0, 0.0, p * f)
        _removable(term, s, z, n)
        acc = acc + term
        mass = mass + np.abs(term)
        p = p * (s + n) / (n + 2)
        if right is not None:
            right.advance()
    return acc, mass


def _removable(term, s, z, n):
    hit = z == 1.0
    if n >= 1 and np.any(hit):
        for idx in zip(*np.nonzero(hit)):
            term[idx] = removable_limit(complex(s[idx]), n, 1.0, 1.0 / math.factorial(n + 1))


def g_sum_block(s: np.ndarray, N: int, a: float = 1.0, difference: bool = False,
                with_mass: bool = False):
    """``G_N(s, a)`` (or ``G_N - 1/((s-1)a^(s-1))`` with ``difference``) over an array.

    ``f(z) = zeta(z, a) - a^-z = zeta(z, a+1)``.  For ``a`` in {1/2, 1} the
    points with ``Re z < -1/2`` use the functional equation with ``zeta(1-z)``
    from a second Euler-Maclaurin stream; pixels are grouped by the index
    where they switch streams.  Other ``a`` stay on one Euler-Maclaurin
    stream, which loses relative accuracy far in the left half-plane; the
    head powers that cancel there are counted in the returned mass.  A
    pixel with ``s + n = 1`` exactly, ``n >= 1``, gets the removable limit
    term.  ``s = 1`` is a pole of ``G_N``; there the result is ``inf`` unless
    ``difference`` is set.  With ``with_mass`` the sum of ``|term|`` is
    returned too; ``EPS * mass`` is the scale of the rounding error.
    """
    s = np.asarray(s, dtype=complex)
    out = np.zeros_like(s)
    mass = np.zeros(s.shape)
    if s.size == 0:
        return (out, mass) if with_mass else out
    with np.errstate(all="ignore"):
        if a in (0.5, 1.0):
            n0 = np.clip(np.ceil(REFLECT_BELOW - s.real), 0, N + 1).astype(int)
            bucket = n0 // CHUNK_SPAN
            for key in np.unique(bucket):
                sel = bucket == key
                out[sel], mass[sel] = _chunk_sum(s[sel], N, a, difference)
            return (out, mass) if with_mass else out
        b = a + 1.0
        la = math.log(a)
        right = _EMStream(s, b, em_plan(float(np.max(np.abs(s))) + N + 1.0, EM_ORDER, 1.0), EM_ORDER, +1)
        p = np.ones_like(s)
        for n in range(N + 1):
            z = s + n
            if n == 0 and difference:
                lx = math.log(right.X / a)
                f = right.value(with_pole=False) - np.exp((1.0 - s) * la) * lx * _phi((1.0 - s) * lx)
            else:
                f = right.value()
            term = np.where(p == 0, 0.0, p * f)
            _removable(term, s, z, n)
            out = out + term
            # head powers cancel left of the critical strip; count them in the rounding scale
            mass = mass + np.maximum(np.abs(term), np.abs(p) * right.head_mass())
            p = p * (s + n) / (n + 2)
            right.advance()
    return (out, mass) if with_mass else out


def _reference(s: np.ndarray, a: float) -> np.ndarray:
    with np.errstate(all="ignore"):
        return 1.0 / ((s - 1.0) * np.exp((s - 1.0) * math.log(a)))


def pixel_centers(spec: PlotSpec, rows: range | None = None) -> np.ndarray:
    re0, re1, im0, im1 = spec.region
    w, h = spec.resolution
    rows = range(h) if rows is None else rows
    re = re0 + (np.arange(w) + 0.5) * ((re1 - re0) / w)
    im = im1 - (np.array(list(rows)) + 0.5) * ((im1 - im0) / h)
    return re[None, :] + 1j * im[:, None]


def _pole_pixel(spec: PlotSpec):
    """``(row, col)`` of the cell containing ``s = 1``, if inside the region."""
    re0, re1, im0, im1 = spec.region
    w, h = spec.resolution
    if not (re0 <= 1.0 < re1 and im0 < 0.0 <= im1):
        return None
    col = min(w - 1, int(math.floor((1.0 - re0) / (re1 - re0) * w)))
    row = min(h - 1, int(math.floor((im1 - 0.0) / (im1 - im0) * h)))
    return row, col


def _render_rows(spec: PlotSpec, rows: range):
    s = pixel_centers(spec, rows)
    unreliable = 0
    if spec.function == "reference_pole":
        vals = _reference(s, spec.a)
    else:
        vals, mass = g_sum_block(s.ravel(), spec.N, spec.a, spec.function == "difference", True)
        vals = vals.reshape(s.shape)
        # rounding above 1% of the value (values past ~1e3 render white regardless)
        scale = np.minimum(np.maximum(np.abs(vals.ravel()), 1.0), 1e3)
        unreliable = int(np.count_nonzero(16 * EPS * mass > 0.01 * scale))
    if spec.function != "difference":
        pole = _pole_pixel(spec)
        if pole is not None and pole[0] in rows:
            vals[pole[0] - rows.start, pole[1]] = complex(math.inf, 0.0)
    rgb = domain_color_array(vals)
    if spec.overlay_circles:
        re0, re1, im0, im1 = spec.region
        w, h = spec.resolution
        half_diag = 0.5 * math.hypot((re1 - re0) / w, (im1 - im0) / h)
        for center, radius in spec.overlay_circles:
            mask = np.abs(np.abs(s - complex(center)) - radius) < half_diag
            rgb[mask] = 255
    return rgb, unreliable


def default_workers() -> int:
    cap = os.environ.get("ZOL_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def render(spec: PlotSpec, workers: int | None = None, stats: dict | None = None) -> ImageBuffer:
    """Rasterise ``spec``; blocks of rows are independent, so any worker count gives the same bytes.

    If ``stats`` is given it receives ``unreliable_pixels``: pixels of ``G_N``
    whose terms are so large that double-precision rounding exceeds 1% of
    the displayed value.
    """
    w, h = spec.resolution
    blocks = [range(r, min(h, r + BLOCK_ROWS)) for r in range(0, h, BLOCK_ROWS)]
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        parts = [_render_rows(spec, rows) for rows in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda rows: _render_rows(spec, rows), blocks))
    img = np.concatenate([rgb for rgb, _ in parts], axis=0)
    if stats is not None:
        stats["unreliable_pixels"] = sum(u for _, u in parts)
        stats["pixels"] = w * h
    return ImageBuffer(w, h, np.ascontiguousarray(img, dtype=np.uint8).tobytes())


def write_ppm(buf: ImageBuffer, path) -> str:
    with open(path, "wb") as fh:
        fh.write(buf.to_ppm())
    return str(path)


def read_ppm(path) -> ImageBuffer:
    with open(path, "rb") as fh:
        raw = fh.read()
    parts = raw.split(b"\n", 3)
    if parts[0] != b"P6" or parts[2] != b"255":
        raise DomainError("not an 8-bit binary PPM")
    w, h = (int(x) for x in parts[1].split())
    return ImageBuffer(w, h, parts[3])


# ---------------------------------------------------------------------------
# figure presets


def figure1_spec(N: int | None, resolution=(400, 400)) -> PlotSpec:
    """``N=None`` (or 0) gives the reference panel ``1/(s-1)``."""
    if not N:
        return PlotSpec("reference_pole", 0, (-20.0, 20.0, -20.0, 20.0), tuple(resolution))
    half = 20.0 if N <= 10 else 40.0
    return PlotSpec("truncated_G", N, (-half, half, -half, half), tuple(resolution))


def figure2_spec(N: int, resolution=(400, 400)) -> PlotSpec:
    half = 1.25 * N
    return PlotSpec("difference", N, (-half, half, -half, half), tuple(resolution), ((1.0, float(N)),))


def agreement_near_pole(N: int = 50, radius: float = 5.0, samples: int = 101, a: float = 1.0) -> float:
    """``max |G_N(s,a) - 1/((s-1)a^(s-1))|`` over a ``samples x samples`` grid inside ``|s-1| <= radius``."""
    t = np.linspace(-radius, radius, samples)
    s = (1.0 + t[None, :] + 1j * t[:, None]).ravel()
    s = s[np.abs(s - 1.0) <= radius]
    d = g_sum_block(s, N, a, difference=True)
    return float(np.max(np.abs(d)))
