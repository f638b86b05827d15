"""Periodic grids, continuum-normalised transforms and discrete norms.

Fields live on a periodic grid of length ``L = 2*pi*K`` so that the plane
waves ``exp(+-i x)`` and their harmonics sit exactly on the frequency lattice
``xi_j = j / K``.  Fourier coefficients use the continuum normalisation

    u_hat(xi_j) = dx / sqrt(2 pi) * sum_n u(x_n) exp(-i xi_j x_n),

so that the discrete norms below are Riemann sums of their continuum
counterparts and multiplier formulas carry over without rescaling.

Arrays are stored in numpy FFT order (``j = 0, 1, ..., N/2-1, -N/2, ..., -1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class Grid1D:
    """Periodic grid with ``N`` points on ``[-L/2, L/2)``, ``L = 2 pi K``."""

    K: int
    N: int

    def __post_init__(self):
        if int(self.K) != self.K or self.K <= 0:
            raise ValueError(f"K must be a positive integer, got {self.K}")
        if int(self.N) != self.N or self.N <= 0 or self.N % 2:
            raise ValueError(f"N must be a positive even integer, got {self.N}")
        if self.N < 16 * self.K:
            raise ValueError(f"N={self.N} < 16K={16 * self.K}: |xi| <= 8 not representable")

    @property
    def L(self) -> float:
        return 2.0 * np.pi * self.K

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def dxi(self) -> float:
        return 1.0 / self.K

    @property
    def xi_max(self) -> float:
        """Largest representable |xi| (the Nyquist frequency)."""
        return self.N / (2.0 * self.K)

    @cached_property
    def x(self) -> np.ndarray:
        x = -0.5 * self.L + self.dx * np.arange(self.N)
        x.flags.writeable = False
        return x

    @cached_property
    def j(self) -> np.ndarray:
        """Integer lattice indices in FFT order."""
        j = np.fft.fftfreq(self.N, d=1.0 / self.N).astype(np.int64)
        j.flags.writeable = False
        return j

    @cached_property
    def xi(self) -> np.ndarray:
        xi = self.j / self.K
        xi.flags.writeable = False
        return xi

    @cached_property
    def _phase(self) -> np.ndarray:
        # exp(-i xi_j x_0) with x_0 = -L/2 reduces to (-1)^j
        return np.where(self.j % 2 == 0, 1.0, -1.0)

    def index(self, j: int) -> int:
        """Array position of lattice index ``j``."""
        if not -self.N // 2 <= j < self.N // 2:
            raise IndexError(f"lattice index {j} outside [-{self.N // 2}, {self.N // 2})")
        return int(j % self.N)

    def index_of(self, xi: float) -> int:
        """Array position of the lattice frequency ``xi`` (must lie on the lattice)."""
        j = xi * self.K
        if abs(j - round(j)) > 1e-9:
            raise ValueError(f"xi={xi} is not on the lattice 1/{self.K}")
        return self.index(int(round(j)))


class SpectralField:
    """A field on a :class:`Grid1D` with lazily synchronised representations.

    Exactly one of ``phys`` / ``four`` has to be supplied; the other one is
    computed on first access and cached.  Both arrays are read-only, so a
    field behaves as an immutable value.
    """

    __slots__ = ("grid", "_phys", "_four")

    def __init__(self, grid: Grid1D, phys=None, four=None):
        if (phys is None) == (four is None):
            raise ValueError("give exactly one of phys or four")
        self.grid = grid
        self._phys = _frozen(phys, grid.N) if phys is not None else None
        self._four = _frozen(four, grid.N) if four is not None else None

    @classmethod
    def from_function(cls, grid: Grid1D, func) -> "SpectralField":
        return cls(grid, phys=func(grid.x))

    @classmethod
    def zeros(cls, grid: Grid1D) -> "SpectralField":
        return cls(grid, four=np.zeros(grid.N, dtype=complex))

    @property
    def phys(self) -> np.ndarray:
        if self._phys is None:
            g = self.grid
            data = np.fft.ifft(self._four * g._phase) * (SQRT_2PI / g.dx)
            self._phys = _frozen(data, g.N)
        return self._phys

    @property
    def four(self) -> np.ndarray:
        if self._four is None:
            g = self.grid
            data = np.fft.fft(self._phys) * g._phase * (g.dx / SQRT_2PI)
            self._four = _frozen(data, g.N)
        return self._four

    @property
    def is_phys_current(self) -> bool:
        return self._phys is not None

    @property
    def is_four_current(self) -> bool:
        return self._four is not None

    @property
    def real(self) -> np.ndarray:
        return self.phys.real

    def conj(self) -> "SpectralField":
        return SpectralField(self.grid, phys=np.conj(self.phys))

    def multiply_symbol(self, symbol) -> "SpectralField":
        """Apply the Fourier multiplier given by an array over ``grid.xi``."""
        return SpectralField(self.grid, four=self.four * symbol)

    def _check(self, other: "SpectralField"):
        if other.grid != self.grid:
            raise ValueError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return SpectralField(self.grid, four=self.four + other.four)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return SpectralField(self.grid, four=self.four - other.four)
        return NotImplemented

    def __neg__(self):
        return SpectralField(self.grid, four=-self.four)

    def __mul__(self, c):
        if np.isscalar(c):
            return SpectralField(self.grid, four=self.four * c)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if np.isscalar(c):
            return SpectralField(self.grid, four=self.four / c)
        return NotImplemented

    def __repr__(self):
        return f"SpectralField(K={self.grid.K}, N={self.grid.N})"


def _frozen(a, n) -> np.ndarray:
    out = np.array(a, dtype=complex)
    if out.shape != (n,):
        raise ValueError(f"expected shape ({n},), got {out.shape}")
    out.flags.writeable = False
    return out


def forward_transform(f: SpectralField) -> SpectralField:
    """Return ``f`` with its Fourier representation current."""
    return SpectralField(f.grid, four=f.four)


def inverse_transform(f: SpectralField) -> SpectralField:
    return SpectralField(f.grid, phys=f.phys)


def h_norm(f: SpectralField, theta: float = 0.0) -> float:
    """Bessel-potential norm ``(sum (1+xi^2)^theta |u_hat|^2 dxi)^(1/2)``."""
    if not np.isfinite(theta) or theta < 0:
        raise ValueError(f"Sobolev index must be finite and >= 0, got {theta}")
    g = f.grid
    w = (1.0 + g.xi**2) ** theta
    return float(np.sqrt(np.sum(w * np.abs(f.four) ** 2) * g.dxi))


def l1_fourier_norm(f: SpectralField) -> float:
    """``||u_hat||_{L^1}`` as a Riemann sum over the lattice."""
    return float(np.sum(np.abs(f.four)) * f.grid.dxi)


def derivative(f: SpectralField, m: int = 1) -> SpectralField:
    """Spectral ``m``-th derivative; the Nyquist mode is dropped for odd ``m``."""
    g = f.grid
    sym = (1j * g.xi) ** m
    if m % 2:
        sym = sym.copy()
        sym[g.N // 2] = 0.0
    return f.multiply_symbol(sym)


def cb_norm(f: SpectralField, k: int) -> float:
    """Integer-order surrogate of the C^k_b norm: sum of sup-norms of derivatives."""
    if k not in (0, 1, 2, 3):
        raise ValueError(f"cb_norm supports k in 0..3, got {k}")
    total = float(np.max(np.abs(f.phys)))
    for m in range(1, k + 1):
        total += float(np.max(np.abs(derivative(f, m).phys)))
    return total


def dealiased_product(*fields: SpectralField, pad: int = 2) -> SpectralField:
    """Pointwise product computed on a ``pad``-times refined grid, then truncated."""
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise ValueError("grid mismatch in product")
    n, m = g.N, pad * g.N
    prod = np.ones(m, dtype=complex)
    for f in fields:
        prod *= np.fft.ifft(_pad(np.fft.fft(f.phys), n, m)) * (m / n)
    spec = _truncate(np.fft.fft(prod), n, m) * (n / m)
    return SpectralField(g, phys=np.fft.ifft(spec))


def _pad(spec: np.ndarray, n: int, m: int) -> np.ndarray:
    out = np.zeros(m, dtype=complex)
    h = n // 2
    out[:h] = spec[:h]
    out[-h:] = spec[-h:]
    # split the Nyquist mode so real signals stay real
    out[h] = 0.5 * spec[h]
    out[m - h] = 0.5 * spec[h]
    return out


def _truncate(spec: np.ndarray, n: int, m: int) -> np.ndarray:
    h = n // 2
    out = np.empty(n, dtype=complex)
    out[:h] = spec[:h]
    out[h + 1:] = spec[m - h + 1:]
    out[h] = spec[h] + spec[m - h]
    return out


def shift_frequency(f: SpectralField, k: int) -> SpectralField:
    """Multiply by ``exp(i k x)`` for integer ``k``: an exact lattice shift by ``kK``."""
    g = f.grid
    s = k * g.K
    four = f.four
    if s == 0:
        return f
    # modes wrapping around the Nyquist boundary must be negligible
    j_new = g.j + s
    wrap = (j_new < -g.N // 2) | (j_new >= g.N // 2)
    if np.any(wrap) and np.max(np.abs(four[wrap])) > 1e-13 * max(np.max(np.abs(four)), 1e-300):
        raise ValueError(f"shift by {k} wraps non-negligible modes past Nyquist")
    return SpectralField(g, four=np.roll(four, s))


def slow_grid_matches(slow: Grid1D, fast: Grid1D, eps: float, rtol: float = 1e-12) -> bool:
    return abs(eps * fast.L - slow.L) <= rtol * slow.L


def fast_grid_for(slow: Grid1D, eps: float, points_per_unit: int = 16) -> Grid1D:
    """Fast grid with ``eps * L = L_X``; raises if ``eps`` is not admissible."""
    K = slow.K / eps
    if abs(K - round(K)) > 1e-9 * K:
        raise ValueError(
            f"eps={eps} is not admissible: L_X/(2 pi eps) = {K:.12g} is not an integer"
        )
    K = int(round(K))
    return Grid1D(K=K, N=points_per_unit * K)


def admissible_eps(slow: Grid1D, K: int) -> float:
    return slow.K / K


def scale_embed(f_slow: SpectralField, eps: float, k: int, fast: Grid1D) -> SpectralField:
    """Return ``x -> f(eps x) exp(i k x)`` on ``fast`` by exact Fourier interpolation.

    Slow mode ``Xi_j`` lands on fast frequency ``eps Xi_j + k``, which is the
    lattice point with index ``j + k K``; coefficients pick up the factor
    ``1/eps`` of the continuum dilation rule.
    """
    slow = f_slow.grid
    if not slow_grid_matches(slow, fast, eps):
        raise ValueError(
            f"incommensurate eps={eps}: eps*L={eps * fast.L:.15g} != L_X={slow.L:.15g}"
        )
    if abs(k) > 4:
        raise ValueError(f"|k| must be <= 4, got {k}")
    # eps * dXi_slow == dxi_fast, so slow index j maps to fast index j + kK
    target = slow.j + k * fast.K
    ok = (target >= -fast.N // 2) & (target < fast.N // 2)
    coef = f_slow.four / eps
    if np.any(~ok):
        lost = np.max(np.abs(coef[~ok]))
        if lost > 1e-12 * max(np.max(np.abs(coef)), 1e-300):
            raise ValueError("slow modes do not fit on the fast lattice")
    four = np.zeros(fast.N, dtype=complex)
    four[target[ok] % fast.N] = coef[ok]
    return SpectralField(fast, four=four)
