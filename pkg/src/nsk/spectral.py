"""
Periodic grids and Fourier-multiplier operators.

Fields are plain ``numpy`` arrays sampled on the nodes of a :class:`Grid`.
A scalar field has shape ``grid.shape``; a vector field stacks ``dim``
components along a leading axis, ``(dim, *grid.shape)``; a tensor field
has shape ``(dim, dim, *grid.shape)``.  All transforms act on the trailing
``dim`` axes, so operators broadcast over any leading axes.

Wavenumbers are ``xi = 2*pi*k/L`` with integer ``k``.  Odd-order
multipliers (first derivatives, Riesz transforms) vanish on the Nyquist
line of the differentiated axis, which keeps outputs of real fields real.
Even-order multipliers (Laplacian, ``|xi|^s``) keep the Nyquist modes.
Operator identities mixing the two families are exact on fields without
Nyquist content; :meth:`Grid.random_field` produces such fields.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .errors import NegativePowerOnMean, NonZeroMean

__all__ = ["Grid"]

# relative size of a mean that counts as "nonzero"
MEAN_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[0, length)^dim``.

    Parameters
    ----------
    dim : int
        Spatial dimension, 1 or 2.
    n : int
        Points per dimension, a power of two no smaller than 8.
    length : float
        Period of the domain along every axis.
    """

    dim: int
    n: int
    length: float = 2.0 * math.pi

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")

    # ------------------------------------------------------------------
    # geometry
    # ------------------------------------------------------------------
    @property
    def shape(self):
        return (self.n,) * self.dim

    @property
    def size(self):
        return self.n ** self.dim

    @property
    def dx(self):
        return self.length / self.n

    @property
    def cell_volume(self):
        return self.dx ** self.dim

    @property
    def volume(self):
        return self.length ** self.dim

    @property
    def axes(self):
        return tuple(range(-self.dim, 0))

    @cached_property
    def coordinates(self):
        """Node coordinates, one array of shape ``grid.shape`` per axis."""
        x = np.arange(self.n) * self.dx
        return np.meshgrid(*([x] * self.dim), indexing="ij")

    def displacement(self, center):
        """Minimal-image displacement ``x - center`` for every node."""
        center = np.broadcast_to(np.asarray(center, dtype=float), (self.dim,))
        half = 0.5 * self.length
        return np.stack([
            np.mod(x - c + half, self.length) - half
            for x, c in zip(self.coordinates, center)
        ])

    # ------------------------------------------------------------------
    # spectral layout
    # ------------------------------------------------------------------
    @cached_property
    def _index(self):
        # integer wavenumbers per axis, broadcastable to the rfft layout
        full = np.fft.fftfreq(self.n, 1.0 / self.n)
        half = np.fft.rfftfreq(self.n, 1.0 / self.n)
        if self.dim == 1:
            return [half]
        return [full[:, None], half[None, :]]

    @cached_property
    def spectral_shape(self):
        return self.shape[:-1] + (self.n // 2 + 1,)

    @cached_property
    def wavenumbers(self):
        """Physical wavenumbers ``xi_i``, broadcastable to the spectral layout."""
        scale = 2.0 * math.pi / self.length
        return [scale * k for k in self._index]

    @cached_property
    def xi2(self):
        return np.broadcast_to(
            sum(k ** 2 for k in self.wavenumbers), self.spectral_shape
        ).copy()

    @cached_property
    def xi_abs(self):
        return np.sqrt(self.xi2)

    @cached_property
    def _nonzero(self):
        return self.xi2 > 0

    @cached_property
    def ik(self):
        """First-derivative multipliers with the Nyquist line removed."""
        out = []
        for k, idx in zip(self.wavenumbers, self._index):
            m = 1j * np.where(np.abs(idx) == self.n // 2, 0.0, k)
            out.append(np.broadcast_to(m, self.spectral_shape).copy())
        return out

    @cached_property
    def dealias_mask(self):
        """Two-thirds rule: keep modes with ``|k_i| < n/3`` on every axis."""
        cut = self.n / 3.0
        mask = np.ones(self.spectral_shape, dtype=bool)
        for idx in self._index:
            mask &= np.abs(idx) < cut
        return mask

    @cached_property
    def _rfft_weight(self):
        # multiplicity of each stored coefficient in the full spectrum
        w = np.full(self.spectral_shape, 2.0)
        w[..., 0] = 1.0
        w[..., self.n // 2] = 1.0
        return w

    # ------------------------------------------------------------------
    # transforms
    # ------------------------------------------------------------------
    def fft(self, f):
        return np.fft.rfftn(f, axes=self.axes)

    def ifft(self, fh):
        return np.fft.irfftn(fh, s=self.shape, axes=self.axes)

    def dealias(self, f):
        """Zero the modes outside the two-thirds band."""
        return self.ifft(self.fft(f) * self.dealias_mask)

    # ------------------------------------------------------------------
    # quadrature and norms
    # ------------------------------------------------------------------
    def integrate(self, f):
        """Rectangle-rule integral over the trailing ``dim`` axes."""
        return np.sum(f, axis=self.axes) * self.cell_volume

    def mean(self, f):
        return np.mean(f, axis=self.axes)

    def lp_norm(self, f, p=2.0):
        f = np.abs(f)
        if math.isinf(p):
            return float(np.max(f))
        return float(self.integrate(f ** p) ** (1.0 / p))

    def l2_norm(self, f):
        return float(np.sqrt(self.integrate(np.asarray(f) ** 2).sum()))

    def modal_energy(self, f):
        """``int |f|^2`` computed from Fourier coefficients (Parseval)."""
        fh = self.fft(f)
        return float(self.volume * np.sum(self._rfft_weight * np.abs(fh) ** 2)
                     / self.size ** 2)

    def random_field(self, rng, kmax=None, amplitude=1.0, zero_mean=False):
        """Smooth random field with modes ``|k_i| <= kmax``, no Nyquist content.

        Coefficients decay like ``exp(-|k|/kmax)`` so fields are analytic
        at every resolution; the result is scaled to ``max|f| = amplitude``.
        """
        if kmax is None:
            kmax = self.n // 4
        kmax = min(int(kmax), self.n // 2 - 1)
        keep = np.ones(self.spectral_shape, dtype=bool)
        for idx in self._index:
            keep &= np.abs(idx) <= kmax
        kk = np.sqrt(sum(idx.astype(float) ** 2 for idx in self._index))
        decay = np.exp(-kk / max(kmax, 1))
        coef = (rng.standard_normal(self.spectral_shape)
                + 1j * rng.standard_normal(self.spectral_shape)) * decay * keep
        if zero_mean:
            coef[(0,) * self.dim] = 0.0
        f = self.ifft(coef)
        peak = np.max(np.abs(f))
        if peak == 0.0:
            return f
        return f * (amplitude / peak)

    # ------------------------------------------------------------------
    # differential operators
    # ------------------------------------------------------------------
    def derivative(self, f, axis):
        return self.ifft(self.ik[axis] * self.fft(f))

    def gradient(self, f):
        fh = self.fft(f)
        return np.stack([self.ifft(m * fh) for m in self.ik], axis=-self.dim - 1)

    def divergence(self, v):
        v = np.asarray(v)
        vh = self.fft(v)
        total = sum(self.ik[i] * np.take(vh, i, axis=-self.dim - 1)
                    for i in range(self.dim))
        return self.ifft(total)

    def divergence_tensor(self, t):
        """Row-wise divergence ``sum_j d_j T_ij`` of a tensor field."""
        th = self.fft(np.asarray(t))
        rows = [sum(self.ik[j] * th[i, j] for j in range(self.dim))
                for i in range(self.dim)]
        return self.ifft(np.stack(rows))

    def laplacian(self, f):
        return self.ifft(-self.xi2 * self.fft(f))

    def _check_mean(self, f, exc, what):
        f = np.asarray(f)
        scale = float(np.max(np.abs(f))) if f.size else 0.0
        m = np.abs(self.mean(f))
        if np.any(m > MEAN_TOL * max(scale, np.finfo(float).tiny)):
            raise exc(f"{what} requires a zero-mean field (mean = {np.max(m):.3e})")

    def fractional_power(self, f, s):
        """Apply ``Lambda^s``, the multiplier ``|xi|^s``.

        The zero mode is annihilated for ``s != 0`` and left alone for
        ``s == 0``.  Negative powers require a zero-mean input.
        """
        if s == 0:
            return np.array(f, dtype=float, copy=True)
        if s < 0:
            self._check_mean(f, NegativePowerOnMean, f"Lambda^{s}")
        mult = np.zeros(self.spectral_shape)
        mult[self._nonzero] = self.xi_abs[self._nonzero] ** s
        return self.ifft(mult * self.fft(f))

    def riesz(self, f, axis):
        """Riesz transform ``R_i``: multiplier ``i xi_i / |xi|``, zero on the mean."""
        mult = np.zeros(self.spectral_shape, dtype=complex)
        nz = self._nonzero
        mult[nz] = self.ik[axis][nz] / self.xi_abs[nz]
        return self.ifft(mult * self.fft(f))

    def inverse_laplacian(self, f):
        """Zero-mean solution ``g`` of ``laplacian(g) = f``."""
        self._check_mean(f, NonZeroMean, "inverse_laplacian")
        mult = np.zeros(self.spectral_shape)
        mult[self._nonzero] = -1.0 / self.xi2[self._nonzero]
        return self.ifft(mult * self.fft(f))

    def sobolev_norm(self, f, s, homogeneous=True):
        """``||Lambda^s f||`` (homogeneous) or ``(||f||^2 + ||Lambda^s f||^2)^(1/2)``.

        The homogeneous norm is a seminorm blind to the mean, also at ``s = 0``.
        """
        if homogeneous and s < 0:
            self._check_mean(f, NegativePowerOnMean, f"H^{s} norm")
        fh = self.fft(f)
        mult = np.zeros(self.spectral_shape)
        mult[self._nonzero] = self.xi2[self._nonzero] ** s
        if s == 0 and not homogeneous:
            mult[...] = 1.0
        energy = self.volume * np.sum(self._rfft_weight * mult * np.abs(fh) ** 2,
                                      axis=self.axes) / self.size ** 2
        if not homogeneous:
            energy = energy + self.volume * np.sum(
                self._rfft_weight * np.abs(fh) ** 2, axis=self.axes) / self.size ** 2
        return np.sqrt(energy)

    # ------------------------------------------------------------------
    # dyadic decomposition
    # ------------------------------------------------------------------
    def dyadic_blocks(self, f):
        """Sharp Littlewood-Paley pieces of ``f``.

        Returns a list of ``(j, block)`` pairs: ``j = -1`` is the low block
        ``|xi| < 1`` and ``j >= 0`` collects ``2^j <= |xi| < 2^(j+1)``.
        """
        fh = self.fft(f)
        out = [(-1, self.ifft(fh * (self.xi_abs < 1.0)))]
        top = float(self.xi_abs.max())
        j = 0
        while 2.0 ** j <= top:
            band = (self.xi_abs >= 2.0 ** j) & (self.xi_abs < 2.0 ** (j + 1))
            out.append((j, self.ifft(fh * band)))
            j += 1
        return out

    def besov_norm(self, f, s, p, q):
        """Discrete ``B^s_{p,q}`` norm from sharp dyadic blocks.

        The low block carries unit weight; block ``j >= 0`` is weighted by
        ``2^(j s)``.  ``p`` and ``q`` may be ``math.inf``.
        """
        if not (p >= 1 and q >= 1):
            raise ValueError("besov_norm needs p, q in [1, inf]")
        terms = []
        for j, block in self.dyadic_blocks(f):
            weight = 1.0 if j < 0 else 2.0 ** (j * s)
            terms.append(weight * self.lp_norm(block, p))
        terms = np.asarray(terms)
        if math.isinf(q):
            return float(terms.max())
        return float(np.sum(terms ** q) ** (1.0 / q))
