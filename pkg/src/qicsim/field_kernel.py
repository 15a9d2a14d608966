"""Vacuum pairings and retarded mode functions of the massless scalar field.

Every quantity here is a one-dimensional radial momentum integral.  With
rho_i the radial Fourier factor of generator i's profile (see `smearing`),
dx the distance between two centers and dt a time difference, the pairing

    S_ij = <0| O_i O_j |0>
         = C_d int_0^inf dk w_d(k) kernel_d(k dx) rho_i(k) rho_j(k) e^{-i k dt}

uses the angular kernels sin(k dx)/(k dx) for d=3 and J0(k dx) for d=2,
with w_3(k) = k / (4 pi^2) and w_2(k) = 1 / (4 pi) absorbing the measure.
The mode function I(t, x) of a single generator is the same integral with
one rho factor and e^{-i k (t0 - t)}; its exact time derivative multiplies
the integrand by i k.

From S_ij alone follow both commutator functionals:
(1/i)<[O_i, O_j]> = 2 Im S_ij and (1/i)<[O_i, f(O_j)]> = 2 Re S_ij.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import dawsn, j0

from .errors import ConfigurationError, NumericConsistencyError
from .quadrature import damped_tail_integral, oscillatory_integral, panel_nodes
from .smearing import (
    GAUSSIAN,
    RadialSmearing,
    ft_decay_power,
    ft_frequencies,
    ft_gauss_decay,
    radial_ft,
    require_field_channel,
    support_radius,
)

if TYPE_CHECKING:  # Generator lives one layer up; only attributes are used here
    from .qic import Generator


@dataclass(frozen=True)
class ModeFunctionSample:
    """One evaluation of a generator's mode-function integral I(t, x)."""

    value: complex
    t: float
    x: tuple[float, ...]
    generator_index: int


@dataclass
class PairingMatrix:
    """Hermitian Gram matrix of vacuum pairings between generators.

    ``errors`` carries the achieved quadrature error estimate per entry so
    downstream consumers can assert accuracy instead of assuming it.
    """

    entries: np.ndarray
    errors: np.ndarray
    dimension: int

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def max_error(self) -> float:
        return float(self.errors.max()) if self.errors.size else 0.0


def _measure(d: int, k: np.ndarray) -> np.ndarray:
    if d == 3:
        return k / (4.0 * np.pi**2)
    return np.full_like(k, 1.0 / (4.0 * np.pi))


def _kernel(d: int, dx: float, k: np.ndarray) -> np.ndarray:
    if dx == 0.0:
        return np.ones_like(k)
    if d == 3:
        return np.sinc(k * (dx / np.pi))
    return j0(k * dx)


def _check_pair(gen_i: "Generator", gen_j: "Generator", d: int) -> None:
    for g in (gen_i, gen_j):
        require_field_channel(g.smearing, "pairing")
        if g.smearing.dimension != d:
            raise ConfigurationError(
                f"generator smearing dimension {g.smearing.dimension} != requested {d}"
            )


def _pair_geometry(gen_i, gen_j):
    ci = np.asarray(gen_i.smearing.center)
    cj = np.asarray(gen_j.smearing.center)
    dx = float(np.linalg.norm(ci - cj))
    tau = gen_j.coupling_time - gen_i.coupling_time  # e^{-ik(t_i - t_j)}
    return dx, tau


def _pair_envelope_power(si: RadialSmearing, sj: RadialSmearing, d: int, dx: float) -> float:
    p = ft_decay_power(si) + ft_decay_power(sj)
    if d == 3:
        p -= 1.0
        if dx > 0.0:
            p += 1.0
    elif dx > 0.0:
        p += 0.5
    return max(p, 1.5)


def pairing_detail(gen_i, gen_j, d: int, tol: float = 1e-10) -> tuple[complex, float]:
    """Pairing S_ij with its achieved quadrature error estimate."""
    _check_pair(gen_i, gen_j, d)
    si, sj = gen_i.smearing, gen_j.smearing
    dx, tau = _pair_geometry(gen_i, gen_j)

    def integrand(k):
        return (
            _measure(d, k)
            * _kernel(d, dx, k)
            * radial_ft(si, k)
            * radial_ft(sj, k)
            * np.exp(1j * tau * k)
        )

    groups = [ft_frequencies(si), ft_frequencies(sj)]
    if dx > 0.0:
        groups.append((dx,))
    return oscillatory_integral(
        integrand,
        groups,
        phase_freq=tau,
        gauss_decay=ft_gauss_decay(si) + ft_gauss_decay(sj),
        tol=tol,
        envelope_power=_pair_envelope_power(si, sj, d, dx),
    )


def pairing(gen_i, gen_j, d: int, tol: float = 1e-10) -> complex:
    """Vacuum pairing <0| O_i O_j |0> as a complex number."""
    return pairing_detail(gen_i, gen_j, d, tol)[0]


def pairing_damped(gen_i, gen_j, d: int) -> tuple[complex, float]:
    """Independent damped-tail evaluation of the pairing (cross-check path)."""
    _check_pair(gen_i, gen_j, d)
    si, sj = gen_i.smearing, gen_j.smearing
    dx, tau = _pair_geometry(gen_i, gen_j)

    def integrand(k):
        return (
            _measure(d, k)
            * _kernel(d, dx, k)
            * radial_ft(si, k)
            * radial_ft(sj, k)
            * np.exp(1j * tau * k)
        )

    omega = abs(tau) + dx + sum(ft_frequencies(si)) + sum(ft_frequencies(sj))
    decay = ft_gauss_decay(si) + ft_gauss_decay(sj)
    if decay > 0.0:
        # absolutely convergent already; a single plain evaluation suffices
        return oscillatory_integral(
            integrand, [ft_frequencies(si), ft_frequencies(sj), (dx,)],
            phase_freq=tau, gauss_decay=decay, tol=1e-12,
        )
    return damped_tail_integral(integrand, omega)


def pairing_matrix(generators, d: int, tol: float = 1e-10) -> PairingMatrix:
    """Build the full pairing matrix; upper triangle computed, mirrored by
    Hermitian symmetry (each entry's error estimate is mirrored too)."""
    n = len(generators)
    entries = np.zeros((n, n), dtype=complex)
    errors = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(i, n):
            val, err = pairing_detail(generators[i], generators[j], d, tol)
            entries[i, j] = val
            errors[i, j] = err
            if j != i:
                entries[j, i] = np.conjugate(val)
                errors[j, i] = err
    return PairingMatrix(entries=entries, errors=errors, dimension=d)


def spacelike_separated(gen_i, gen_j) -> bool:
    """True when the supports cannot be connected by a causal curve.

    Gaussian profiles have unbounded support and never qualify.  For two
    annular supports the set distance is the largest of: outer surfaces
    apart, or one annulus inside the other's hole.
    """
    si, sj = gen_i.smearing, gen_j.smearing
    if not (math.isfinite(support_radius(si)) and math.isfinite(support_radius(sj))):
        return False
    dx, _ = _pair_geometry(gen_i, gen_j)
    dist = max(
        0.0,
        dx - si.r_outer - sj.r_outer,
        si.r_inner - dx - sj.r_outer,
        sj.r_inner - dx - si.r_outer,
    )
    dt = abs(gen_i.coupling_time - gen_j.coupling_time)
    return dist > dt


# --------------------------------------------------------------------------
# mode functions
# --------------------------------------------------------------------------

_SQRT_PI = math.sqrt(math.pi)


def _E(a):
    # e^{-a^2} (1 - Erf(i a)) rewritten through the Dawson function; stays
    # bounded where Erf(i a) alone overflows
    return np.exp(-np.square(a)) - 2j / _SQRT_PI * dawsn(a)


def _gaussian_mode_closed(sigma: float, T, dx, amplitude: float = 1.0):
    """Closed-form I and dI/dt for a Gaussian profile in d = 3.

    T = t0 - t; dx = |x - x0|; vectorised over dx (T scalar).
    Small dx uses the Taylor form of the finite difference of E to avoid
    0/0 cancellation.
    """
    dx = np.asarray(dx, dtype=float)
    s2 = math.sqrt(2.0) * sigma
    delta = dx / s2
    a0 = T / s2

    I = np.empty(dx.shape, dtype=complex)
    dI = np.empty(dx.shape, dtype=complex)

    small = delta < 1e-3
    if np.any(small):
        d2 = np.square(delta[small])
        E0 = _E(a0)
        E1 = -2.0 * a0 * E0 - 2j / _SQRT_PI
        E2 = -2.0 * E0 - 2.0 * a0 * E1
        E3 = -4.0 * E1 - 2.0 * a0 * E2
        E4 = -6.0 * E2 - 2.0 * a0 * E3
        I[small] = (1j * sigma / (2.0 * math.sqrt(2.0))) * (E1 + d2 / 6.0 * E3)
        dI[small] = -(1j / 4.0) * (E2 + d2 / 6.0 * E4)
    if np.any(~small):
        dxl = dx[~small]
        am = (T - dxl) / s2
        ap = (T + dxl) / s2
        Em, Ep_ = _E(am), _E(ap)
        dEm = -2.0 * am * Em - 2j / _SQRT_PI
        dEp = -2.0 * ap * Ep_ - 2j / _SQRT_PI
        pref = sigma**2 / (4j * dxl)
        I[~small] = pref * (Em - Ep_)
        dI[~small] = pref * (-1.0 / s2) * (dEm - dEp)
    return amplitude * I, amplitude * dI


def mode_function_by_quadrature(gen, t: float, x, d: int, derivative: bool = False,
                                tol: float = 1e-10) -> tuple[complex, float]:
    """Mode-function integral by the radial oscillatory quadrature.

    Works for every supported profile; for Gaussian d=3 it cross-checks the
    closed form used by `mode_function`.
    """
    s = gen.smearing
    require_field_channel(s, "mode_function")
    if s.dimension != d:
        raise ConfigurationError("smearing dimension mismatch")
    x = np.asarray(x, dtype=float)
    if x.shape != (d,):
        raise ConfigurationError(f"point has shape {x.shape}, expected ({d},)")
    dx = float(np.linalg.norm(x - np.asarray(s.center)))
    tau = t - gen.coupling_time  # e^{-ik(t0 - t)} = e^{ik tau}

    def integrand(k):
        base = _measure(d, k) * _kernel(d, dx, k) * radial_ft(s, k) * np.exp(1j * tau * k)
        return base * (1j * k) if derivative else base

    p = ft_decay_power(s)
    if d == 3:
        p -= 1.0
        if dx > 0.0:
            p += 1.0
    elif dx > 0.0:
        p += 0.5
    if derivative:
        p -= 1.0
    groups = [ft_frequencies(s)]
    if dx > 0.0:
        groups.append((dx,))
    return oscillatory_integral(
        integrand, groups, phase_freq=tau, gauss_decay=ft_gauss_decay(s),
        tol=tol, envelope_power=max(p, 1.0),
    )


def mode_function(gen, t: float, x, d: int, tol: float = 1e-10) -> complex:
    """I(t, x): the complex integral whose -2 Im / +2 Re give the momentum-
    channel weighting components of O and f(O)."""
    s = gen.smearing
    if s.kind == GAUSSIAN and d == 3:
        require_field_channel(s, "mode_function")
        x = np.asarray(x, dtype=float)
        if x.shape != (d,):
            raise ConfigurationError(f"point has shape {x.shape}, expected ({d},)")
        dx = np.linalg.norm(x - np.asarray(s.center))
        T = gen.coupling_time - t
        I, _ = _gaussian_mode_closed(s.sigma, T, np.atleast_1d(dx), s.amplitude)
        return complex(I[0])
    return mode_function_by_quadrature(gen, t, x, d, derivative=False, tol=tol)[0]


def mode_function_dt(gen, t: float, x, d: int, tol: float = 1e-10) -> complex:
    """Exact time derivative of `mode_function` (integrand carries i k)."""
    s = gen.smearing
    if s.kind == GAUSSIAN and d == 3:
        require_field_channel(s, "mode_function")
        x = np.asarray(x, dtype=float)
        if x.shape != (d,):
            raise ConfigurationError(f"point has shape {x.shape}, expected ({d},)")
        dx = np.linalg.norm(x - np.asarray(s.center))
        T = gen.coupling_time - t
        _, dI = _gaussian_mode_closed(s.sigma, T, np.atleast_1d(dx), s.amplitude)
        return complex(dI[0])
    return mode_function_by_quadrature(gen, t, x, d, derivative=True, tol=tol)[0]


def sample_mode_function(gen, generator_index: int, t: float, x, d: int) -> ModeFunctionSample:
    value = mode_function(gen, t, x, d)
    if not np.isfinite(value.real) or not np.isfinite(value.imag):
        raise NumericConsistencyError("mode function evaluated to a non-finite value")
    return ModeFunctionSample(value=value, t=float(t),
                              x=tuple(float(v) for v in np.asarray(x, float)),
                              generator_index=generator_index)


class ModeProfileEvaluator:
    """Evaluates I(t, .) and dI/dt(t, .) for one generator on many radii.

    The node set is fixed at construction (from the largest radius that
    will be requested), so results are independent of how callers chunk
    the radii -- grid evaluations stay bit-identical under any threading.
    """

    def __init__(self, gen, t: float, d: int, dx_max: float, tol: float = 1e-10):
        self.gen = gen
        self.t = float(t)
        self.d = int(d)
        self.tol = tol
        s = gen.smearing
        require_field_channel(s, "mode profile")
        self._gaussian_closed = s.kind == GAUSSIAN and d == 3
        self._nodes = None
        if s.kind == GAUSSIAN and d == 2:
            tau = self.t - gen.coupling_time
            g = ft_gauss_decay(s)
            k_max = math.sqrt(184.0 / g)
            omega = abs(tau) + dx_max
            k, w = panel_nodes(k_max, omega, nodes_per_panel=16)
            base = w * _measure(2, k) * radial_ft(s, k) * np.exp(1j * tau * k)
            self._nodes = (k, base, base * (1j * k))

    def evaluate(self, dx) -> tuple[np.ndarray, np.ndarray]:
        dx = np.asarray(dx, dtype=float)
        gen = self.gen
        if self._gaussian_closed:
            T = gen.coupling_time - self.t
            return _gaussian_mode_closed(gen.smearing.sigma, T, dx, gen.smearing.amplitude)
        if self._nodes is not None:
            k, base, base_dt = self._nodes
            I = np.empty(dx.shape, dtype=complex)
            dI = np.empty(dx.shape, dtype=complex)
            flat = dx.ravel()
            chunk = max(1, int(4e6 // max(len(k), 1)))
            for i0 in range(0, len(flat), chunk):
                block = flat[i0 : i0 + chunk]
                M = j0(np.outer(block, k))
                I.ravel()[i0 : i0 + chunk] = M @ base
                dI.ravel()[i0 : i0 + chunk] = M @ base_dt
            return I, dI
        # hard shells: per-point accelerated quadrature (slow path)
        flat = dx.ravel()
        I = np.empty(flat.shape, dtype=complex)
        dI = np.empty(flat.shape, dtype=complex)
        center = np.asarray(gen.smearing.center)
        for i, r in enumerate(flat):
            point = center + np.eye(self.d)[0] * r
            I[i], _ = mode_function_by_quadrature(gen, self.t, point, self.d,
                                                  derivative=False, tol=self.tol)
            dI[i], _ = mode_function_by_quadrature(gen, self.t, point, self.d,
                                                   derivative=True, tol=self.tol)
        return I.reshape(dx.shape), dI.reshape(dx.shape)
