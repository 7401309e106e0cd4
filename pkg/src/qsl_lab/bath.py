"""Bath spectral densities, correlation functions and decoherence integrals.

Two spectral families are supported:

* exponential-cutoff power law  J(w) = coupling * w^s * wc^(1-s) * exp(-w/wc),
  with ohmicity exponent s (s = 1 Ohmic, s < 1 sub-Ohmic);
* Drude-Lorentz  J(w) = 2 * coupling * wc * w / (pi * (wc^2 + w^2)).

From these the module computes, at temperature T (k_B = 1, hbar = 1):

* the bath correlation function
      C(t) = int dw J(w) [coth(w/2T) cos(wt) - i sin(wt)],
* the pure-dephasing exponent
      Gamma(t) = 4 int dw J(w) coth(w/2T) (1 - cos(wt)) / w^2,
  and its time derivative (differentiated under the integral),
* the pulse-train variant Gamma_p(N, dt) evaluated at the periodic points
  t = 2*N*dt, where the train of ideal pi pulses reshapes the spectrum by
  the filter tan^2(w*dt/2),
* the finite-temperature exponential expansion of the Drude correlation
  function over Matsubara frequencies nu_k = 2*pi*k*T, plus the Markovian
  weight of the truncated tail.

Numerical scheme: the integrands are smooth apart from a removable 0/0 at
w = 0 (replaced by a four-term Taylor product below a guard frequency) and
the removable double poles of the pulse filter (replaced by their limit
inside a narrow guard window). Oscillatory long bands are delegated to the
QAWO / QAWF rules so accuracy does not degrade with t. Error estimates are
accumulated across pieces and enforced against the documented tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError, ParameterError
from .quadrature import (
    adaptive_simpson,
    band_quad,
    oscillatory_band_quad,
    oscillatory_tail_quad,
)

TEMPERATURE_FLOOR = 1e-12  # temperatures below this are treated as exactly zero

GAMMA_ABS_TOL = 1e-9
GAMMA_REL_TOL = 1e-8
PULSED_REL_TOL = 1e-7

_MAX_BAND_CYCLES = 12  # direct-rule oscillation budget before switching to QAWO/QAWF


@dataclass(frozen=True)
class OhmicLikeSpec:
    """Exponential-cutoff spectral density with dimensionless coupling.

    coupling >= 0, cutoff > 0 (1/time), ohmicity > 0.
    """

    coupling: float
    cutoff: float
    ohmicity: float = 1.0

    def __post_init__(self):
        if self.coupling < 0.0:
            raise ParameterError(f"coupling must be >= 0, got {self.coupling}")
        if self.cutoff <= 0.0:
            raise ParameterError(f"cutoff frequency must be > 0, got {self.cutoff}")
        if self.ohmicity <= 0.0:
            raise ParameterError(f"ohmicity exponent must be > 0, got {self.ohmicity}")

    def density(self, omega: float) -> float:
        if omega == 0.0:
            return 0.0
        lw = (self.ohmicity * math.log(omega) + (1.0 - self.ohmicity) * math.log(self.cutoff)
              - omega / self.cutoff)
        return self.coupling * math.exp(lw)


@dataclass(frozen=True)
class DrudeSpec:
    """Ohmic spectral density with a Drude (Lorentzian) cutoff."""

    coupling: float
    cutoff: float

    def __post_init__(self):
        if self.coupling < 0.0:
            raise ParameterError(f"coupling must be >= 0, got {self.coupling}")
        if self.cutoff <= 0.0:
            raise ParameterError(f"cutoff frequency must be > 0, got {self.cutoff}")

    def density(self, omega: float) -> float:
        return 2.0 * self.coupling * self.cutoff * omega / (math.pi * (self.cutoff**2 + omega**2))


def spectral_density(spec, omega: float) -> float:
    """J(omega) on the non-negative half line."""
    if omega < 0.0:
        raise DomainError(f"spectral density is used on omega >= 0, got {omega}")
    return spec.density(omega)


# ---------------------------------------------------------------------------
# stable integrand pieces
# ---------------------------------------------------------------------------

def _coth(x: float) -> float:
    return 1.0 / math.tanh(x)


def _coth_series(x: float) -> float:
    # coth(x) = 1/x + x/3 - x^3/45 + 2 x^5/945 + O(x^7)
    return 1.0 / x + x * (1.0 / 3.0 + x * x * (-1.0 / 45.0 + x * x * (2.0 / 945.0)))


def _one_minus_cos_over_sq(u: float) -> float:
    # (1 - cos u)/u^2 = 1/2 - u^2/24 + u^4/720 - u^6/40320 + O(u^8)
    u2 = u * u
    return 0.5 + u2 * (-1.0 / 24.0 + u2 * (1.0 / 720.0 - u2 / 40320.0))


def _sinc(u: float) -> float:
    # sin(u)/u = 1 - u^2/6 + u^4/120 - u^6/5040 + O(u^8)
    u2 = u * u
    return 1.0 + u2 * (-1.0 / 6.0 + u2 * (1.0 / 120.0 - u2 / 5040.0))


def _small_w_guard(spec, temperature: float) -> float:
    if temperature > 0.0:
        return 1e-4 * min(spec.cutoff, 2.0 * temperature)
    return 1e-4 * spec.cutoff


def _thermal(w: float, temperature: float, guard: float) -> float:
    """coth(w/2T), series form below the guard frequency, 1 at T = 0."""
    if temperature == 0.0:
        return 1.0
    x = 0.5 * w / temperature
    if w < guard:
        return _coth_series(x)
    return _coth(x)


def _omega_cap(spec, temperature: float, t: float) -> float:
    """Band edge beyond which the exponential-cutoff integrand is negligible."""
    cap = max(50.0 * spec.cutoff, 40.0 * temperature)
    if t > 0.0:
        cap = max(cap, 20.0 * math.pi / t)
    return cap


def _normalize_temperature(temperature: float) -> float:
    if temperature < 0.0:
        raise ParameterError(f"temperature must be >= 0, got {temperature}")
    return 0.0 if temperature < TEMPERATURE_FLOOR else float(temperature)


# ---------------------------------------------------------------------------
# decoherence exponent Gamma(t) and its rate
# ---------------------------------------------------------------------------

def _gamma_pieces(spec, temperature: float, t: float):
    """Sum of quadrature pieces for Gamma(t); returns (value, error_estimate)."""
    guard = _small_w_guard(spec, temperature)

    def stable(w):
        if w == 0.0:
            return 0.0
        if w < guard:
            body = t * t * _one_minus_cos_over_sq(w * t)
        else:
            s = math.sin(0.5 * w * t)
            body = 2.0 * s * s / (w * w)
        return 4.0 * spec.density(w) * body * _thermal(w, temperature, guard)

    def envelope(w):
        return 4.0 * spec.density(w) * _thermal(w, temperature, guard) / (w * w)

    drude = isinstance(spec, DrudeSpec)
    cap = _omega_cap(spec, temperature, t)
    a0 = 2.0 * math.pi * _MAX_BAND_CYCLES / t

    total = 0.0
    err = 0.0
    if a0 >= cap and not drude:
        v, e = band_quad(stable, 0.0, cap, points=[guard, spec.cutoff])
        total, err = v, e
        err += 4.0 * spec.cutoff * stable(cap)  # analytic tail bound, exp cutoff
    else:
        a0 = min(a0, cap)
        v, e = band_quad(stable, 0.0, a0, points=[guard, min(spec.cutoff, a0 * 0.5)])
        total += v
        err += e
        if drude:
            a1 = max(a0, 40.0 * temperature, 20.0 * spec.cutoff)
            if a1 > a0:
                v, e = band_quad(envelope, a0, a1)
                total += v
                err += e
                v, e = oscillatory_band_quad(envelope, a0, a1, t, "cos")
                total -= v
                err += e
            # DC tail with coth -> 1 (a1 >= 40 T makes the thermal correction ~e^-80)
            lam, wc = spec.coupling, spec.cutoff
            total += (4.0 * lam / (math.pi * wc)) * math.log1p(wc * wc / (a1 * a1))
            v, e = oscillatory_tail_quad(envelope, a1, t, "cos")
            total -= v
            err += e
        else:
            v, e = band_quad(envelope, a0, cap)
            total += v
            err += e
            v, e = oscillatory_band_quad(envelope, a0, cap, t, "cos")
            total -= v
            err += e
            err += 4.0 * spec.cutoff * envelope(cap)
    return total, err


@lru_cache(maxsize=200_000)
def decoherence_factor(spec, temperature: float, t: float) -> float:
    """Pure-dephasing exponent Gamma(t) >= 0.

    Gamma(t) = 4 int_0^inf dw J(w) coth(w/2T) (1 - cos(wt)) / w^2, with the
    T = 0 limit coth -> 1. Guaranteed to absolute error 1e-9 and relative
    error 1e-8; raises AccuracyError if the quadrature cannot certify that.
    """
    temperature = _normalize_temperature(temperature)
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t}")
    if t == 0.0 or spec.coupling == 0.0:
        return 0.0
    value, err = _gamma_pieces(spec, temperature, float(t))
    if err > max(GAMMA_ABS_TOL, GAMMA_REL_TOL * abs(value)):
        raise AccuracyError(
            f"decoherence factor quadrature achieved only {err:.3e} at t={t}",
            achieved=err,
        )
    return max(value, 0.0)


@lru_cache(maxsize=200_000)
def decoherence_rate(spec, temperature: float, t: float) -> float:
    """d Gamma / dt, computed by differentiating under the integral.

    Gamma_dot(t) = 4 int_0^inf dw J(w) coth(w/2T) sin(wt) / w. The integral
    form is smooth and avoids finite-difference step tuning.
    """
    temperature = _normalize_temperature(temperature)
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t}")
    if t == 0.0 or spec.coupling == 0.0:
        return 0.0
    t = float(t)
    guard = _small_w_guard(spec, temperature)

    def stable(w):
        if w == 0.0:
            return 0.0
        body = t * _sinc(w * t) if w < guard else math.sin(w * t) / w
        return 4.0 * spec.density(w) * body * _thermal(w, temperature, guard)

    def envelope(w):
        return 4.0 * spec.density(w) * _thermal(w, temperature, guard) / w

    drude = isinstance(spec, DrudeSpec)
    cap = _omega_cap(spec, temperature, t)
    a0 = 2.0 * math.pi * _MAX_BAND_CYCLES / t

    total = 0.0
    err = 0.0
    if a0 >= cap and not drude:
        total, err = band_quad(stable, 0.0, cap, points=[guard, spec.cutoff])
        err += 4.0 * spec.cutoff * abs(stable(cap))
    else:
        a0 = min(a0, cap)
        v, e = band_quad(stable, 0.0, a0, points=[guard, min(spec.cutoff, a0 * 0.5)])
        total += v
        err += e
        if drude:
            v, e = oscillatory_tail_quad(envelope, a0, t, "sin")
        else:
            v, e = oscillatory_band_quad(envelope, a0, cap, t, "sin")
            err += 4.0 * spec.cutoff * envelope(cap)
        total += v
        err += e
    if err > max(GAMMA_ABS_TOL, GAMMA_REL_TOL * abs(total)):
        raise AccuracyError(
            f"decoherence rate quadrature achieved only {err:.3e} at t={t}",
            achieved=err,
        )
    return total


def correlation_function(spec, temperature: float, t: float) -> complex:
    """Bath correlation C(t) = int dw J(w) [coth(w/2T) cos(wt) - i sin(wt)].

    Validation-oriented: the dephasing dynamics uses Gamma(t) directly and
    the hierarchy uses the exponential expansion; this direct quadrature is
    the independent reference both are checked against. For the Drude
    family C(t) diverges logarithmically as t -> 0, so t > 0 is required
    there.
    """
    temperature = _normalize_temperature(temperature)
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t}")
    if spec.coupling == 0.0:
        return 0.0 + 0.0j
    t = float(t)
    drude = isinstance(spec, DrudeSpec)
    if drude and t == 0.0:
        raise DomainError("Drude correlation function diverges at t = 0")
    guard = _small_w_guard(spec, temperature)

    def thermal_envelope(w):
        if w == 0.0:
            return 0.0
        return spec.density(w) * _thermal(w, temperature, guard)

    cap = _omega_cap(spec, temperature, t)
    err = 0.0

    if t == 0.0:
        real, e = band_quad(thermal_envelope, 0.0, cap, points=[guard, spec.cutoff])
        err += e
        return complex(real, 0.0)

    a0 = min(2.0 * math.pi * _MAX_BAND_CYCLES / t, cap)

    def re_band(w):
        return thermal_envelope(w) * math.cos(w * t)

    real, e = band_quad(re_band, 0.0, a0, points=[guard, min(spec.cutoff, a0 * 0.5)])
    err += e
    if drude:
        v, e = oscillatory_tail_quad(thermal_envelope, a0, t, "cos")
        real += v
        err += e
    elif a0 < cap:
        v, e = oscillatory_band_quad(thermal_envelope, a0, cap, t, "cos")
        real += v
        err += e + 2.0 * spec.cutoff * thermal_envelope(cap)

    def im_band(w):
        return spec.density(w) * math.sin(w * t)

    imag, e = band_quad(im_band, 0.0, a0, points=[min(spec.cutoff, a0 * 0.5)])
    err += e
    if drude:
        v, e = oscillatory_tail_quad(spec.density, a0, t, "sin")
        imag += v
        err += e
    elif a0 < cap:
        v, e = oscillatory_band_quad(spec.density, a0, cap, t, "sin")
        imag += v
        err += e + 2.0 * spec.cutoff * spec.density(cap)

    value = complex(real, -imag)
    if err > max(1e-10, 1e-8 * abs(value)):
        raise AccuracyError(
            f"correlation quadrature achieved only {err:.3e} at t={t}",
            achieved=err,
        )
    return value


# ---------------------------------------------------------------------------
# bang-bang pulse train
# ---------------------------------------------------------------------------

def _pulse_filter_product(w: float, t2n: float, pulse_interval: float) -> float:
    """(1 - cos(w * t2n)) * tan^2(w * dt / 2), finite across the tan poles.

    The double poles at w = (2k+1) pi / dt are cancelled by double zeros of
    the cosine factor at the periodic points t2n = 2 N dt; near a pole the
    product is evaluated through the exact shifted identity
    (1 - cos(d * t2n)) * cot^2(d * dt / 2) and, inside a 1e-7-relative
    guard window, through its limit 2 * t2n^2 / dt^2.
    """
    half = 0.5 * w * pulse_interval
    j = math.floor((half / math.pi - 0.5) + 0.5)  # nearest pole index, -1 if below first
    if j >= 0:
        wj = (2.0 * j + 1.0) * math.pi / pulse_interval
        d = w - wj
        if abs(d) < 1e-7 * wj:
            return 2.0 * t2n * t2n / (pulse_interval * pulse_interval)
        if abs(d) < 0.25 * math.pi / pulse_interval:
            # exact within the pole cell: w*t2n = wj*t2n + d*t2n with wj*t2n = 0 mod 2pi
            s = math.sin(0.5 * d * t2n)
            co = math.cos(0.5 * d * pulse_interval) / math.sin(0.5 * d * pulse_interval)
            return 2.0 * s * s * co * co
    s = math.sin(0.5 * w * t2n)
    tn = math.tan(half)
    return 2.0 * s * s * tn * tn


@lru_cache(maxsize=100_000)
def decoherence_factor_pulsed(spec, temperature: float, n_cycles: int, pulse_interval: float) -> float:
    """Decoherence exponent under an ideal pi-pulse train, at t = 2*N*dt.

    Gamma_p(N, dt) = 4 int dw J(w) coth(w/2T) (1 - cos(w t_2N)) / w^2
                     * tan^2(w dt / 2),
    defined only on the periodic lattice t_2N = 2 N dt. Certified to 1e-7
    relative accuracy; the filter poles are removable and handled by a
    guarded product, so no overflow can reach the quadrature.
    """
    temperature = _normalize_temperature(temperature)
    if pulse_interval <= 0.0:
        raise ParameterError(f"pulse interval must be > 0, got {pulse_interval}")
    if n_cycles < 1:
        raise ParameterError(f"cycle count must be >= 1, got {n_cycles}")
    if spec.coupling == 0.0:
        return 0.0
    t2n = 2.0 * n_cycles * pulse_interval
    guard = _small_w_guard(spec, temperature)

    def integrand(w):
        if w == 0.0:
            return 0.0
        th = _thermal(w, temperature, guard)
        if w < guard:
            y = 0.5 * w * pulse_interval
            tan_sq = y * y * (1.0 + y * y * (2.0 / 3.0 + y * y * (17.0 / 45.0)))
            body = t2n * t2n * _one_minus_cos_over_sq(w * t2n) * tan_sq
        else:
            body = 0.5 * _pulse_filter_product(w, t2n, pulse_interval)
        return 4.0 * spec.density(w) * th * body / (w * w)

    cap = _omega_cap(spec, temperature, t2n)
    # band boundaries: filter poles and zeros, plus oscillation chunks of the
    # cosine factor so no single panel holds more than ~50 cycles
    points = {guard, min(spec.cutoff, cap * 0.5)}
    k = 0
    while True:
        pole = (2.0 * k + 1.0) * math.pi / pulse_interval
        zero = 2.0 * (k + 1.0) * math.pi / pulse_interval
        if pole >= cap and zero >= cap:
            break
        if pole < cap:
            points.add(pole)
        if zero < cap:
            points.add(zero)
        k += 1
    chunk = 2.0 * math.pi * _MAX_BAND_CYCLES / t2n
    edges = sorted(p for p in points if 0.0 < p < cap)
    bands = []
    lo = 0.0
    for edge in edges + [cap]:
        width = edge - lo
        n_sub = max(1, int(math.ceil(width / chunk)))
        step = width / n_sub
        for i in range(n_sub):
            bands.append((lo + i * step, lo + (i + 1) * step))
        lo = edge

    total = 0.0
    err = 0.0
    for a, b in bands:
        v, e = band_quad(integrand, a, b, epsabs=1e-12 / len(bands), epsrel=1e-10)
        total += v
        err += e
    # tail bound: the filter product is bounded by its pole limit
    err += 4.0 * spec.cutoff * abs(integrand(cap))
    if err > max(1e-10, PULSED_REL_TOL * abs(total)):
        raise AccuracyError(
            f"pulsed decoherence quadrature achieved only {err:.3e} at N={n_cycles}",
            achieved=err,
        )
    return max(total, 0.0)


# ---------------------------------------------------------------------------
# Matsubara expansion of the Drude correlation function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentialExpansion:
    """C(t) ~ sum_k zeta_k exp(-nu_k t) over Matsubara frequencies.

    nu_0 is the Drude cutoff, nu_k = 2 pi k T for k >= 1; only the k = 0
    amplitude carries an imaginary part.
    """

    amplitudes: tuple  # complex zeta_k
    rates: tuple       # positive nu_k
    cutoff_index: int  # K
    temperature: float

    def __post_init__(self):
        if len(self.amplitudes) != len(self.rates):
            raise ParameterError("amplitude/rate length mismatch")
        if len(set(self.rates)) != len(self.rates):
            raise ParameterError("Matsubara rates must be distinct")
        if any(nu <= 0.0 for nu in self.rates):
            raise ParameterError("Matsubara rates must be positive")

    def evaluate(self, t: float) -> complex:
        """Partial sum sum_k zeta_k exp(-nu_k t)."""
        amps = np.asarray(self.amplitudes)
        rates = np.asarray(self.rates)
        return complex(np.sum(amps * np.exp(-rates * t)))

    def evaluate_many(self, times) -> np.ndarray:
        amps = np.asarray(self.amplitudes)
        rates = np.asarray(self.rates)
        times = np.asarray(times, dtype=float)
        return (amps[None, :] * np.exp(-np.outer(times, rates))).sum(axis=1)


def matsubara_frequency(k: int, temperature: float) -> float:
    return 2.0 * math.pi * k * temperature


def drude_expansion(spec: DrudeSpec, temperature: float, cutoff_index: int) -> ExponentialExpansion:
    """Exponential expansion of the Drude bath correlation function.

    zeta_0 = coupling * wc * (cot(wc / 2T) - i), decaying at nu_0 = wc;
    zeta_k = 4 * coupling * wc * T * nu_k / (nu_k^2 - wc^2) at nu_k = 2 pi k T.
    Requires T > 0 (the expansion has no zero-temperature limit) and wc
    off-resonant from every retained Matsubara frequency.
    """
    if not isinstance(spec, DrudeSpec):
        raise ParameterError("Matsubara expansion applies to the Drude family only")
    if temperature <= 0.0:
        raise ParameterError("Matsubara expansion requires T > 0")
    if cutoff_index < 0:
        raise ParameterError(f"cutoff index must be >= 0, got {cutoff_index}")
    wc = spec.cutoff
    lam = spec.coupling
    rates = [wc]
    for k in range(1, cutoff_index + 1):
        nu = matsubara_frequency(k, temperature)
        if abs(nu - wc) < 1e-9:
            raise ParameterError(
                f"Matsubara frequency nu_{k} = {nu} resonates with the cutoff {wc}; "
                "perturb the temperature slightly to lift the degeneracy"
            )
        rates.append(nu)
    x = 0.5 * wc / temperature
    amp0 = complex(lam * wc * (math.cos(x) / math.sin(x)), -lam * wc)
    amps = [amp0]
    for k in range(1, cutoff_index + 1):
        nu = rates[k]
        amps.append(complex(4.0 * lam * wc * temperature * nu / (nu * nu - wc * wc), 0.0))
    return ExponentialExpansion(tuple(amps), tuple(rates), cutoff_index, float(temperature))


def default_matsubara_cutoff(spec: DrudeSpec, temperature: float, *,
                             system_frequency: float = 1.0,
                             t_min: float = 0.05, t_max: float = 10.0,
                             tol: float = 1e-6, max_index: int = 4096) -> int:
    """Default expansion order: seed at nu_K > 10*max(wc, Omega), then double
    until successive partial sums of C(t) agree below ``tol`` on [t_min, t_max]."""
    scale = 10.0 * max(spec.cutoff, system_frequency)
    k = max(1, math.ceil(scale / (2.0 * math.pi * temperature)))
    times = np.linspace(t_min, t_max, 97)
    while k <= max_index:
        a = drude_expansion(spec, temperature, k).evaluate_many(times)
        b = drude_expansion(spec, temperature, 2 * k).evaluate_many(times)
        if np.max(np.abs(a - b)) < tol:
            return k
        k *= 2
    raise AccuracyError(f"Matsubara expansion did not stabilise below {tol} by K={max_index}")


def matsubara_tail_weight(spec: DrudeSpec, temperature: float, cutoff_index: int) -> float:
    """Markovian weight of the dropped Matsubara tail.

    Equals int_0^inf Re C(t) dt minus the retained sum_{k<=K} zeta_k^R/nu_k;
    the full integral has the closed form 2 * coupling * T / wc. Used by the
    hierarchy solver to close the fast (nu_k >> system scales) part of the
    correlation function as a delta term.
    """
    if temperature <= 0.0:
        raise ParameterError("Matsubara tail weight requires T > 0")
    exp = drude_expansion(spec, temperature, cutoff_index)
    retained = sum(a.real / nu for a, nu in zip(exp.amplitudes, exp.rates))
    return 2.0 * spec.coupling * temperature / spec.cutoff - retained
