"""HP linear dopant-drift memristor.

The device obeys ``R dR/dt = K * dV`` where ``dV`` is the signed voltage
across the memristor and ``K = mu_v * R_on * (R_off - R_on) / d**2``.
Integrating gives ``R(t)**2 = R(0)**2 + 2 K * integral(dV dt)``, which is
what :func:`resistance_after` evaluates.  All quantities are SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """A parameter set violates one of its invariants."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


@dataclass(frozen=True)
class MemristorParams:
    """Physical device parameters.

    Parameters
    ----------
    r_on, r_off : float
        Fully doped / undoped resistance limits (ohm).
    d : float
        Device thickness (m).
    mu_v : float
        Dopant mobility (m^2 s^-1 V^-1).
    r_init : float
        Resistance before the first trigger (ohm).
    """

    r_on: float
    r_off: float
    d: float
    mu_v: float
    r_init: float

    def __post_init__(self):
        if not 0 < self.r_on:
            raise ParameterError(f"r_on must be > 0 (got {self.r_on})")
        if not self.r_on < self.r_off:
            raise ParameterError(f"r_on < r_off violated ({self.r_on} >= {self.r_off})")
        if not self.d > 0:
            raise ParameterError(f"d must be > 0 (got {self.d})")
        if not self.mu_v > 0:
            raise ParameterError(f"mu_v must be > 0 (got {self.mu_v})")
        if not self.r_on <= self.r_init <= self.r_off:
            raise ParameterError(
                f"r_on <= r_init <= r_off violated (r_init={self.r_init})"
            )

    @property
    def k(self) -> float:
        return mobility_constant(self)


def mobility_constant(p: MemristorParams) -> float:
    """Rate constant K in ohm^2 V^-1 s^-1."""
    return p.mu_v * p.r_on * (p.r_off - p.r_on) / p.d**2


def resistance_derivative(r_m: float, dv_m: float, k: float) -> float:
    """dR/dt for a memristor at ``r_m`` with ``dv_m = V_m - V_bias`` across it.

    Positive ``dv_m`` increases the resistance.
    """
    if not r_m > 0:
        raise DomainError(f"resistance must be positive (got {r_m})")
    return k * dv_m / r_m


def resistance_after(r_start: float, signed_volt_seconds: float, k: float,
                     p: MemristorParams) -> float:
    """Resistance after applying ``signed_volt_seconds`` of drive from ``r_start``.

    The result saturates at the device limits.  A drive large enough to make
    the squared resistance negative lands on ``r_on``.
    """
    sq = r_start * r_start + 2.0 * k * signed_volt_seconds
    if sq <= p.r_on * p.r_on:
        return p.r_on
    r = math.sqrt(sq)
    if r > p.r_off:
        return p.r_off
    return r
