"""Back-of-envelope labor losses from deaths and sickness.

These are side calculations for comparing the direct epidemic toll with
the distancing shocks; nothing here feeds the shock pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadCount, BadShare


@dataclass(frozen=True)
class EpidemicParams:
    attack_rate: float
    fatality: float
    weeks_out: float = 3.0
    weeks_per_year: float = 48.0

    def __post_init__(self):
        if not 0.0 <= self.attack_rate <= 1.0:
            raise BadShare(f"attack rate must lie in [0, 1], got {self.attack_rate}")
        if not 0.0 <= self.fatality <= 1.0:
            raise BadShare(f"fatality must lie in [0, 1], got {self.fatality}")
        if not 0.0 < self.weeks_out <= self.weeks_per_year:
            raise BadShare("weeks out of work must lie in (0, weeks_per_year]")


def labor_loss_mortality(p: EpidemicParams) -> float:
    """Permanent fall in the labor force: attack rate times fatality."""
    return p.attack_rate * p.fatality


def labor_loss_morbidity(p: EpidemicParams, deaths_share: float) -> float:
    """Annualized labor-supply loss of survivors who are off sick.

    ``deaths_share`` is passed explicitly rather than derived as
    ``attack_rate * fatality``; the two differ in commonly quoted worked
    examples (0.01 versus 0.008).
    """
    if not 0.0 <= deaths_share <= p.attack_rate:
        raise BadShare(f"deaths share {deaths_share} must lie in [0, attack rate {p.attack_rate}]")
    return (p.weeks_out / p.weeks_per_year) * (p.attack_rate - deaths_share)


def attack_rate_estimate(
    confirmed: float,
    population: float,
    peak_doubling: float = 2.0,
    underascertainment: float = 1.0,
) -> float:
    """Share of the population eventually infected.

    Confirmed cases are doubled for a symmetric epidemic curve seen at its
    peak, then scaled up for undetected cases.
    """
    if population <= 0:
        raise BadCount("population must be positive")
    if confirmed < 0:
        raise BadCount("confirmed cases cannot be negative")
    if peak_doubling < 1 or underascertainment < 1:
        raise BadCount("scaling factors must be at least 1")
    return confirmed * peak_doubling * underascertainment / population
