"""Interval propagators entering the BV-BFV Feynman rules.

Everything lives on the unit interval; the physical propagator is the
step kernel, and the ghost kernel of the cases with residual fields
subtracts the line (s - t_a)/(t_b - t_a) so that it integrates to zero
against the constant mode.
"""

from __future__ import annotations

__all__ = ["Propagator", "propagator"]

_CASES = ("I", "II", "III", "INL", "IIINL")


def _theta(x: float) -> float:
    return 1.0 if x > 0 else 0.0


class Propagator:
    """Closed-form kernel eta(s, t) on the interval square."""

    __slots__ = ("case", "sector", "form", "t_a", "t_b", "balanced")

    def __init__(self, case, sector, form, balanced=False):
        self.case = case
        self.sector = sector
        self.form = form
        self.t_a = 0.0
        self.t_b = 1.0
        self.balanced = balanced
        self._check()

    def __call__(self, s, t):
        return self.form(s, t)

    def jump(self, t, eps=1e-6):
        """eta as s crosses t from above minus from below."""
        return self.form(t + eps, t) - self.form(t - eps, t)

    def integral_dt(self, s):
        """Integral of eta(s, .) over the interval, exact for step forms."""
        theta_part = min(max(s - self.t_a, 0.0), self.t_b - self.t_a)
        if not self.balanced:
            return theta_part
        return theta_part - (s - self.t_a)

    def _check(self):
        grid = [i / 16 for i in range(1, 16)]
        for t in grid:
            assert abs(self.jump(t) - 1.0) < 1e-9
            assert self.form(self.t_a, t) == 0.0
        if self.balanced:
            for t in grid:
                assert self.form(self.t_b, t) == 0.0
            for s in grid:
                assert abs(self.integral_dt(s)) < 1e-12
        else:
            for s in grid:
                assert self.form(s, self.t_b) == 0.0

    def __repr__(self):
        return f"Propagator(case {self.case}, {self.sector})"


def propagator(case: str, sector: str) -> Propagator:
    """Propagator for the given case and sector.

    The physical sector is theta(s - t) throughout; the ghost sector
    follows it except in the cases with residual fields, where the
    zero mode is projected out.
    """
    if case not in _CASES:
        raise ValueError(f"unknown case {case!r}")
    if sector == "physical":
        return Propagator(case, sector, lambda s, t: _theta(s - t))
    if sector != "ghost":
        raise ValueError(f"unknown sector {sector!r}")
    if case in ("I", "INL"):
        return Propagator(case, sector, lambda s, t: _theta(s - t) - s,
                          balanced=True)
    return Propagator(case, sector, lambda s, t: _theta(s - t))
