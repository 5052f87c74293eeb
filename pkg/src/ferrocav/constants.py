"""Physical constants in SI units."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """Vacuum permittivity, permeability and light speed (SI).

    The defaults satisfy mu0 = 1/(c**2 * eps0); construction fails if a
    custom triple violates that relation by more than 1e-9 relative.
    """

    eps0: float = 8.8541878128e-12  # vacuum permittivity [F/m]
    mu0: float = 1.25663706212e-6   # vacuum permeability [H/m]
    c: float = 2.99792458e8         # speed of light [m/s]

    def __post_init__(self) -> None:
        if self.eps0 <= 0.0 or self.mu0 <= 0.0 or self.c <= 0.0:
            raise ValueError("physical constants must be positive")
        residual = abs(self.mu0 * self.eps0 * self.c**2 - 1.0)
        if residual > 1e-9:
            raise ValueError(
                f"inconsistent constants: mu0*eps0*c^2 - 1 = {residual:.3e}"
            )

    @property
    def eta0(self) -> float:
        """Vacuum wave impedance [ohm]."""
        return self.mu0 * self.c


CONSTANTS = PhysicalConstants()
