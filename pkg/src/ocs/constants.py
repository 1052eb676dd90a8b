"""Physical constants in the nm / fs / eV unit system."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HBAR_EV_FS = 0.6582119569
HBAR2_OVER_2M_ELECTRON = 0.0380998


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar in eV*fs and the kinetic prefactor hbar^2/2m in eV*nm^2."""

    hbar: float = HBAR_EV_FS
    hbar2_over_2m: float = HBAR2_OVER_2M_ELECTRON

    def __post_init__(self):
        if not (self.hbar > 0 and self.hbar2_over_2m > 0):
            raise ValidationError("hbar and hbar2_over_2m must be positive")

    @property
    def m_over_hbar(self) -> float:
        """m/hbar in fs/nm^2."""
        return self.hbar / (2.0 * self.hbar2_over_2m)

    def energy(self, k):
        return self.hbar2_over_2m * np.square(k)

    def wavenumber(self, energy):
        return np.sqrt(np.asarray(energy, dtype=float) / self.hbar2_over_2m)

    def velocity(self, k):
        """Group velocity hbar*k/m in nm/fs."""
        return 2.0 * self.hbar2_over_2m * np.asarray(k, dtype=float) / self.hbar

    def kappa(self, V, energy):
        """Decay constant sqrt((V-E)/c2); negative argument gives nan."""
        return np.sqrt((np.asarray(V, dtype=float) - energy) / self.hbar2_over_2m)


def electron_constants() -> PhysicalConstants:
    return PhysicalConstants()
