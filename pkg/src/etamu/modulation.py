"""Binary modulation schemes and the unified conditional bit error rate.

Over AWGN at instantaneous SNR ``y`` the bit error probability of the four
classic binary schemes is ``Gamma(p, q*y) / (2 Gamma(p))``:

=======  ===  ===
scheme    p    q
=======  ===  ===
CBFSK    0.5  0.5
CBPSK    0.5  1
NBFSK    1    0.5
DBPSK    1    1
=======  ===  ===
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterOutOfRange
from .specfun import upper_incomplete_gamma


@dataclass(frozen=True)
class ModulationScheme:
    name: str
    p: float
    q: float

    def __post_init__(self):
        if not self.p > 0:
            raise ParameterOutOfRange("p", self.p, "(0, inf)")
        if not self.q > 0:
            raise ParameterOutOfRange("q", self.q, "(0, inf)")

    @classmethod
    def parse(cls, text: str) -> "ModulationScheme":
        """A preset name (case-insensitive) or a custom ``"p,q"`` pair."""
        key = text.strip().lower()
        if key in PRESETS:
            return PRESETS[key]
        try:
            p, q = (float(v) for v in key.split(","))
        except ValueError:
            raise ParameterOutOfRange("mod", text, f"one of {sorted(PRESETS)} or 'p,q'") from None
        # no comma in the name: it becomes a CSV field / column header
        return cls(f"p={p:g}/q={q:g}", p, q)


CBFSK = ModulationScheme("cbfsk", 0.5, 0.5)
CBPSK = ModulationScheme("cbpsk", 0.5, 1.0)
NBFSK = ModulationScheme("nbfsk", 1.0, 0.5)
DBPSK = ModulationScheme("dbpsk", 1.0, 1.0)

PRESETS = {m.name: m for m in (CBFSK, CBPSK, NBFSK, DBPSK)}


def conditional_ber(mod: ModulationScheme, y):
    """``Gamma(p, q y) / (2 Gamma(p))`` for scalar or array ``y >= 0``."""
    y = np.asarray(y, dtype=float)
    out = 0.5 * upper_incomplete_gamma(mod.p, mod.q * y, regularized=True)
    return float(out) if np.ndim(out) == 0 else out
