from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Tuple

import pandas as pd

REPORT_COLUMNS: Tuple[str, ...] = (
    'a', 'b', 'N', 'boundary', 'gap', 'ground_real', 'K_abs', 'UU', 'string_order',
    'EE', 'ES_degeneracy', 'GSD', 'xi1', 'xi2', 'wall_ms',
)
NAN = float('nan')


@dataclass
class PointReport:
    """
    Observables of one (a, b) point. Values that were not requested or are
    not defined for the chain are NaN; `error` holds the failure of a point
    that could not be computed.

    Attributes:
        a (float): Dissipation strength.
        b (float): Interpolation towards the decorated models.
        N (int): Number of sites.
        boundary (str): 'periodic' or 'open'.
        gap (float): Imaginary-Liouville gap Re E₁ - Re E₀.
        ground_real (bool): Whether E₀ is real.
        K_abs (float): |Tr ρK| for K = Πτˣ.
        UU (float): Tr[ρUρU†]/Tr[ρ²] for U = Πσˣ.
        string_order (float): String order over the longest span.
        EE (float): Entanglement entropy of the steady supervector.
        ES_degeneracy (float): Leading entanglement level degeneracy per boundary.
        GSD (float): Ground-level degeneracy (open chains).
        xi1 (float): Linear correlation length; inf when flat, NaN without signal.
        xi2 (float): Rényi-2 correlation length.
        wall_ms (float): Wall time of the point.
        xi1_quality (float): Coefficient of determination of the ξ₁ fit.
        xi2_quality (float): Coefficient of determination of the ξ₂ fit.
        xi1_flag (str): 'fit', 'infinite', 'no_signal' or 'unavailable'.
        xi2_flag (str): Same for ξ₂.
        error (str): Failure message, empty on success.
    """
    a: float
    b: float
    N: int
    boundary: str
    gap: float = NAN
    ground_real: bool = False
    K_abs: float = NAN
    UU: float = NAN
    string_order: float = NAN
    EE: float = NAN
    ES_degeneracy: float = NAN
    GSD: float = NAN
    xi1: float = NAN
    xi2: float = NAN
    wall_ms: float = 0.0
    xi1_quality: float = NAN
    xi2_quality: float = NAN
    xi1_flag: str = 'unavailable'
    xi2_flag: str = 'unavailable'
    error: str = ''

    @property
    def failed(self) -> bool:
        return bool(self.error)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PointReport':
        known = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in data.items() if key in known})


class PointTable(pd.DataFrame):
    """
    Point reports as a table with the fixed report columns.
    """
    def __init__(self, reports: List[PointReport]):
        super().__init__(
            data=[[getattr(report, column) for column in REPORT_COLUMNS] for report in reports],
            columns=list(REPORT_COLUMNS),
        )
