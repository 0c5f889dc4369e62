from .scalars import GaussRational, Scale, GR_ZERO, GR_ONE, GR_I
from .series import HbarSeries, default_truncation
from .poly import Context, Poly
from .grassmann import Grassmann
from .states import ExpState, DuplicateDeltaError
from .serialize import canonical_json, to_jsonable

__all__ = [
    "GaussRational", "Scale", "GR_ZERO", "GR_ONE", "GR_I",
    "HbarSeries", "default_truncation",
    "Context", "Poly", "Grassmann", "ExpState", "DuplicateDeltaError",
    "canonical_json", "to_jsonable",
]
