# Cusp Form Data Model
"""
Cusp-form description and form-file ingestion.

Form file: UTF-8 JSON object
    kind          "holomorphic" | "maass-even"
    weight        int (even, >= 4 for holomorphic, 0 for Maass)
    level         int (1)
    r             float (Maass only)
    fricke        {"C1": float, "C2_re": float, "C2_im": float}
    coefficients  [f̂(1), f̂(2), ...] as exact integers or floats
    deriv_bound_R optional float
Unknown fields are rejected.
"""

import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from lfun.config import config
from lfun.errors import FormLoadError
from lfun.specfun import SpectralParam


logger = logging.getLogger(__name__)

HOLOMORPHIC = "holomorphic"
MAASS_EVEN = "maass-even"

_REQUIRED_FIELDS = {"kind", "weight", "level", "fricke", "coefficients"}
_OPTIONAL_FIELDS = {"r", "deriv_bound_R"}
_FRICKE_FIELDS = {"C1", "C2_re", "C2_im"}


def terms_needed(height: float, accuracy: Optional[float] = None) -> int:
    """N_terms(y, acc) = ⌈(log(1/acc) + 10) / (2π y)⌉."""
    accuracy = accuracy or config.TARGET_ACCURACY
    return max(1, math.ceil((math.log(1 / accuracy) + 10) / (2 * math.pi * height)))


@dataclass(frozen=True)
class CoefficientTable:
    """
    Dense 1-indexed table n -> f̂(n), n = 1..n_max.

    Exact tables hold Python ints so values beyond 2^53 survive.
    """
    values: Tuple[Union[int, float, complex], ...]
    exact: bool = False
    _array: Optional[np.ndarray] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.values:
            raise FormLoadError("coefficient table is empty")
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "_array", np.array([complex(v) for v in self.values]))

    @classmethod
    def from_sequence(cls, values: Sequence[Any]) -> "CoefficientTable":
        exact = all(isinstance(v, int) and not isinstance(v, bool) for v in values)
        return cls(tuple(values), exact=exact)

    @property
    def n_max(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int):
        if n < 1 or n > self.n_max:
            raise IndexError(f"coefficient index {n} outside 1..{self.n_max}")
        return self.values[n - 1]

    def as_array(self) -> np.ndarray:
        """Complex array of f̂(1..n_max); index 0 holds f̂(1)."""
        return self._array

    def first_nonzero(self) -> int:
        nonzero = np.flatnonzero(self._array)
        return int(nonzero[0]) + 1 if nonzero.size else 1

    def scaled(self, factor: complex) -> "CoefficientTable":
        return CoefficientTable(tuple(complex(v) * factor for v in self.values), exact=False)


@dataclass(frozen=True)
class CuspFormSpec:
    """
    Complete description of a level-1 cusp form.

    Fricke data: f(-C1/z) = C2·z^k·f(z).
    """
    kind: str
    weight: int
    coefficients: CoefficientTable
    level: int = 1
    r: Optional[SpectralParam] = None
    fricke_c1: float = 1.0
    fricke_c2: complex = 1 + 0j
    deriv_bound: Optional[float] = None

    def __post_init__(self):
        if self.kind == HOLOMORPHIC:
            if self.weight < 4 or self.weight % 2:
                raise FormLoadError(
                    f"holomorphic forms need even weight >= 4, got {self.weight}"
                )
            if self.r is not None:
                raise FormLoadError("holomorphic forms carry no spectral parameter")
        elif self.kind == MAASS_EVEN:
            if self.weight != 0:
                raise FormLoadError(f"Maass forms have weight 0, got {self.weight}")
            if self.r is None:
                raise FormLoadError("Maass form is missing its spectral parameter r")
        else:
            raise FormLoadError(f"unknown form kind {self.kind!r}")
        if self.level != 1:
            raise FormLoadError(f"only level 1 is supported, got level {self.level}")
        if not self.fricke_c1 > 0:
            raise FormLoadError(f"Fricke C1 must be positive, got {self.fricke_c1}")
        if self.fricke_c2 == 0:
            raise FormLoadError("Fricke C2 must be nonzero")
        if self.deriv_bound is not None and not self.deriv_bound > 0:
            raise FormLoadError(f"deriv_bound_R must be positive, got {self.deriv_bound}")

    @property
    def is_holomorphic(self) -> bool:
        return self.kind == HOLOMORPHIC

    @property
    def n_max(self) -> int:
        return self.coefficients.n_max

    @property
    def has_real_coefficients(self) -> bool:
        return bool(np.all(self.coefficients.as_array().imag == 0))

    def with_deriv_bound(self, value: float) -> "CuspFormSpec":
        return replace(self, deriv_bound=float(value))


# ============================================================================
# Form files
# ============================================================================

def _number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormLoadError(f"field {name!r} must be a number, got {value!r}")
    return float(value)


def _integer(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormLoadError(f"field {name!r} must be an integer, got {value!r}")
    return value


def form_from_dict(data: Dict[str, Any]) -> CuspFormSpec:
    """Validate a decoded form file and build the CuspFormSpec."""
    if not isinstance(data, dict):
        raise FormLoadError("form file must contain a JSON object")
    unknown = set(data) - _REQUIRED_FIELDS - _OPTIONAL_FIELDS
    if unknown:
        raise FormLoadError(f"unknown fields in form file: {sorted(unknown)}")
    missing = _REQUIRED_FIELDS - set(data)
    if missing:
        raise FormLoadError(f"missing fields in form file: {sorted(missing)}")

    fricke = data["fricke"]
    if not isinstance(fricke, dict) or set(fricke) != _FRICKE_FIELDS:
        raise FormLoadError(f"fricke must be an object with fields {sorted(_FRICKE_FIELDS)}")
    coefficients = data["coefficients"]
    if not isinstance(coefficients, list) or not coefficients:
        raise FormLoadError("coefficients must be a non-empty array")
    for index, value in enumerate(coefficients, start=1):
        _number(value, f"coefficients[{index}]")

    kind = data["kind"]
    r = None
    if "r" in data:
        if kind != MAASS_EVEN:
            raise FormLoadError("field 'r' is only allowed for maass-even forms")
        r = SpectralParam(_number(data["r"], "r"))
    deriv_bound = data.get("deriv_bound_R")
    return CuspFormSpec(
        kind=kind,
        weight=_integer(data["weight"], "weight"),
        level=_integer(data["level"], "level"),
        r=r,
        coefficients=CoefficientTable.from_sequence(coefficients),
        fricke_c1=_number(fricke["C1"], "fricke.C1"),
        fricke_c2=complex(_number(fricke["C2_re"], "fricke.C2_re"),
                          _number(fricke["C2_im"], "fricke.C2_im")),
        deriv_bound=None if deriv_bound is None else _number(deriv_bound, "deriv_bound_R"),
    )


def load_form(path: Union[str, Path], estimate_bound: bool = True) -> CuspFormSpec:
    """
    Load and validate a form file.

    Args:
        path: Path of the JSON form file
        estimate_bound: Estimate R by jet sampling when the file has none

    Returns:
        Validated CuspFormSpec

    Raises:
        FormLoadError: On unreadable files, schema or invariant violations
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as e:
        raise FormLoadError(f"cannot read form file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise FormLoadError(f"form file {path} is not valid JSON: {e}") from e

    form = form_from_dict(data)
    required = terms_needed(config.MIN_HEIGHT)
    if form.n_max < required:
        logger.warning(
            "form %s has %d coefficients; %d are needed for full accuracy at height %.4f",
            path, form.n_max, required, config.MIN_HEIGHT,
        )
    if form.deriv_bound is None and estimate_bound:
        from lfun.forms.lift import estimate_R

        form = form.with_deriv_bound(estimate_R(form))
        logger.info("estimated derivative bound R = %.4g for %s", form.deriv_bound, path)
    return form


def form_to_dict(form: CuspFormSpec) -> Dict[str, Any]:
    values = form.coefficients.values
    if form.coefficients.exact:
        coefficients = [int(v) for v in values]
    else:
        if any(complex(v).imag for v in values):
            raise FormLoadError("form files hold real coefficients only")
        coefficients = [complex(v).real for v in values]
    data: Dict[str, Any] = {
        "kind": form.kind,
        "weight": form.weight,
        "level": form.level,
        "fricke": {
            "C1": form.fricke_c1,
            "C2_re": form.fricke_c2.real,
            "C2_im": form.fricke_c2.imag,
        },
        "coefficients": coefficients,
    }
    if form.r is not None:
        data["r"] = form.r.r.real
    if form.deriv_bound is not None:
        data["deriv_bound_R"] = form.deriv_bound
    return data


def write_form_file(form: CuspFormSpec, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(form_to_dict(form), handle)
        handle.write("\n")


def dirichlet_partial_sum(form: CuspFormSpec, s: complex) -> complex:
    """
    Σ_{n <= n_max} f̂(n)·n^{-s-(k-1)/2} (holomorphic) or f̂(n)·n^{1/2-s} (Maass).

    Exact for forms with finitely many nonzero coefficients.
    """
    n = np.arange(1, form.n_max + 1)
    shift = s + (form.weight - 1) / 2 if form.is_holomorphic else s - 0.5
    return complex(np.sum(form.coefficients.as_array() * np.exp(-shift * np.log(n))))
