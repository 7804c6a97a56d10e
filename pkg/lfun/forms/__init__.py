# Cusp forms
from lfun.forms.delta import delta_form, gen_delta
from lfun.forms.spec import (
    HOLOMORPHIC,
    MAASS_EVEN,
    CoefficientTable,
    CuspFormSpec,
    load_form,
    write_form_file,
)

__all__ = [
    "HOLOMORPHIC",
    "MAASS_EVEN",
    "CoefficientTable",
    "CuspFormSpec",
    "delta_form",
    "gen_delta",
    "load_form",
    "write_form_file",
]
