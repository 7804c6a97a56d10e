# Pipelines
from lfun.engine.direct import fourier_direct, lvalue_direct
from lfun.engine.fast import fourier_fast, lvalue_fast
from lfun.engine.params import PipelineParams, PipelineResult

PIPELINES = {
    ("fourier", "fast"): fourier_fast,
    ("fourier", "direct"): fourier_direct,
    ("lvalue", "fast"): lvalue_fast,
    ("lvalue", "direct"): lvalue_direct,
}

__all__ = [
    "PIPELINES",
    "PipelineParams",
    "PipelineResult",
    "fourier_direct",
    "fourier_fast",
    "lvalue_direct",
    "lvalue_fast",
]
