"""The four PD kernels, keyed by the parameter they use."""

from .vc_size import VCSizeKernel
from .is_fvs import FVSKernel
from .is_treedepth import AnnotatedTDKernel, TDPipeline, pipeline_is_td
from .is_bridgedepth import BDKernel

__all__ = ["VCSizeKernel", "FVSKernel", "AnnotatedTDKernel", "TDPipeline", "pipeline_is_td",
           "BDKernel", "make_kernel", "PARAMS"]

PARAMS = ("k", "fvs", "td", "bd")


def make_kernel(param: str, c: int | None = None):
    if param == "k":
        return VCSizeKernel()
    if param == "fvs":
        return FVSKernel()
    if param == "td":
        return pipeline_is_td(c)
    if param == "bd":
        return BDKernel(c)
    raise ValueError(f"unknown parameter {param!r}; expected one of {', '.join(PARAMS)}")
