"""Kernel backend selection.

Uses the compiled extension (cgecscore._fastkernels) when it was built,
otherwise the pure-Python kernels. Both backends return exact integer
statistics, so metric values do not depend on which one is active.

Environment override CGECSCORE_KERNELS:
  "python"  force the pure-Python kernels
  "c"       require the compiled extension (ImportError if missing)
"""

from __future__ import annotations

import os
from typing import Sequence

from cgecscore import _pykernels

_FORCE = os.environ.get("CGECSCORE_KERNELS", "").strip().lower()

_fast = None
if _FORCE != "python":
    try:
        from cgecscore import _fastkernels as _fast  # type: ignore[no-redef]
    except ImportError:
        _fast = None
if _FORCE == "c" and _fast is None:
    raise ImportError(
        "CGECSCORE_KERNELS=c requested but the compiled extension is not built"
    )


def active_backend() -> str:
    """Name of the kernel backend in use: "c" or "python"."""
    return "c" if _fast is not None else "python"


def ngram_clip_stats(
    hyp: str, refs: Sequence[str], max_order: int
) -> list[tuple[int, int]]:
    if _fast is not None:
        try:
            return _fast.ngram_clip_stats(hyp, refs, max_order)
        except OverflowError:
            pass  # key packing infeasible for this input; fall through
    return _pykernels.ngram_clip_stats(hyp, refs, max_order)


def char_overlap(a: str, b: str) -> int:
    if _fast is not None:
        return _fast.char_overlap(a, b)
    return _pykernels.char_overlap(a, b)
