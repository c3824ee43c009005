"""Parallel-toppling Abelian sandpiles on hypercubes.

The heavy lifting happens in the compiled ``_sandcube`` extension; this
package only re-exports it.
"""

from ._sandcube import (
    CubeSpec,
    SandcubeError,
    fold,
    load_checkpoint,
    m1_critical,
    main,
    palette,
    radial_closed_form,
    render_ppm,
    save_checkpoint,
    simplex_points,
    simplex_size,
    stabilize,
    stabilize_full,
    stopping_times,
    verify,
)

__all__ = [
    "CubeSpec",
    "SandcubeError",
    "fold",
    "load_checkpoint",
    "m1_critical",
    "main",
    "palette",
    "radial_closed_form",
    "render_ppm",
    "save_checkpoint",
    "simplex_points",
    "simplex_size",
    "stabilize",
    "stabilize_full",
    "stopping_times",
    "verify",
]


def _console() -> int:
    import sys

    return main(sys.argv[1:])
