"""Arithmetic kernels: Gaussian-rational triples and exact dense elimination.

Two interchangeable implementations exist: ``cykernel`` (Cython-compiled) and
``pykernel`` (pure Python).  Both operate on the same data layout, a scalar
being the tuple ``(a, b, d)`` of Python ints representing ``(a + b*i)/d`` with
``d > 0`` and ``gcd(a, b, d) == 1``.  The compiled kernel is picked by default
when available; set ``PARAMOD_BACKEND=py`` to force the fallback (``c`` forces
the extension and fails loudly if it was not built).
"""

import os

_requested = os.environ.get("PARAMOD_BACKEND", "auto").lower()

if _requested not in ("auto", "py", "c"):
    raise RuntimeError(f"PARAMOD_BACKEND must be auto, py or c, got {_requested!r}")

if _requested == "py":
    from . import pykernel as kernel

    BACKEND = "py"
elif _requested == "c":
    from . import cykernel as kernel  # type: ignore[no-redef]

    BACKEND = "c"
else:
    try:
        from . import cykernel as kernel  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        from . import pykernel as kernel  # type: ignore[no-redef]

        BACKEND = "py"

t_norm = kernel.t_norm
t_add = kernel.t_add
t_sub = kernel.t_sub
t_mul = kernel.t_mul
t_div = kernel.t_div
t_neg = kernel.t_neg
t_inv = kernel.t_inv
mat_det = kernel.mat_det
mat_rank = kernel.mat_rank
mat_rref = kernel.mat_rref
mat_nullspace = kernel.mat_nullspace
mat_solve_affine = kernel.mat_solve_affine

T_ZERO = (0, 0, 1)
T_ONE = (1, 0, 1)
