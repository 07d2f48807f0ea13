"""Pure-numpy advection kernels (fallback for the compiled ``_advect``).

Both kernels march every line of a 2D array one step along ``axis`` with a
positive Courant number ``courant``. Lines ``[start, stop)`` of ``out`` are
written; cell 0 of each line receives ``inflow``. Arithmetic is ordered
exactly as in the Cython kernels so both backends agree bit for bit.
"""

UPWIND = 0
LAX_WENDROFF = 1


def advect_lines(u, courant, scheme, axis, inflow, out, start=0, stop=None):
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")
    if scheme == LAX_WENDROFF and u.shape[axis] < 3:
        raise ValueError("Lax-Wendroff needs at least 3 cells per line")
    if axis == 0:
        u = u.T
        out = out.T
    n_lines = u.shape[0]
    stop = n_lines if stop is None else stop
    src = u[start:stop]
    dst = out[start:stop]
    c = float(courant)
    dst[:, 0] = inflow[start:stop]
    if scheme == UPWIND:
        keep = 1.0 - c
        dst[:, 1:] = keep * src[:, 1:] + c * src[:, :-1]
    elif scheme == LAX_WENDROFF:
        wl = 0.5 * c * (1.0 + c)
        wc = 1.0 - c * c
        wr = 0.5 * c * (c - 1.0)
        dst[:, 1:-1] = (wl * src[:, :-2] + wc * src[:, 1:-1]) + wr * src[:, 2:]
        dst[:, -1] = 2.0 * dst[:, -2] - dst[:, -3]
    else:
        raise ValueError(f"unknown scheme id {scheme}")
