# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled advection kernels; see ``_advect_py`` for the contract."""

cdef int UPWIND = 0
cdef int LAX_WENDROFF = 1


cdef void _line_upwind(const double* u, double* out, Py_ssize_t n, Py_ssize_t s,
                       double c, double inflow) noexcept nogil:
    cdef Py_ssize_t k
    cdef double keep = 1.0 - c
    out[0] = inflow
    for k in range(1, n):
        out[k * s] = keep * u[k * s] + c * u[(k - 1) * s]


cdef void _line_lw(const double* u, double* out, Py_ssize_t n, Py_ssize_t s,
                   double c, double inflow) noexcept nogil:
    cdef Py_ssize_t k
    cdef double wl = 0.5 * c * (1.0 + c)
    cdef double wc = 1.0 - c * c
    cdef double wr = 0.5 * c * (c - 1.0)
    out[0] = inflow
    for k in range(1, n - 1):
        out[k * s] = (wl * u[(k - 1) * s] + wc * u[k * s]) + wr * u[(k + 1) * s]
    out[(n - 1) * s] = 2.0 * out[(n - 2) * s] - out[(n - 3) * s]


# Along y the lines are columns; sweeping row by row keeps memory access
# contiguous. Every cell gets the same arithmetic as in the line kernels.
cdef void _rows_upwind(const double* u, double* out, Py_ssize_t n, Py_ssize_t nx,
                       Py_ssize_t j0, Py_ssize_t j1, double c,
                       const double* inflow) noexcept nogil:
    cdef Py_ssize_t k, j
    cdef double keep = 1.0 - c
    for j in range(j0, j1):
        out[j] = inflow[j]
    for k in range(1, n):
        for j in range(j0, j1):
            out[k * nx + j] = keep * u[k * nx + j] + c * u[(k - 1) * nx + j]


cdef void _rows_lw(const double* u, double* out, Py_ssize_t n, Py_ssize_t nx,
                   Py_ssize_t j0, Py_ssize_t j1, double c,
                   const double* inflow) noexcept nogil:
    cdef Py_ssize_t k, j
    cdef double wl = 0.5 * c * (1.0 + c)
    cdef double wc = 1.0 - c * c
    cdef double wr = 0.5 * c * (c - 1.0)
    for j in range(j0, j1):
        out[j] = inflow[j]
    for k in range(1, n - 1):
        for j in range(j0, j1):
            out[k * nx + j] = ((wl * u[(k - 1) * nx + j] + wc * u[k * nx + j])
                               + wr * u[(k + 1) * nx + j])
    for j in range(j0, j1):
        out[(n - 1) * nx + j] = 2.0 * out[(n - 2) * nx + j] - out[(n - 3) * nx + j]


def advect_lines(const double[:, ::1] u, double courant, int scheme, int axis,
                 const double[::1] inflow, double[:, ::1] out,
                 Py_ssize_t start=0, stop=None):
    cdef Py_ssize_t ny = u.shape[0], nx = u.shape[1]
    cdef Py_ssize_t n, stride, line_step, j, stop_
    if axis == 1:
        n, stride, line_step = nx, 1, nx
        stop_ = ny if stop is None else stop
    elif axis == 0:
        n, stride, line_step = ny, nx, 1
        stop_ = nx if stop is None else stop
    else:
        raise ValueError("axis must be 0 or 1")
    if scheme == LAX_WENDROFF and n < 3:
        raise ValueError("Lax-Wendroff needs at least 3 cells per line")
    if scheme != UPWIND and scheme != LAX_WENDROFF:
        raise ValueError(f"unknown scheme id {scheme}")
    cdef const double* up = &u[0, 0]
    cdef double* op = &out[0, 0]
    with nogil:
        if axis == 1:
            for j in range(start, stop_):
                if scheme == UPWIND:
                    _line_upwind(up + j * line_step, op + j * line_step, n, stride,
                                 courant, inflow[j])
                else:
                    _line_lw(up + j * line_step, op + j * line_step, n, stride,
                             courant, inflow[j])
        elif scheme == UPWIND:
            _rows_upwind(up, op, n, nx, start, stop_, courant, &inflow[0])
        else:
            _rows_lw(up, op, n, nx, start, stop_, courant, &inflow[0])
