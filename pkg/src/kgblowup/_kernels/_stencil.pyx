# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stencil kernel; mirrors _reference.radial_accel."""

from libc.math cimport pow


def radial_accel(double[::1] u_re, double[::1] u_im,
                 double[::1] acc_re, double[::1] acc_im,
                 double[::1] cp, double[::1] cm,
                 double a_lap, double a_mass, double a_nl,
                 double p, int n, bint axis):
    cdef Py_ssize_t j, last = u_re.shape[0] - 1
    cdef double mag
    for j in range(1, last):
        acc_re[j] = (a_lap * (cp[j] * u_re[j + 1] - 2.0 * u_re[j] + cm[j] * u_re[j - 1])
                     - a_mass * u_re[j])
        acc_im[j] = (a_lap * (cp[j] * u_im[j + 1] - 2.0 * u_im[j] + cm[j] * u_im[j - 1])
                     - a_mass * u_im[j])
    if axis:
        acc_re[0] = a_lap * 2.0 * n * (u_re[1] - u_re[0]) - a_mass * u_re[0]
        acc_im[0] = a_lap * 2.0 * n * (u_im[1] - u_im[0]) - a_mass * u_im[0]
    else:
        acc_re[0] = 0.0
        acc_im[0] = 0.0
    acc_re[last] = 0.0
    acc_im[last] = 0.0
    if a_nl != 0.0:
        # |u|^p as (|u|^2)^(p/2); field magnitudes stay far below the
        # overflow scale of the squared form
        for j in range(0 if axis else 1, last):
            mag = u_re[j] * u_re[j] + u_im[j] * u_im[j]
            if mag > 0.0:
                acc_re[j] += a_nl * pow(mag, 0.5 * p)
