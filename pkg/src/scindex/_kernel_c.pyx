# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exponent-dict kernels; behavioural twin of ``_kernel_py``.

Coefficients stay boxed Python objects (int / Fraction / t-polynomial),
so exactness is untouched; the win is removing interpreter dispatch from
the convolution loops.
"""

from fractions import Fraction

from cpython.tuple cimport PyTuple_GET_SIZE


def poly_mul_into(dict acc, dict pa, dict pb):
    """acc += pa * pb (exponent-wise convolution); acc is mutated."""
    cdef tuple ea, eb, e
    cdef Py_ssize_t i, n
    cdef object ca, cb, v
    for ea, ca in pa.items():
        n = PyTuple_GET_SIZE(ea)
        for eb, cb in pb.items():
            e = tuple([ea[i] + eb[i] for i in range(n)])
            v = acc.get(e)
            if v is None:
                acc[e] = ca * cb
            else:
                acc[e] = v + ca * cb


def poly_axpy(dict acc, dict p, object c):
    """acc += c * p; acc is mutated."""
    cdef tuple e
    cdef object a, v
    for e, a in p.items():
        v = acc.get(e)
        if v is None:
            acc[e] = c * a
        else:
            acc[e] = v + c * a


def poly_canonize(dict p):
    """Drop zero coefficients; demote integral Fractions to int. Mutates p."""
    cdef list dead = []
    cdef tuple e
    cdef object c
    for e, c in p.items():
        if not c:
            dead.append(e)
        elif type(c) is Fraction and (<object>c).denominator == 1:
            p[e] = (<object>c).numerator
    for e in dead:
        del p[e]
    return p
