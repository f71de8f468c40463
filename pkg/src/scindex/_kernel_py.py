"""Pure-Python exponent-dict kernels.

These three loops are where essentially all arithmetic time goes: sparse
Laurent polynomials are dicts mapping exponent tuples to exact
coefficients (int, Fraction, or any object supporting +, * and truth
testing).  ``_kernel_c.pyx`` is the compiled twin and must stay
behaviourally identical; the test suite runs both against each other.
"""

from fractions import Fraction


def poly_mul_into(acc, pa, pb):
    """acc += pa * pb (exponent-wise convolution); acc is mutated."""
    get = acc.get
    for ea, ca in pa.items():
        for eb, cb in pb.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = get(e)
            acc[e] = ca * cb if v is None else v + ca * cb


def poly_axpy(acc, p, c):
    """acc += c * p; acc is mutated."""
    get = acc.get
    for e, a in p.items():
        v = get(e)
        acc[e] = c * a if v is None else v + c * a


def poly_canonize(p):
    """Drop zero coefficients; demote integral Fractions to int. Mutates p."""
    dead = []
    for e, c in p.items():
        if not c:
            dead.append(e)
        elif type(c) is Fraction and c.denominator == 1:
            p[e] = c.numerator
    for e in dead:
        del p[e]
    return p
