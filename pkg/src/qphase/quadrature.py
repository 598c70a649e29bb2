"""Adaptive quadrature and bracketing root finding."""
import warnings

import numpy as np
from scipy import integrate, optimize

from .errors import BracketError, QuadratureError


def _quad_real(fn, a, b, tol, limit, points, rtol=0.0):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, a, b, epsabs=tol, epsrel=rtol, limit=limit,
                                      points=points)
        except integrate.IntegrationWarning as w:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                val, err = integrate.quad(fn, a, b, epsabs=tol, epsrel=rtol, limit=limit,
                                          points=points)
            raise QuadratureError(f"quadrature did not converge: {w}", val, err) from None
    return val, err


def quad(fn, a, b, tol=1e-10, limit=400, points=None, full_output=False, rtol=0.0):
    """Adaptive Gauss-Kronrod quadrature of a real or complex integrand.

    Parameters
    ----------
    fn : callable
        Scalar function of one real variable; may return complex.
    a, b : float
        Finite limits.
    tol : float
        Absolute error target (split evenly between real and imaginary parts).
    rtol : float
        Relative error target; the looser of the two governs.
    points : sequence, optional
        Interior break points where ``fn`` is not smooth.
    full_output : bool
        Also return the error estimate.

    Raises
    ------
    QuadratureError
        Carrying the best estimate when the routine reports non-convergence.
    """
    if a == b:
        return (0.0, 0.0) if full_output else 0.0
    if points is not None:
        lo, hi = min(a, b), max(a, b)
        points = [p for p in points if lo < p < hi] or None
    probe = fn(0.5 * (a + b))
    if np.iscomplexobj(probe):
        t = 0.5 * tol
        try:
            re, er = _quad_real(lambda x: np.real(fn(x)), a, b, t, limit, points, rtol)
        except QuadratureError as e:
            raise QuadratureError(str(e), e.best_estimate, e.abserr) from None
        try:
            im, ei = _quad_real(lambda x: np.imag(fn(x)), a, b, t, limit, points, rtol)
        except QuadratureError as e:
            raise QuadratureError(str(e), complex(re, e.best_estimate), e.abserr) from None
        val, err = complex(re, im), float(np.hypot(er, ei))
    else:
        val, err = _quad_real(fn, a, b, tol, limit, points, rtol)
    return (val, err) if full_output else val


def find_root(fn, bracket, tol=1e-14, maxiter=200):
    """Brent's method on a sign-changing bracket.

    Returns a root ``x`` with ``|fn(x)|`` at round-off level relative to the
    function scale on the bracket.
    """
    a, b = float(bracket[0]), float(bracket[1])
    fa, fb = fn(a), fn(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise BracketError(f"no sign change on [{a}, {b}]: f={fa:.3e}, {fb:.3e}")
    return float(optimize.brentq(fn, a, b, xtol=tol * max(1.0, abs(a), abs(b)), rtol=4 * np.finfo(float).eps,
                                 maxiter=maxiter))
