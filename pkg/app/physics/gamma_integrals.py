"""Complex Gamma function and the oscillatory integrals behind |Gamma(ix)|^2."""

import cmath
import logging
import math
import warnings
from scipy import integrate
from app.errors import DomainError, NonConvergence, PoleError, QuadratureFailure
from app.models.gamma import ComplexParameter, ContourLegs

logger = logging.getLogger(__name__)

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _check_pole(z: complex) -> None:
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real:g}", module=__name__)


def _log_gamma_right(z: complex) -> complex:
    """Lanczos log Gamma, valid for re(z) >= 0.5."""
    z = z - 1.0
    series = _LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def log_gamma(z: complex) -> complex:
    """A logarithm of Gamma(z); off the right half-plane it may differ from the principal branch by 2 pi i k."""
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        return (
            math.log(math.pi)
            - cmath.log(cmath.sin(math.pi * z))
            - _log_gamma_right(1.0 - z)
        )
    return _log_gamma_right(z)


def complex_gamma(z: complex) -> complex:
    """Gamma(z) for complex z, with reflection for re(z) < 0.5."""
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * cmath.exp(_log_gamma_right(1.0 - z)))
    return cmath.exp(_log_gamma_right(z))


def gamma_recurrence_residual(z: complex) -> float:
    """|Gamma(z + 1) - z Gamma(z)| / |Gamma(z + 1)|."""
    upper = complex_gamma(z + 1.0)
    return abs(upper - z * complex_gamma(z)) / abs(upper)


def gamma_imag_identity_residual(x: float) -> float:
    """(|Gamma(ix)|^2 - pi / (x sinh(pi x))) relative to the closed form."""
    if x == 0:
        raise DomainError("x must be non-zero", module=__name__)
    closed_form = math.pi / (x * math.sinh(math.pi * x))
    return (abs(complex_gamma(1j * x)) ** 2 - closed_form) / closed_form


def _as_parameter(p) -> ComplexParameter:
    if isinstance(p, ComplexParameter):
        return p
    try:
        return ComplexParameter(p=complex(p))
    except ValueError as e:
        raise DomainError(str(e), module=__name__) from e


def _quad(func, a, b, max_abserr=1e-10, **kwargs) -> float:
    """scipy quad; an IntegrationWarning becomes QuadratureFailure when abserr exceeds max_abserr."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, abserr = integrate.quad(func, a, b, **kwargs)
    if caught:
        message = str(caught[-1].message).splitlines()[0]
        if abserr > max_abserr * max(1.0, abs(value)):
            raise QuadratureFailure(
                f"quad on [{a:g}, {b:g}]: {message} (abserr={abserr:.2e})",
                module=__name__,
            )
        logger.debug(f"quad on [{a:g}, {b:g}] warned but abserr={abserr:.2e}")
    return value


def _complex_quad(func, a, b, max_abserr=1e-10, **kwargs) -> complex:
    real = _quad(lambda t: func(t).real, a, b, max_abserr=max_abserr, **kwargs)
    imag = _quad(lambda t: func(t).imag, a, b, max_abserr=max_abserr, **kwargs)
    return complex(real, imag)


def _fourier_quad(g, a: float, b: float, max_abserr=1e-10, **kwargs) -> complex:
    """integral of g(t) e^(-it) over [a, b] using cos/sin weighted quadrature."""
    weighted = {}
    for weight in ("cos", "sin"):
        weighted[weight] = _complex_quad(
            g, a, b, max_abserr=max_abserr, weight=weight, wvar=1.0, **kwargs
        )
    return weighted["cos"] - 1j * weighted["sin"]


def damped_oscillatory_integral(p, damping_eps: float, split: float = 1.0) -> complex:
    """integral over (0, inf) of t^(p-1) e^(-(eps + i) t).

    The head [0, split] uses the termwise-integrated exponential series, so
    re(p) close to 0 is fine; the tail runs to 50/eps with oscillatory
    weighted quadrature, beyond which the integrand is below e^-50.
    """
    p = _as_parameter(p).p
    if not damping_eps > 0:
        raise DomainError("damping_eps must be positive", module=__name__)
    z = damping_eps + 1j
    head = 0.0j
    coefficient = 1.0 + 0.0j
    for k in range(200):
        term = coefficient / (p + k)
        head += term
        if abs(term) < 1e-18 * abs(head) and k > 4:
            break
        coefficient *= -z * split / (k + 1)
    head *= split**p

    upper = 50.0 / damping_eps

    def envelope(t):
        return t ** (p - 1.0) * math.exp(-damping_eps * t)

    tail = _fourier_quad(
        envelope, split, upper, max_abserr=1e-9, limit=2000, epsabs=1e-12, epsrel=1e-11
    )
    return head + tail


def oscillatory_closed_form(p) -> complex:
    """(-i)^p Gamma(p) on the principal branch: e^(-i pi p / 2) Gamma(p)."""
    p = _as_parameter(p).p
    return cmath.exp(-0.5j * math.pi * p) * complex_gamma(p)


def regularized_oscillatory_integral(
    p,
    damping_eps: float = 0.5,
    richardson_levels: int = 6,
    tolerance: float = 1e-5,
) -> complex:
    """integral of t^(p-1) e^(-it) as the eps -> 0 limit of the damped integral.

    The damped integral is analytic in eps, so values at eps_0 / 2^j are
    combined in a Richardson table. The last two diagonal entries must agree
    to `tolerance` (relative) or NonConvergence is raised.
    """
    p = _as_parameter(p).p
    if richardson_levels < 1:
        raise DomainError("richardson_levels must be >= 1", module=__name__)
    table = []
    for j in range(richardson_levels + 1):
        eps = damping_eps / 2**j
        row = [damped_oscillatory_integral(p, eps)]
        for k in range(1, j + 1):
            row.append(row[k - 1] + (row[k - 1] - table[j - 1][k - 1]) / (2**k - 1))
        table.append(row)
        logger.debug(f"Richardson level {j}: eps={eps:.3e}, estimate={row[-1]}")

    estimate = table[-1][-1]
    previous = table[-2][-2]
    change = abs(estimate - previous) / abs(estimate)
    if change > tolerance:
        raise NonConvergence(
            f"Richardson change {change:.2e} above {tolerance:.1e} for p={p}",
            module=__name__,
        )
    return estimate


def _contour_bounds(p: complex, a: float, epsilon: float) -> tuple[float, float, float]:
    x, y = p.real, abs(p.imag)
    # largest |z|^(x-1) on the far legs, where a <= |z| <= sqrt(2) a
    modulus = max(a ** (x - 1.0), (math.sqrt(2.0) * a) ** (x - 1.0))
    bound_i3 = a * modulus * math.exp(math.pi * y / 4.0) * math.exp(-a)
    bound_i4 = modulus * math.exp(math.pi * y / 2.0) * -math.expm1(-a)
    bound_i5 = (
        0.5
        * math.pi
        * math.exp(-math.pi * p.imag / 2.0)
        * epsilon**x
        * math.exp(math.pi * y / 2.0)
    )
    return bound_i3, bound_i4, bound_i5


def contour_decomposition(p, a: float, epsilon: float) -> ContourLegs:
    """Integrate z^(p-1) e^(-z) around the first-quadrant square of side a.

    The region's boundary is: real axis (I1), right side (I3), top side
    traversed backwards (-I4), imaginary axis downwards (-I2) and the small
    quarter arc (I5), so I1 - I2 + I3 - I4 + I5 vanishes.
    """
    parameter = _as_parameter(p)
    p = parameter.p
    if not 0.0 < p.real < 1.0:
        raise DomainError("contour legs need 0 < re(p) < 1", module=__name__)
    if not 0.0 < epsilon < 1.0 < a:
        raise DomainError("need 0 < epsilon < 1 < a", module=__name__)

    def f(z: complex) -> complex:
        return cmath.exp((p - 1.0) * cmath.log(z) - z)

    options = dict(limit=500, epsabs=1e-13, epsrel=1e-11)
    log_eps, log_a = math.log(epsilon), math.log(a)

    # t = e^u on the real axis
    i1 = _complex_quad(
        lambda u: cmath.exp(p * u - math.exp(u)), log_eps, log_a, **options
    )

    head = _complex_quad(
        lambda u: cmath.exp(p * u - 1j * math.exp(u)), log_eps, 0.0, **options
    )
    tail = _fourier_quad(lambda t: t ** (p - 1.0), 1.0, a, **options)
    i2 = cmath.exp(0.5j * math.pi * p) * (head + tail)

    i3 = _complex_quad(lambda s: 1j * f(a + 1j * s), 0.0, a, **options)
    i4 = _complex_quad(lambda s: f(s + 1j * a), 0.0, a, **options)
    i5 = _complex_quad(
        lambda phi: f(1j * epsilon * cmath.exp(-1j * phi))
        * epsilon
        * cmath.exp(-1j * phi),
        0.0,
        0.5 * math.pi,
        **options,
    )

    bound_i3, bound_i4, bound_i5 = _contour_bounds(p, a, epsilon)
    legs = ContourLegs(
        p=p,
        a=a,
        epsilon=epsilon,
        I1=i1,
        I2=i2,
        I3=i3,
        I4=i4,
        I5=i5,
        bound_I3=bound_i3,
        bound_I4=bound_i4,
        bound_I5=bound_i5,
    )
    logger.debug(f"Contour p={p}, a={a}, eps={epsilon}: residual {legs.cauchy_residual:.2e}")
    return legs
