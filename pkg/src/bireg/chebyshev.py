"""Half-argument Chebyshev machinery for linear spectral statistics.

The working bases on [-2, 2] are

    Phi_0 = 1,  Phi_k(x) = 2 T_k(x/2),
    Gamma_0 = 1,  Gamma_{2k}(x) = Phi_{2k}(x) + (d1-2)/(d1-1)^k,
    Gamma_{2k+1}(x) = Phi_{2k+1}(x),
    p_k(x) = U_k(x/2) - U_{k-2}(x/2)/(d1-1),

where T_k, U_k are the classical Chebyshev polynomials.  Eigenvalue sums of
Gamma_k and p_k over the scaled Gram spectrum equal q^{-k/2} times the
cyclically non-backtracking and non-backtracking walk counts.

Expansions f = sum a_k basis_k are fitted by Chebyshev-Gauss quadrature of
f(2 cos t); the coefficients are basis coefficients on [-2, 2] regardless of
the validity interval half-width K1, which is used for the reconstruction
check (and must contain the spectrum when the expansion is applied to
eigenvalues).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonDecayingCoefficients

DEFAULT_TOL = 1e-12
MAX_QUAD_NODES = 1 << 17


def cheb_eval(kind: str, k: int, x):
    """T_k(x) or U_k(x) by the stable three-term recurrence."""
    if kind not in ("T", "U"):
        raise ValueError("kind must be 'T' or 'U'")
    if k < 0:
        if kind == "U" and k == -1:
            return np.zeros_like(np.asarray(x, dtype=float))
        raise ValueError("k must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = x if kind == "T" else 2 * x
    for _ in range(k - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def p_poly(k: int, d1: int, x):
    """p_k(x) = U_k(x/2) - U_{k-2}(x/2)/(d1-1); p_1(x) = x."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if d1 < 2:
        raise ValueError("d1 must be >= 2")
    y = np.asarray(x, dtype=float) / 2
    out = cheb_eval("U", k, y)
    if k >= 2:
        out = out - cheb_eval("U", k - 2, y) / (d1 - 1)
    return out


def phi_poly(k: int, x):
    """Phi_0 = 1, Phi_k(x) = 2 T_k(x/2)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.ones_like(x)
    return 2 * cheb_eval("T", k, x / 2)


def gamma_poly(k: int, d1: int, x):
    """Gamma_k; equals Phi_k plus (d1-2)/(d1-1)^(k/2) for even k >= 2."""
    if d1 < 2:
        raise ValueError("d1 must be >= 2")
    out = phi_poly(k, x)
    if k >= 2 and k % 2 == 0:
        out = out + (d1 - 2) / (d1 - 1) ** (k // 2)
    return out


def gamma_constant(k: int, d1: int) -> float:
    """Gamma_k(x) - Phi_k(x), a constant in x."""
    if k >= 2 and k % 2 == 0:
        return (d1 - 2) / (d1 - 1) ** (k // 2)
    return 0.0


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChebExpansion:
    """Truncated expansion of a test function in the Phi or Gamma basis.

    coeffs[k] multiplies basis_k; k1 is the half-width of the interval on
    which the reconstruction was validated; decay_rate and coeff_bound are
    the fitted (rho, M) of the envelope |a_k| <= M rho^-k.
    """

    basis: str
    coeffs: tuple
    d1: int | None = None
    k1: float = 2.0
    decay_rate: float = field(default=float("inf"))
    coeff_bound: float = 0.0

    def __post_init__(self):
        if self.basis not in ("phi", "gamma"):
            raise ValueError("basis must be 'phi' or 'gamma'")
        if self.basis == "gamma" and (self.d1 is None or self.d1 < 2):
            raise ValueError("gamma basis requires d1 >= 2")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> float:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, a in enumerate(self.coeffs):
            if a == 0.0:
                continue
            base = gamma_poly(k, self.d1, x) if self.basis == "gamma" else phi_poly(k, x)
            out = out + a * base
        return out

    def __call__(self, x):
        return self.evaluate(x)

    def to_phi(self) -> "ChebExpansion":
        if self.basis == "phi":
            return self
        a = list(self.coeffs)
        a0 = a[0] + sum(a[k] * gamma_constant(k, self.d1) for k in range(2, len(a), 2))
        return ChebExpansion(
            basis="phi", coeffs=[a0] + a[1:], d1=self.d1, k1=self.k1,
            decay_rate=self.decay_rate, coeff_bound=self.coeff_bound,
        )

    def to_gamma(self, d1: int | None = None) -> "ChebExpansion":
        d1 = self.d1 if d1 is None else d1
        if d1 is None or d1 < 2:
            raise ValueError("gamma basis requires d1 >= 2")
        if self.basis == "gamma" and d1 == self.d1:
            return self
        phi = self.to_phi()
        a = list(phi.coeffs)
        a0 = a[0] - sum(a[k] * gamma_constant(k, d1) for k in range(2, len(a), 2))
        return ChebExpansion(
            basis="gamma", coeffs=[a0] + a[1:], d1=d1, k1=self.k1,
            decay_rate=self.decay_rate, coeff_bound=self.coeff_bound,
        )

    def tail_bound(self) -> float:
        """Upper bound for the truncation error sup_{|x|<=k1} |f - reconstruction|.

        Uses the fitted envelope M rho^-k and the basis sup on [-k1, k1]
        (|Phi_k| <= 2 cosh(k acosh(k1/2)) for k1 > 2, else <= 2; the Gamma
        constants add at most 1).
        """
        if not math.isfinite(self.decay_rate) or self.decay_rate <= 1.0:
            return float("inf") if self.coeff_bound else 0.0
        rho, big_m = self.decay_rate, self.coeff_bound
        # sup |basis_k| <= 2 cosh(k acosh(k1/2)) <= 2 growth^k for k1 > 2,
        # <= 2 otherwise; the Gamma constants add at most 1.
        growth = math.exp(math.acosh(self.k1 / 2)) if self.k1 > 2 else 1.0
        ratio = growth / rho
        if ratio >= 1:
            return float("inf")
        return 3.0 * big_m * ratio ** (self.degree + 1) / (1 - ratio)

    def to_dict(self) -> dict:
        return {
            "basis": self.basis,
            "coeffs": list(self.coeffs),
            "d1": self.d1,
            "k1": self.k1,
            "decay_rate": self.decay_rate,
            "coeff_bound": self.coeff_bound,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChebExpansion":
        return cls(
            basis=data["basis"],
            coeffs=tuple(data["coeffs"]),
            d1=data.get("d1"),
            k1=data.get("k1", 2.0),
            decay_rate=data.get("decay_rate", float("inf")),
            coeff_bound=data.get("coeff_bound", 0.0),
        )


def _phi_coeffs_quadrature(f, max_k: int, nodes: int) -> np.ndarray:
    theta = np.pi * (np.arange(nodes) + 0.5) / nodes
    vals = np.asarray(f(2 * np.cos(theta)), dtype=float)
    ks = np.arange(max_k + 1)
    cos_table = np.cos(np.outer(ks, theta))
    # a_0 = mean of f(2 cos t); a_k = (1/pi) int f(2 cos t) cos(kt) dt
    return (cos_table @ vals) / nodes


def fit_expansion(
    f,
    basis: str = "phi",
    d1: int | None = None,
    k1: float = 2.0,
    max_k: int = 48,
    tol: float = DEFAULT_TOL,
) -> ChebExpansion:
    """Fit f on the basis interval by Chebyshev-Gauss quadrature.

    Node count starts at 4*(max_k+1) and doubles until the coefficients are
    stable to tol.  Trailing coefficients below tol (relative to the largest)
    are dropped; if the trailing coefficient never falls below that threshold
    and the fitted envelope shows no decay, NonDecayingCoefficients is raised.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    nodes = 4 * (max_k + 1)
    a = _phi_coeffs_quadrature(f, max_k, nodes)
    while nodes < MAX_QUAD_NODES:
        nodes *= 2
        a2 = _phi_coeffs_quadrature(f, max_k, nodes)
        if np.max(np.abs(a2 - a)) <= tol * max(1.0, np.max(np.abs(a2))):
            a = a2
            break
        a = a2
    scale = max(1.0, float(np.max(np.abs(a))))
    keep = np.where(np.abs(a) >= tol * scale)[0]
    rho, big_m = _fit_envelope(a, tol * scale)
    if len(keep) and keep[-1] == max_k and np.abs(a[max_k]) >= tol * scale:
        # not converged by max_k and no usable geometric envelope: the fit
        # interval's Bernstein ellipse is (numerically) empty
        if rho <= 1.15:
            raise NonDecayingCoefficients(
                f"|a_{max_k}| = {abs(a[max_k]):.3e} has not decayed below "
                f"{tol * scale:.3e}; fitted decay rate {rho:.4f}"
            )
    last = int(keep[-1]) if len(keep) else 0
    coeffs = [float(v) for v in a[: last + 1]]
    exp = ChebExpansion(basis="phi", coeffs=coeffs, d1=d1, k1=float(k1), decay_rate=rho, coeff_bound=big_m)
    if basis == "gamma":
        exp = exp.to_gamma(d1)
    return exp


def _fit_envelope(a: np.ndarray, floor: float):
    """Least-squares fit of |a_k| ~ M rho^-k over the significant k >= 1."""
    ks = [k for k in range(1, len(a)) if abs(a[k]) > max(floor, 1e-300)]
    if len(ks) < 2:
        return float("inf"), float(np.max(np.abs(a))) if len(a) else 0.0
    logs = np.log([abs(a[k]) for k in ks])
    slope, intercept = np.polyfit(ks, logs, 1)
    rho = float(np.exp(-slope))
    # inflate M so the envelope genuinely dominates every kept coefficient
    big_m = max(abs(a[k]) * rho**k for k in ks)
    big_m = max(big_m, abs(a[0]))
    return rho, float(big_m)


# ---------------------------------------------------------------------------
# CLT quantities
# ---------------------------------------------------------------------------


def sigma_f(expansion: ChebExpansion) -> float:
    """Limit variance 2 sum_{k>=2} k a_k^2 (Phi-basis coefficients)."""
    a = expansion.to_phi().coeffs
    return 2.0 * sum(k * a[k] ** 2 for k in range(2, len(a)))


def cov_fg(exp_f: ChebExpansion, exp_g: ChebExpansion) -> float:
    """Limit covariance 2 sum_{k>=2} k a_k(f) a_k(g)."""
    af = exp_f.to_phi().coeffs
    ag = exp_g.to_phi().coeffs
    kmax = min(len(af), len(ag)) - 1
    return 2.0 * sum(k * af[k] * ag[k] for k in range(2, kmax + 1))


def mu_cnbw(k: int, d1: int, d2: int) -> int:
    """Mean of the limiting CNBW variable: sum over divisors j >= 2 of q^j."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q = (d1 - 1) * (d2 - 1)
    return sum(q**j for j in range(2, k + 1) if k % j == 0)


def default_r_n(n: int, d1: int, d2: int, beta: float = 0.4) -> int:
    """floor(beta * log n / log q); the eigenvalue-statistic cutoff scale."""
    q = (d1 - 1) * (d2 - 1)
    if q < 2:
        raise ValueError("need (d1-1)(d2-1) >= 2")
    return int(beta * math.log(n) / math.log(q))


def m_f_n(expansion: ChebExpansion, n: int, d1: int, d2: int, r_n: int) -> float:
    """Deterministic centering for growing-degree linear statistics.

    m_f = n a_0 + sum_{k=1}^{r_n} a_k q^{-k/2} (mu_k - n (d1-2)(d2-1)^{k/2}
    for even k), with Phi-basis coefficients a_k.
    """
    a = expansion.to_phi().coeffs
    q = (d1 - 1) * (d2 - 1)
    total = n * a[0]
    for k in range(1, min(r_n, len(a) - 1) + 1):
        term = mu_cnbw(k, d1, d2)
        if k % 2 == 0:
            term -= n * (d1 - 2) * (d2 - 1) ** (k // 2)
        total += a[k] * term / q ** (k / 2)
    return float(total)


def fixed_interval_halfwidth(d1: int, d2: int) -> float:
    """Deterministic top eigenvalue d1 sqrt(d2-1)/sqrt(d1-1) of the scaled Gram."""
    return d1 * math.sqrt(d2 - 1) / math.sqrt(d1 - 1)


def basis_element(basis: str, k: int, d1: int | None = None) -> ChebExpansion:
    """The expansion whose only nonzero coefficient is a_k = 1."""
    coeffs = [0.0] * k + [1.0]
    return ChebExpansion(basis=basis, coeffs=coeffs, d1=d1)


def builtin_function(name: str, d1: int | None = None):
    """Named test functions for configs: phi_k, gamma_k, exp, poly:c0,c1,..."""
    if name.startswith("phi_"):
        return basis_element("phi", int(name[4:]), d1)
    if name.startswith("gamma_"):
        return basis_element("gamma", int(name[6:]), d1)
    if name == "exp":
        return np.exp
    if name.startswith("poly:"):
        cs = [float(t) for t in name[5:].split(",")]
        return lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), cs)
    raise ValueError(f"unknown builtin function {name!r}")
