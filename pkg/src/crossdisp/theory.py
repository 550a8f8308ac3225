"""Expected cross-sectional dispersion under a Gaussian one-period model.

For stocks with means m_i, standard deviations sigma_i and correlations
rho_ij, the expected population variance of the cross-section is

    E[V] = (1/N) sum_i sigma_i^2
         - (1/N^2) sum_ij rho_ij sigma_i sigma_j
         + (1/N) sum_i m_i^2 - ((1/N) sum_i m_i)^2.

With a common sigma, mean and pairwise correlation rho this collapses to
(1 - 1/N)(1 - rho) sigma^2, which decreases linearly in rho and vanishes
as rho -> 1. The expression itself is pure algebra and evaluates for any
correlation input; whether that input is realizable as an actual
correlation matrix is a separate feasibility question answered by the
simulation module's gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, NoLimit

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Equicorrelation:
    """All off-diagonal correlations equal to rho."""

    rho: float

    def __post_init__(self) -> None:
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [-1, 1], got {self.rho}")


@dataclass(frozen=True)
class FullMatrix:
    """An explicit correlation matrix: symmetric, unit diagonal, entries in [-1, 1]."""

    matrix: FloatArray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.float64)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"correlation matrix must be square, got {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("correlation matrix must be symmetric")
        if not np.all(np.diag(m) == 1.0):
            raise ValueError("correlation matrix must have a unit diagonal")
        if np.any(np.abs(m) > 1.0):
            raise ValueError("correlations must lie in [-1, 1]")


@dataclass(frozen=True)
class CorrelationSpec:
    """Means, volatilities and correlation structure for an N-stock universe."""

    n: int
    means: FloatArray
    sigmas: FloatArray
    structure: Equicorrelation | FullMatrix

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("universe size must be at least 1")
        means = np.array(self.means, dtype=np.float64)
        sigmas = np.array(self.sigmas, dtype=np.float64)
        means.setflags(write=False)
        sigmas.setflags(write=False)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "sigmas", sigmas)
        if means.shape != (self.n,):
            raise DimensionMismatch(
                f"means has shape {means.shape}, expected ({self.n},)"
            )
        if sigmas.shape != (self.n,):
            raise DimensionMismatch(
                f"sigmas has shape {sigmas.shape}, expected ({self.n},)"
            )
        if np.any(~np.isfinite(sigmas)) or np.any(sigmas <= 0.0):
            raise ValueError("sigmas must be strictly positive and finite")
        if np.any(~np.isfinite(means)):
            raise ValueError("means must be finite")
        if isinstance(self.structure, FullMatrix):
            if self.structure.matrix.shape != (self.n, self.n):
                raise DimensionMismatch(
                    f"correlation matrix has shape {self.structure.matrix.shape}, "
                    f"expected ({self.n}, {self.n})"
                )

    @classmethod
    def equicorrelated(
        cls, n: int, rho: float, sigma: float = 1.0, mean: float = 0.0
    ) -> CorrelationSpec:
        return cls(
            n=n,
            means=np.full(n, float(mean)),
            sigmas=np.full(n, float(sigma)),
            structure=Equicorrelation(rho),
        )

    @classmethod
    def with_matrix(
        cls,
        matrix: npt.ArrayLike,
        sigmas: npt.ArrayLike | None = None,
        means: npt.ArrayLike | None = None,
    ) -> CorrelationSpec:
        structure = FullMatrix(np.asarray(matrix, dtype=np.float64))
        n = structure.matrix.shape[0]
        s = np.ones(n) if sigmas is None else np.asarray(sigmas, dtype=np.float64)
        m = np.zeros(n) if means is None else np.asarray(means, dtype=np.float64)
        return cls(n=n, means=m, sigmas=s, structure=structure)

    def correlation_matrix(self) -> FloatArray:
        if isinstance(self.structure, FullMatrix):
            return np.array(self.structure.matrix)
        rho = self.structure.rho
        out = np.full((self.n, self.n), rho, dtype=np.float64)
        np.fill_diagonal(out, 1.0)
        return out

    def covariance_matrix(self) -> FloatArray:
        return self.correlation_matrix() * np.outer(self.sigmas, self.sigmas)

    def min_correlation_eigenvalue(self) -> float:
        """Smallest eigenvalue of the correlation matrix.

        Equicorrelation has the closed form min(1 - rho, 1 + (n-1) rho);
        full matrices go through a symmetric eigendecomposition.
        """
        if isinstance(self.structure, Equicorrelation):
            rho = self.structure.rho
            if self.n == 1:
                return 1.0
            return min(1.0 - rho, 1.0 + (self.n - 1) * rho)
        return float(np.linalg.eigvalsh(self.structure.matrix)[0])


def expected_dispersion(spec: CorrelationSpec) -> float:
    """Expected population variance of one cross-section under ``spec``.

    Pure algebra in the first and second moments; no feasibility check.
    """
    s = spec.sigmas
    m = spec.means
    n = spec.n
    sum_var = float(np.sum(s * s))
    if isinstance(spec.structure, Equicorrelation):
        total = float(np.sum(s))
        pair_sum = sum_var + spec.structure.rho * (total * total - sum_var)
    else:
        pair_sum = float(s @ spec.structure.matrix @ s)
    return (
        sum_var / n
        - pair_sum / (n * n)
        + float(np.mean(m * m))
        - float(np.mean(m)) ** 2
    )


def equicorrelation_expected_dispersion(n: int, rho: float, sigma: float = 1.0) -> float:
    """Closed form (1 - 1/n)(1 - rho) sigma^2 for the homogeneous case."""
    if n < 1:
        raise ValueError("universe size must be at least 1")
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [-1, 1], got {rho}")
    return (1.0 - 1.0 / n) * (1.0 - rho) * sigma * sigma


@dataclass(frozen=True)
class EquicorrelatedFamily:
    """A growing homogeneous universe: common rho, sigma and mean for all n."""

    rho: float
    sigma: float = 1.0
    mean: float = 0.0


@dataclass(frozen=True)
class TermLimits:
    """User-supplied limits of the four averages in the dispersion formula.

    avg_variance:     lim (1/N) sum sigma_i^2
    avg_pairwise_cov: lim (1/N^2) sum_ij rho_ij sigma_i sigma_j
    avg_sq_mean:      lim (1/N) sum m_i^2
    avg_mean:         lim (1/N) sum m_i
    """

    avg_variance: float
    avg_pairwise_cov: float
    avg_sq_mean: float
    avg_mean: float


def limit_dispersion(family: EquicorrelatedFamily | TermLimits) -> float:
    """Large-universe limit of the expected dispersion.

    Supported families are the homogeneous equicorrelated universe, whose
    limit is (1 - rho) sigma^2, and explicit term limits. Anything else
    raises NoLimit; no general sequence inference is attempted.
    """
    if isinstance(family, EquicorrelatedFamily):
        return (1.0 - family.rho) * family.sigma * family.sigma
    if isinstance(family, TermLimits):
        return (
            family.avg_variance
            - family.avg_pairwise_cov
            + family.avg_sq_mean
            - family.avg_mean**2
        )
    raise NoLimit(
        f"cannot derive term limits for {type(family).__name__}; "
        "supply TermLimits explicitly"
    )


def dispersion_bounds(n: int) -> tuple[float, float]:
    """Range of the expected dispersion over all correlations, for m = 0,
    sigma = 1: zero at full positive correlation, 2 - 2/n at rho = -1."""
    if n < 2:
        raise ValueError("bounds need a universe of at least 2 stocks")
    return 0.0, 2.0 - 2.0 / n
