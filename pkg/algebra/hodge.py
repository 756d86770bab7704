"""
Volume pseudoscalars and Hodge extensors, standard and metric.

Every map takes an optional standard volume element τ; the canonical
orientation τ = e_{1…n} is used when none is given. Metric maps derive the
metric volume τ_g = √|det g| τ from it.
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from utils.error_handler import GradeError
from utils.logger import get_logger

from .extensor_repr import GeneralExtensor, PQExtensor
from .metric_structures import MetricStructure, g_clifford_product, g_contraction, g_scalar_product
from .multivector_kernel import (
    AlgebraContext, Basis, Multivector, left_contraction, reversion,
    right_contraction, scalar_product, wedge_of_vectors
)
from .operator_calculus import adjoint_inverse, extend

logger = get_logger("algebra.hodge")


class VolumeKind(str, Enum):
    STANDARD = "standard"
    METRIC = "metric"


@dataclass(frozen=True)
class VolumeElement:
    """A volume pseudoscalar; ``metric_det`` is det[g] for metric volumes, 1 otherwise."""
    tau: Multivector
    kind: VolumeKind = VolumeKind.STANDARD
    metric_det: float = 1.0

    def __post_init__(self):
        if not self.tau.is_homogeneous(self.tau.dim) or self.tau.is_zero():
            raise GradeError("Volume element must be a non-zero pseudoscalar")

    @property
    def context(self) -> AlgebraContext:
        return self.tau.context

    def flipped(self) -> "VolumeElement":
        """Same volume with the opposite orientation."""
        return replace(self, tau=-self.tau)

    def standard_tau(self) -> Multivector:
        """The underlying standard τ (τ_g / √|det g| for metric volumes)."""
        if self.kind is VolumeKind.STANDARD:
            return self.tau
        return self.tau / np.sqrt(abs(self.metric_det))


def default_volume(context: AlgebraContext) -> VolumeElement:
    """Orthonormal frame, canonical orientation."""
    return VolumeElement(Multivector.pseudoscalar(context))


def standard_volume(basis: Basis) -> VolumeElement:
    """τ = √(e_∧·e_∧) e^∧ for a basis and its reciprocal."""
    n = basis.context.dim
    e_wedge = Multivector(basis.context, wedge_of_vectors(basis.vectors, n))
    e_wedge_dual = Multivector(basis.context, wedge_of_vectors(basis.reciprocal().vectors, n))
    return VolumeElement(np.sqrt(scalar_product(e_wedge, e_wedge)) * e_wedge_dual)


def pseudoscalar_expansion(I: Multivector, volume: Optional[VolumeElement] = None) -> Multivector:
    """(I·τ)τ, which reproduces any pseudoscalar I."""
    tau = (volume or default_volume(I.context)).standard_tau()
    return scalar_product(I, tau) * tau


# Standard Hodge extensor

def hodge_standard(X: Multivector, volume: Optional[VolumeElement] = None) -> Multivector:
    """★X = X̃ ⌟ τ."""
    tau = (volume or default_volume(X.context)).standard_tau()
    return left_contraction(reversion(X), tau)


def hodge_standard_inv(X: Multivector, volume: Optional[VolumeElement] = None) -> Multivector:
    """★⁻¹X = τ ⌞ X̃."""
    tau = (volume or default_volume(X.context)).standard_tau()
    return right_contraction(tau, reversion(X))


def hodge_standard_extensor(context: AlgebraContext, volume: Optional[VolumeElement] = None) -> GeneralExtensor:
    return GeneralExtensor.from_function(context, lambda X: hodge_standard(X, volume))


def hodge_standard_as_pq(context: AlgebraContext, p: int, volume: Optional[VolumeElement] = None) -> PQExtensor:
    """★ restricted to a (p, n−p)-extensor."""
    context.check_grade(p)
    return hodge_standard_extensor(context, volume).block(p, context.dim - p)


# Metric Hodge extensor

def metric_volume(m: MetricStructure, basis: Optional[Basis] = None) -> VolumeElement:
    """
    τ_g = √|e_∧ ·_g e_∧| e^∧, which equals √|det g| τ.

    Args:
        m: Metric structure
        basis: Basis of V, orthonormal frame when None
    """
    basis = basis or Basis.orthonormal(m.context)
    n = m.context.dim
    e_wedge = Multivector(m.context, wedge_of_vectors(basis.vectors, n))
    e_wedge_dual = Multivector(m.context, wedge_of_vectors(basis.reciprocal().vectors, n))
    scale = np.sqrt(abs(g_scalar_product(m, e_wedge, e_wedge)))
    return VolumeElement(scale * e_wedge_dual, VolumeKind.METRIC, m.det)


def _metric_tau(m: MetricStructure, volume: Optional[VolumeElement]) -> Multivector:
    if volume is not None and volume.kind is VolumeKind.METRIC:
        return volume.tau
    tau = (volume or default_volume(m.context)).standard_tau()
    return np.sqrt(abs(m.det)) * tau


def metric_expansion(m: MetricStructure, I: Multivector, volume: Optional[VolumeElement] = None) -> Multivector:
    """(−1)^q (I ·_{g⁻¹} τ_g) τ_g, which reproduces any pseudoscalar I."""
    tau_g = _metric_tau(m, volume)
    return (-1.0) ** m.q * g_scalar_product(m, I, tau_g, inverse=True) * tau_g


def metric_normalization(m: MetricStructure, volume: Optional[VolumeElement] = None) -> float:
    """Scalar part of τ_g ∘_{g⁻¹} τ̃_g; equals (−1)^q."""
    tau_g = _metric_tau(m, volume)
    return g_clifford_product(m, tau_g, reversion(tau_g), inverse=True).scalar_part


def hodge_metric(m: MetricStructure, X: Multivector, volume: Optional[VolumeElement] = None) -> Multivector:
    """⋆_g X = X̃ ⌟_{g⁻¹} τ_g."""
    return g_contraction(m, reversion(X), _metric_tau(m, volume), side="left", inverse=True)


def hodge_metric_inv(m: MetricStructure, X: Multivector, volume: Optional[VolumeElement] = None) -> Multivector:
    """⋆_g⁻¹ X = (−1)^q τ_g ⌞_{g⁻¹} X̃."""
    tau_g = _metric_tau(m, volume)
    return (-1.0) ** m.q * g_contraction(m, tau_g, reversion(X), side="right", inverse=True)


def hodge_metric_via_standard(m: MetricStructure, X: Multivector,
                              volume: Optional[VolumeElement] = None) -> Multivector:
    """⋆_g = ((−1)^q / √|det g|) ḡ ∘ ★."""
    standard = VolumeElement(_metric_tau(m, volume) / np.sqrt(abs(m.det)))
    factor = (-1.0) ** m.q / np.sqrt(abs(m.det))
    return factor * m.deform(hodge_standard(X, standard))


def hodge_metric_via_gauge(m: MetricStructure, X: Multivector,
                           volume: Optional[VolumeElement] = None) -> Multivector:
    """
    ⋆_g = sgn(det h) h̄† ∘ ⋆_η ∘ h̄* with h* = (h†)⁻¹.

    ⋆_η is the metric Hodge extensor of the gauge metric η, whose metric
    volume coincides with τ.
    """
    standard = VolumeElement(_metric_tau(m, volume) / np.sqrt(abs(m.det)))
    gauge = m.gauge_metric()
    h_star = extend(adjoint_inverse(m.h))
    h_adjoint = extend(m.h.transpose())
    inner = hodge_metric(gauge, h_star.apply(X), standard)
    return m.sign_det_h * h_adjoint.apply(inner)


def hodge_metric_extensor(m: MetricStructure, volume: Optional[VolumeElement] = None) -> GeneralExtensor:
    return GeneralExtensor.from_function(m.context, lambda X: hodge_metric(m, X, volume))
