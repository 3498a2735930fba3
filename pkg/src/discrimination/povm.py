"""
Unambiguous discrimination of an untouched marker |0> from a visited
marker cos(theta)|0> + sin(theta)|1>.
"""
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Dict, Tuple

import numpy as np

from src.core.exceptions import DiscriminationError
from src.qcore.state import TOLERANCE
from src.utils.logging_config import get_discrimination_logger

logger = get_discrimination_logger()


class Verdict(StrEnum):
    CONCLUSIVE_PRESENT = "ConclusivePresent"
    CONCLUSIVE_ABSENT = "ConclusiveAbsent"
    INCONCLUSIVE = "Inconclusive"

    @property
    def code(self) -> str:
        return VERDICT_CODES[self]


VERDICT_CODES: Dict[Verdict, str] = {
    Verdict.CONCLUSIVE_PRESENT: "P",
    Verdict.CONCLUSIVE_ABSENT: "A",
    Verdict.INCONCLUSIVE: "I",
}


class PovmMode(StrEnum):
    BASIS_CHECK = "basis"
    OPTIMAL_IDP = "idp"


def visited_marker(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)], dtype=np.complex128)


def operator_sqrt(operator: np.ndarray) -> np.ndarray:
    """Positive square root of a Hermitian PSD operator."""
    eigenvalues, vectors = np.linalg.eigh(operator)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


@dataclass(frozen=True)
class Povm:
    mode: PovmMode
    theta: float
    elements: Tuple[Tuple[Verdict, np.ndarray], ...] = field(repr=False)

    @property
    def verdicts(self) -> Tuple[Verdict, ...]:
        return tuple(verdict for verdict, _ in self.elements)

    def element(self, verdict: Verdict) -> np.ndarray:
        for candidate, operator in self.elements:
            if candidate == verdict:
                return operator
        raise DiscriminationError(f"POVM {self.mode} has no {verdict} element")

    def measurement_operator(self, verdict: Verdict) -> np.ndarray:
        """Kraus operator sqrt(E) used for the post-measurement state."""
        return operator_sqrt(self.element(verdict))

    def completeness_residual(self) -> float:
        total = sum(operator for _, operator in self.elements)
        return float(np.max(np.abs(total - np.eye(2))))

    def cross_errors(self) -> Dict[str, float]:
        """<0|E_present|0> and <chi|E_absent|chi>; both vanish for an unambiguous POVM."""
        ground = np.array([1.0, 0.0], dtype=np.complex128)
        chi = visited_marker(self.theta)
        errors = {"present_on_untouched": float(np.vdot(ground, self.element(Verdict.CONCLUSIVE_PRESENT) @ ground).real)}
        if Verdict.CONCLUSIVE_ABSENT in self.verdicts:
            errors["absent_on_visited"] = float(np.vdot(chi, self.element(Verdict.CONCLUSIVE_ABSENT) @ chi).real)
        return errors

    def inconclusive_probability(self, prior_visited: float = 0.5) -> float:
        inconclusive = self.element(Verdict.INCONCLUSIVE)
        ground = np.array([1.0, 0.0], dtype=np.complex128)
        chi = visited_marker(self.theta)
        on_ground = np.vdot(ground, inconclusive @ ground).real
        on_visited = np.vdot(chi, inconclusive @ chi).real
        return float((1.0 - prior_visited) * on_ground + prior_visited * on_visited)

    def validate(self, tol: float = TOLERANCE) -> None:
        for verdict, operator in self.elements:
            if not np.allclose(operator, operator.conj().T, atol=tol, rtol=0.0):
                raise DiscriminationError(f"{verdict} element is not Hermitian")
            if np.min(np.linalg.eigvalsh(operator)) < -tol:
                raise DiscriminationError(f"{verdict} element is not positive semidefinite")
        residual = self.completeness_residual()
        if residual > tol:
            raise DiscriminationError(f"POVM elements sum to identity only within {residual:.3e}")
        for name, error in self.cross_errors().items():
            if abs(error) > tol:
                raise DiscriminationError(f"Cross error {name} = {error:.3e} is not zero")

    def is_valid(self, tol: float = TOLERANCE) -> bool:
        try:
            self.validate(tol)
        except DiscriminationError:
            return False
        return True


def build_discrimination_povm(theta: float, mode: PovmMode = PovmMode.BASIS_CHECK) -> Povm:
    """
    BASIS_CHECK: {present: |1><1|, inconclusive: |0><0|}.
    OPTIMAL_IDP: the equal-prior optimum, inconclusive with probability cos(theta).
    """
    if not 0.0 < theta <= np.pi / 2 + TOLERANCE:
        raise DiscriminationError(
            f"Discrimination needs theta in (0, pi/2]; at theta={theta} the two marker states coincide"
        )
    mode = PovmMode(mode)

    excited = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
    if mode == PovmMode.BASIS_CHECK:
        elements = (
            (Verdict.CONCLUSIVE_PRESENT, excited),
            (Verdict.INCONCLUSIVE, np.eye(2, dtype=np.complex128) - excited),
        )
    else:
        c, s = np.cos(theta), np.sin(theta)
        orthogonal = np.array([s, -c], dtype=np.complex128)
        present = excited / (1.0 + c)
        absent = np.outer(orthogonal, orthogonal.conj()) / (1.0 + c)
        elements = (
            (Verdict.CONCLUSIVE_PRESENT, present),
            (Verdict.CONCLUSIVE_ABSENT, absent),
            (Verdict.INCONCLUSIVE, np.eye(2, dtype=np.complex128) - present - absent),
        )

    povm = Povm(mode=mode, theta=float(theta), elements=elements)
    povm.validate()
    logger.debug("povm_built", mode=str(mode), theta=theta, inconclusive=povm.inconclusive_probability())
    return povm
