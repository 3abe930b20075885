from validator.alternation_validator import check_strict_alternation
from validator.architecture_validator import validate_architecture
from validator.diagnostics import (
    make_issue,
    has_errors,
    Element,
    Severity,
)
from schemas.errors import ArchitectureError


def validate_all(system):
    issues = []

    # ============================================================
    # Structure
    # ============================================================
    issues += validate_architecture(system)

    # ============================================================
    # Coordinator discipline
    # ============================================================
    for coord in system.coordinators:
        verdict = check_strict_alternation(coord)
        if not verdict:
            issues.append(
                make_issue(
                    code="ALT-001",
                    element=Element.BEHAVIOR,
                    severity=Severity.ERROR,
                    message=verdict.detail,
                )
            )

    return issues


def ensure_valid(system):
    """Raise ArchitectureError unless the system is clean."""
    issues = validate_all(system)
    if has_errors(issues):
        raise ArchitectureError(issues)
    return issues
