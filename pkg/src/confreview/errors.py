"""Exception hierarchy shared by all modules.

Each class maps to exactly one HTTP status in the service layer, so
raising the right type anywhere in the stack produces the right wire
error without translation tables in handlers.
"""

from __future__ import annotations


class ConfReviewError(Exception):
    """Base class for every domain error."""


class ValidationFailure(ConfReviewError):
    """Input failed validation; carries the full findings list."""

    def __init__(self, findings: list[str] | str):
        if isinstance(findings, str):
            findings = [findings]
        self.findings = findings
        super().__init__("; ".join(findings))


class AuthenticationError(ConfReviewError):
    """Login/password rejected. Message is constant-shape on purpose:
    callers must not be able to distinguish a bad password from an
    unknown login."""

    def __init__(self) -> None:
        super().__init__("invalid credentials")


class AuthorizationError(ConfReviewError):
    """Authenticated principal is not allowed to perform the action."""

    def __init__(self, rule_id: str, message: str | None = None):
        self.rule_id = rule_id
        super().__init__(message or f"denied by rule {rule_id}")


class NotFoundError(ConfReviewError):
    """Referenced entity does not exist."""


class LifecycleError(ConfReviewError):
    """Operation is valid in general but not in the current state
    (wrong paper status, deadline passed, decisions already recorded)."""
