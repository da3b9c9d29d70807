"""Warning categories surfaced by the library.

Non-fatal events (ties broken deterministically, endpoint orbits, search
caps binding, fixed-point completions) are emitted through the standard
``warnings`` machinery so callers can record or silence them.  The CLI
collects every event of these categories into its run report.
"""

from __future__ import annotations


class DenjoyWarning(UserWarning):
    """Base category for all events emitted by this package."""


class CrossLetterTieWarning(DenjoyWarning):
    """A global argmin tie between blocks of *different* letters.

    Same-letter ties are impossible under the algebraic hypothesis and
    raise ``TieDetected`` instead; cross-letter ties are broken leftmost.
    """


class EndpointOrbitWarning(DenjoyWarning):
    """An orbit point landed exactly on an interval breakpoint."""


class HeadCapWarning(DenjoyWarning):
    """The head-search level cap bound before periodicity was detected."""


class FixedPointCompletionWarning(DenjoyWarning):
    """A window side stalled and was completed by a fixed-point limit."""


class RejectedCandidateWarning(DenjoyWarning):
    """A periodic candidate failed window verification and was dropped."""
