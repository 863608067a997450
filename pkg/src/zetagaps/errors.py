"""Exception hierarchy shared by every module."""


class ZetaGapsError(Exception):
    """Base class for all library errors."""


class DomainError(ZetaGapsError, ValueError):
    """An argument lies outside the range where a formula is stated."""


class NoBracket(ZetaGapsError, ValueError):
    """The endpoints handed to a root finder do not bracket a sign change."""


class LimitTooLarge(ZetaGapsError, ValueError):
    pass


class TableTooSmall(ZetaGapsError, ValueError):
    pass


class TooCloseToZero(ZetaGapsError, ValueError):
    """Evaluation point is within the exclusion radius of a zero ordinate."""


class CountMismatch(ZetaGapsError, RuntimeError):
    """Sign-change scan and zero count disagree (likely a missed close pair)."""


class TooFewZeros(ZetaGapsError, ValueError):
    pass


class OutOfRange(ZetaGapsError, ValueError):
    """A zero list does not cover the window an operation needs."""


class SupportTooLarge(ZetaGapsError, ValueError):
    pass


class KTooLarge(ZetaGapsError, ValueError):
    pass
