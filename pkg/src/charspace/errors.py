"""Exception types shared across the package."""


class CharspaceError(Exception):
    pass


class BudgetExceeded(CharspaceError):
    """An exhaustive enumeration would exceed its configured budget."""


class ConstraintViolation(CharspaceError, ValueError):
    """Parameters fail the inequalities a construction requires."""


class PreconditionError(CharspaceError, ValueError):
    """An input does not satisfy an operation's precondition."""


class OrbitTooLarge(BudgetExceeded):
    pass


class MoreThanTwoUnrepeated(PreconditionError):
    pass
