"""Exception hierarchy shared by all modules.

Every error carries an ``exit_code`` used by the command line front end:
1 usage, 2 input, 3 cap exceeded, 4 property violation.
"""


class GyroError(Exception):
    exit_code = 4


class InputError(GyroError):
    exit_code = 2


class CapExceeded(GyroError):
    exit_code = 3

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


# group-core
class NotAssociative(InputError):
    def __init__(self, triple):
        super().__init__(f"table is not associative at triple {triple}")
        self.triple = triple


class NoIdentity(InputError):
    pass


class NoInverse(InputError):
    def __init__(self, element):
        super().__init__(f"element {element} has no two-sided inverse")
        self.element = element


class InvalidParameter(InputError):
    pass


class NotNormal(InputError):
    pass


class NotSubgroup(InputError):
    pass


# gyro-structures
class NotRightLoop(InputError):
    pass


class IdentityNotPreserved(InputError):
    pass


class NotSubloop(InputError):
    pass


# gyro-cohomology / gyro-square
class KernelNotAbelian(InputError):
    pass


class NotACocycle(InputError):
    pass


class NotCentral(InputError):
    pass


class NoSection(InputError):
    pass


class BadModulus(InputError):
    pass


class AutDataMissing(InputError):
    pass


class RelationViolation(GyroError):
    pass


class NotAHomomorphism(GyroError):
    pass


# catalog
class ParseError(InputError):
    pass


class UnknownGroup(InputError):
    pass
