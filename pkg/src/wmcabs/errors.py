"""Exception hierarchy shared by every module of the package."""


class WmcAbsError(Exception):
    """Base class for all errors raised by wmcabs."""


class VocabularyError(WmcAbsError):
    """Malformed vocabulary: duplicate names, undeclared sorts."""


class UnknownSymbolError(WmcAbsError):
    """A predicate, sort or constant that the vocabulary does not declare."""


class ArityError(WmcAbsError):
    pass


class UnboundVariableError(WmcAbsError):
    pass


class AtomOutsideUniverseError(WmcAbsError):
    pass


class EnumerationCapError(WmcAbsError):
    """The atom universe is too large for exhaustive model enumeration."""


class CNFBudgetError(WmcAbsError):
    """Distribution-based CNF conversion exceeded its clause budget."""


class WeightError(WmcAbsError):
    pass


class ZeroPartitionError(WmcAbsError):
    """WMC(theory, w) is zero, so probabilities are undefined."""


class ZeroEvidenceError(WmcAbsError):
    """WMC(evidence & theory, w) is zero, so the conditional is undefined."""


class MappingError(WmcAbsError):
    """Ill-formed refinement mapping (unmapped atom, duplicate coverage...)."""


class NonSeparableError(MappingError):
    """A separable mapping was required but the mapping shares target atoms."""


class EvidenceError(WmcAbsError):
    """Evidence is not a single literal or has no high-level counterpart."""


class NotDefinableError(EvidenceError):
    """The m-weakening of the evidence is not entailed by the evidence."""


class DerivationError(WmcAbsError):
    """Preconditions of an abstraction-derivation routine are violated."""


class DocumentError(WmcAbsError):
    """Schema violation in a theory / mapping / space document."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if path is not None:
            where += str(path)
        if line is not None:
            where += f":{line}:{column}"
        super().__init__(f"{where}: {message}" if where else message)
