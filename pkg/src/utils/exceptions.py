"""
Custom exceptions for linfdiff
"""


class LinfDiffException(Exception):
    """Base exception for linfdiff"""
    pass


class DependentInput(LinfDiffException):
    """Raised when vectors expected to be independent are not"""
    pass


class NegativeIndex(LinfDiffException):
    """Raised when shifting an index set would produce a negative entry"""
    pass


class MalformedShuffle(LinfDiffException):
    """Raised for index sets that do not form an ordered partition"""
    pass


class AlmostInput(LinfDiffException):
    """Raised when an operation needs d0 but the object is almost simplicial"""
    pass


class NotSimplicialMap(LinfDiffException):
    """Raised when a level-wise map does not commute with structure maps"""
    pass


class NegativeDegree(LinfDiffException):
    """Raised when a shift leaves non-negative degrees"""
    pass


class WordTooLong(LinfDiffException):
    """Raised for words beyond the truncation window"""
    pass


class NotSquareZero(LinfDiffException):
    """Raised when a codifferential does not square to zero"""
    pass


class NotReduced(LinfDiffException):
    """Raised when level 0 is not the ground field"""
    pass


class NotKan(LinfDiffException):
    """Raised when a required horn filler or PBW splitting does not exist"""
    pass


class MalformedJets(LinfDiffException):
    """Raised when jet data fails the coalgebra morphism axioms"""
    pass


class ComparisonFailed(LinfDiffException):
    """Raised when the comparison morphism fails a check"""
    pass


class NotMorphism(LinfDiffException):
    """Raised when a map of inputs is not a morphism"""
    pass


class SchemaViolation(LinfDiffException):
    """Raised when input documents violate the linfdiff schema"""
    pass


class ConfigurationException(LinfDiffException):
    """Exception raised for configuration errors"""
    pass


class OutputException(LinfDiffException):
    """Exception raised when output operations fail"""
    pass
