"""Exception types shared across the package."""

from __future__ import annotations


class BioflowError(Exception):
    """Base class for all bioflow errors."""


class DataError(BioflowError):
    """A dataset file failed validation. Carries enough context to find the cell."""

    def __init__(self, message: str, *, file: str = "", row: int | None = None,
                 field: str = ""):
        self.file = file
        self.row = row
        self.field = field
        where = file
        if row is not None:
            where += f":row {row}"
        if field:
            where += f":{field}"
        super().__init__(f"{where}: {message}" if where else message)


class MissingColumn(DataError):
    pass


class BadUnit(DataError):
    pass


class UnknownBiomass(DataError):
    pass


class EligibilityViolation(DataError):
    pass


class SizeOutOfRange(BioflowError):
    pass


class IneligibleBiomass(BioflowError):
    """Biomass routed to a conversion technology it cannot feed."""


class MissingMatrixEntry(BioflowError):
    pass


class DistanceBackendError(BioflowError):
    """A routing adapter failed and the configuration forbids falling back."""


class NoEligibleFeedstock(BioflowError):
    def __init__(self, plant_id: str):
        self.plant_id = plant_id
        super().__init__(f"plant {plant_id!r} has no eligible feedstock in the dataset")


class AllZeroWeights(BioflowError):
    pass


class BadBounds(BioflowError):
    pass


class ParseError(BioflowError):
    """LP text format parse failure, pointing at the offending token."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class NonOptimalSolution(BioflowError):
    pass
