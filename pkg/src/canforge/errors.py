"""Exception types shared across the package."""


class CanForgeError(Exception):
    """Base class for every canforge-specific error."""


class IdOutOfRangeError(CanForgeError, ValueError):
    """Arbitration ID does not fit in 29 bits."""


class DataTooLongError(CanForgeError, ValueError):
    """Frame data exceeds the 8-byte CAN 2.0B limit."""


class FieldOverflowError(CanForgeError, ValueError):
    """An ID or tail field value does not fit its bit width."""


class InvalidSourceError(CanForgeError, ValueError):
    """Message frames must use source node IDs 1..127; node 0 is anonymous."""


class WrongFrameKindError(CanForgeError, ValueError):
    """Operation undefined for this frame kind (e.g. anonymous multi-frame)."""


class PayloadTooLongError(CanForgeError, ValueError):
    """Transfer payload exceeds the configured maximum."""


class EmptyTapeError(CanForgeError, ValueError):
    """Replay requires a tape with at least one recorded frame."""


class MissingTapeError(CanForgeError, ValueError):
    """Scenario contains a replay attack but no tape was supplied."""


class UnknownScenarioError(CanForgeError, ValueError):
    """Built-in scenario numbers run from 1 to 10."""


class EmptyDatasetError(CanForgeError, ValueError):
    """Summary statistics need at least one record."""


class FormatError(CanForgeError, ValueError):
    """Labeled-dataset parse failure; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


class MalformedLineError(FormatError):
    """Wrong field count or a field that fails basic parsing."""


class BadLabelError(FormatError):
    """Label column is not exactly 'Normal' or 'Attack'."""


class BadHexError(FormatError):
    """CAN ID or data column is not valid hexadecimal."""


class DlcMismatchError(FormatError):
    """Serialized DLC disagrees with the data column length."""
