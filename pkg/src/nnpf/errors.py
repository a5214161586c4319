"""Typed exceptions for container parsing and engine construction.

Every failure mode of the binary reader raises a subclass of
:class:`NnpfError`, so callers (and fuzzers) can catch one type and
know that arbitrary input bytes never escalate into anything else.
"""


class NnpfError(Exception):
    """Base class for every error raised by this package."""


class NotNnpfError(NnpfError):
    """The byte stream does not start with the ``NNPF`` magic."""


class UnsupportedVersionError(NnpfError):
    def __init__(self, version: int):
        super().__init__(f"unsupported container version {version}, this reader supports version 1")
        self.version = version


class ManifestError(NnpfError):
    """The manifest is not valid JSON or declares values the reader does not know."""


class TruncatedPayloadError(NnpfError):
    """The byte count of a container segment disagrees with its declaration."""

    def __init__(self, expected: int, actual: int, segment: str = "tensor payload"):
        kind = "truncated" if actual < expected else "has trailing bytes"
        super().__init__(f"{segment} {kind}: expected {expected} bytes, got {actual}")
        self.expected = expected
        self.actual = actual
        self.segment = segment


class ModelValidationError(NnpfError):
    """A model artifact violates one of its structural invariants."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics) or "invalid model artifact")


class ShapeMismatchError(ModelValidationError):
    """Tensor shapes break the layer chain declared by the model spec."""


class ModelKindError(NnpfError):
    """An engine was handed an artifact of the wrong model kind."""
