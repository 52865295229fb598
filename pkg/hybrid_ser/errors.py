"""Exception hierarchy for hybrid-ser.

Every error derives from :class:`HybridSerError`, itself a ``ValueError``,
so callers that only care about "bad input" can keep catching
``ValueError``.
"""

from __future__ import annotations


class HybridSerError(ValueError):
    """Base class for all domain errors raised by this package."""


# ---------------------------------------------------------------------------
# Audio decoding
# ---------------------------------------------------------------------------

class MalformedHeader(HybridSerError):
    """Input is not a RIFF/WAVE container or its chunks are inconsistent."""


class UnsupportedEncoding(HybridSerError):
    """WAV payload uses a codec or sample width the decoder does not handle."""


class TruncatedData(HybridSerError):
    """Declared chunk length exceeds the bytes actually present."""


# ---------------------------------------------------------------------------
# Signal processing
# ---------------------------------------------------------------------------

class DegenerateWindow(HybridSerError):
    """Window length too short to define the window function."""


class EmptySignal(HybridSerError):
    """An operation that needs at least one sample received none."""


class EmptyBand(HybridSerError):
    """A Mel filter row has no non-zero weight (too many bands for the FFT size)."""


class GeometryMismatch(HybridSerError):
    """Array shapes or sample rates of two operands do not agree."""


class AlreadyLogScaled(HybridSerError):
    """Log compression requested on an already log-scaled Mel spectrogram."""


class TooManyCoefficients(HybridSerError):
    """More cepstral coefficients requested than there are Mel bands."""


class EvenKernel(HybridSerError):
    """Median filter kernel length must be odd."""


class LogScaledInput(HybridSerError):
    """Decomposition requires a linear-energy spectrogram."""


# ---------------------------------------------------------------------------
# Datasets, files, training
# ---------------------------------------------------------------------------

class MissingClass(HybridSerError):
    """A declared emotion class has no examples."""


class CorruptFile(HybridSerError):
    """Binary file has a bad magic, checksum, or truncated body."""


class VersionMismatch(HybridSerError):
    """Binary file was written by an unsupported format version."""


class WrongDimension(HybridSerError):
    """Embedding vectors do not have the required dimension."""


class EmptyPartition(HybridSerError):
    """A train/validation/test split produced an empty partition."""


class NoFilesFound(HybridSerError):
    """A directory or manifest yielded no usable audio files."""


class UnknownLabelCode(HybridSerError):
    """A label string or filename code does not map to an emotion class."""
