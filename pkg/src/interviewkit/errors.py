"""Exception hierarchy shared across the package."""


class InterviewKitError(Exception):
    """Base class for all data and format errors raised by this package."""


class ManifestError(InterviewKitError):
    """Manifest file failed to parse or a record violates an invariant."""


class AudioFormatError(InterviewKitError):
    """WAV file is missing, malformed, or uses an unsupported encoding."""


class LandmarkTrackError(InterviewKitError):
    """Landmark track file failed to parse or violates an invariant."""


class FeatureError(InterviewKitError):
    """Feature matrix construction or fusion violated a precondition."""


class CacheError(InterviewKitError):
    """Cached features are missing or inconsistent with the current config."""


class TrainingError(InterviewKitError):
    """Model training diverged or received invalid inputs."""
