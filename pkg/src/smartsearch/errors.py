"""Exception types shared across the package."""


class SmartSearchError(Exception):
    """Base class for every error raised by this package."""


class MalformedRecord(SmartSearchError):
    """A corpus line failed to parse or validate."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateFileId(SmartSearchError):
    def __init__(self, file_id: str):
        super().__init__(f"duplicate file_id {file_id!r}")
        self.file_id = file_id


class UnknownFileType(SmartSearchError):
    def __init__(self, value: str):
        super().__init__(f"unknown file_type {value!r}")
        self.value = value


class ProviderError(SmartSearchError):
    """An external provider (LLM, embedder, translator, ...) failed."""


class InvalidChunkParams(SmartSearchError):
    pass


class EmptyIndexInput(SmartSearchError):
    pass


class DimensionMismatch(SmartSearchError):
    pass


class NoScoresForBranch(SmartSearchError):
    pass


class MissingIndex(SmartSearchError):
    def __init__(self, file_type: str):
        super().__init__(f"no index built for file_type {file_type!r}")
        self.file_type = file_type


class TopicCountMismatch(SmartSearchError):
    pass


class IndexNotReady(SmartSearchError):
    pass


class UnknownIndexVersion(SmartSearchError):
    pass


class ConfigError(SmartSearchError):
    pass
