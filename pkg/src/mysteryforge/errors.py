"""Exception hierarchy shared across the package.

Every error carries a short machine-readable ``code`` so the HTTP layer and
the CLI can surface failures without string matching. Generation-stage
failures raised inside game assembly additionally carry ``stage``.
"""


class ForgeError(Exception):
    code = "error"

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.message = message
        self.stage = stage


class NotFoundError(ForgeError):
    code = "not-found"


class MalformedSourceError(ForgeError):
    code = "malformed-source"


class NetworkUnreachableError(ForgeError):
    code = "network-unreachable"


class MissingManifestError(ForgeError):
    code = "missing-manifest"


class ChecksumMismatchError(ForgeError):
    code = "checksum-mismatch"


class ParseError(ForgeError):
    code = "parse-error"

    def __init__(self, message: str, file: str, line: int = 1):
        super().__init__(f"{file}:{line}: {message}")
        self.file = file
        self.line = line


class NoGeoError(ForgeError):
    code = "no-geo"


class NoPathError(ForgeError):
    code = "no-path"


class PoolTooSmallError(ForgeError):
    code = "pool-too-small"


class InsufficientFactsError(ForgeError):
    code = "insufficient-facts"


class NoLiableFactError(ForgeError):
    code = "no-liable-fact"


class InvalidSpecError(ForgeError):
    code = "invalid-spec"


class IllegalActionError(ForgeError):
    code = "illegal-action"


class StorageUnavailableError(ForgeError):
    code = "storage-unavailable"


class UnknownSessionError(ForgeError):
    code = "unknown-session"


class UnknownGameError(ForgeError):
    code = "unknown-game"


class UnknownSuspectError(ForgeError):
    code = "unknown-suspect"


class DuplicateRequestError(ForgeError):
    code = "duplicate-request"


class GenerationError(ForgeError):
    """Wraps any stage failure inside assemble_game with the stage name."""

    code = "generation-failure"
