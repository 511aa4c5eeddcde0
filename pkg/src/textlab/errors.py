"""Domain error hierarchy.

Every error carries a stable machine code (used verbatim in API responses
and by the CLI) and a default HTTP status for the server layer.
"""

from __future__ import annotations


class TextLabError(Exception):
    """Base class for all domain errors."""

    machine_code = "INTERNAL_ERROR"
    http_status = 500

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


# -- corpus ingestion ------------------------------------------------------

class MissingTextColumn(TextLabError):
    machine_code = "MISSING_TEXT_COLUMN"
    http_status = 422


class MissingCategory(TextLabError):
    machine_code = "MISSING_CATEGORY"
    http_status = 422


class EmptyCorpus(TextLabError):
    machine_code = "EMPTY_CORPUS"
    http_status = 422


class MalformedCsv(TextLabError):
    machine_code = "MALFORMED_CSV"
    http_status = 400


class MalformedJson(TextLabError):
    machine_code = "MALFORMED_JSON"
    http_status = 400


class DocumentTooLong(TextLabError):
    machine_code = "DOCUMENT_TOO_LONG"
    http_status = 422


class UploadTooLarge(TextLabError):
    machine_code = "UPLOAD_TOO_LARGE"
    http_status = 413


# -- splits ----------------------------------------------------------------

class CategoryTooSmall(TextLabError):
    machine_code = "CATEGORY_TOO_SMALL"
    http_status = 422


class InvalidFraction(TextLabError):
    machine_code = "INVALID_FRACTION"
    http_status = 422


# -- classifier engine -----------------------------------------------------

class InvalidPattern(TextLabError):
    machine_code = "INVALID_PATTERN"
    http_status = 422


class EmptyTrainingSet(TextLabError):
    machine_code = "EMPTY_TRAINING_SET"
    http_status = 422


class NoFeaturesMatched(TextLabError):
    machine_code = "NO_FEATURES_MATCHED"
    http_status = 422


class UnknownCategory(TextLabError):
    machine_code = "UNKNOWN_CATEGORY"
    http_status = 422


class DivergenceDetected(TextLabError):
    machine_code = "DIVERGENCE_DETECTED"
    http_status = 500


class ModelFeatureMismatch(TextLabError):
    machine_code = "MODEL_FEATURE_MISMATCH"
    http_status = 409


# -- classroom -------------------------------------------------------------

class Forbidden(TextLabError):
    machine_code = "FORBIDDEN"
    http_status = 403


class DuplicateName(TextLabError):
    machine_code = "DUPLICATE_NAME"
    http_status = 409


class UnknownToken(TextLabError):
    machine_code = "UNKNOWN_TOKEN"
    http_status = 404


class ExpiredToken(TextLabError):
    machine_code = "EXPIRED_TOKEN"
    http_status = 410


class UsernameTaken(TextLabError):
    machine_code = "USERNAME_TAKEN"
    http_status = 409


class UnknownCorpus(TextLabError):
    machine_code = "UNKNOWN_CORPUS"
    http_status = 404


class UnknownGroup(TextLabError):
    machine_code = "UNKNOWN_GROUP"
    http_status = 404


class UnknownProject(TextLabError):
    machine_code = "UNKNOWN_PROJECT"
    http_status = 404


class UnknownAnalysis(TextLabError):
    machine_code = "UNKNOWN_ANALYSIS"
    http_status = 404


class UnknownRun(TextLabError):
    machine_code = "UNKNOWN_RUN"
    http_status = 404


class TooFewCategories(TextLabError):
    machine_code = "TOO_FEW_CATEGORIES"
    http_status = 422


class NNotSatisfiable(TextLabError):
    machine_code = "N_NOT_SATISFIABLE"
    http_status = 422


class NothingLeft(TextLabError):
    machine_code = "NOTHING_LEFT"
    http_status = 404


class AlreadyLabeled(TextLabError):
    machine_code = "ALREADY_LABELED"
    http_status = 409


class UnknownDocument(TextLabError):
    machine_code = "UNKNOWN_DOCUMENT"
    http_status = 404


class NoLabelsYet(TextLabError):
    machine_code = "NO_LABELS_YET"
    http_status = 404


class MissingReason(TextLabError):
    machine_code = "MISSING_REASON"
    http_status = 422


class NoTerms(TextLabError):
    machine_code = "NO_TERMS"
    http_status = 422


# -- server / auth / persistence -------------------------------------------

class BadCredentials(TextLabError):
    machine_code = "BAD_CREDENTIALS"
    http_status = 401


class Unauthorized(TextLabError):
    machine_code = "UNAUTHORIZED"
    http_status = 401


class RateLimited(TextLabError):
    machine_code = "RATE_LIMITED"
    http_status = 429


class UnknownUser(TextLabError):
    machine_code = "UNKNOWN_USER"
    http_status = 404


class StorageFull(TextLabError):
    machine_code = "STORAGE_FULL"
    http_status = 503


class CorruptStore(TextLabError):
    machine_code = "CORRUPT_STORE"
    http_status = 500


class StoreExists(TextLabError):
    machine_code = "STORE_EXISTS"
    http_status = 409


class StoreLocked(TextLabError):
    machine_code = "STORE_LOCKED"
    http_status = 409


class PortInUse(TextLabError):
    machine_code = "PORT_IN_USE"
    http_status = 500
