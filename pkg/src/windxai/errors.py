"""Exception hierarchy shared across the package."""


class WindXaiError(Exception):
    """Base class for all package errors."""


class SchemaError(WindXaiError):
    """A CSV schema or column mapping is missing or inconsistent."""


class DataError(WindXaiError):
    """Input data violates a precondition (empty file, constant feature, ...)."""


class ConfigurationError(WindXaiError):
    """A configuration value is invalid or internally inconsistent."""


class DomainError(WindXaiError):
    """A physical quantity is outside its valid domain."""


class TrainingError(WindXaiError):
    """Model training failed (divergence, missing validation data, ...)."""


class CapabilityError(WindXaiError):
    """The request exceeds a hard capability limit of the implementation."""
