"""Exception types shared across the package."""


class OutOfRangeError(ValueError):
    """A requested index or bound exceeds what a table or orbit provides."""


class NotInNormalizerError(ValueError):
    """Matrix does not normalize the unipotent subgroup; chi is undefined."""


class CorruptCacheError(RuntimeError):
    """Sieve cache file unreadable: bad magic, wrong version, or truncation."""


class ConfigError(ValueError):
    """Experiment configuration failed validation; message names the key."""
