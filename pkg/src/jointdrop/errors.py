"""Exception types shared across the toolkit.

Everything user-facing derives from ValidationError so the CLI can map the
whole family to one exit code; plain OSError is left alone and maps to the
I/O exit code.
"""


class JointDropError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(JointDropError):
    """Bad input data or configuration (CLI exit code 2)."""


class LineCountMismatch(ValidationError):
    def __init__(self, src_count: int, tgt_count: int):
        self.src_count = src_count
        self.tgt_count = tgt_count
        super().__init__(
            f"line counts differ: {src_count} source lines vs {tgt_count} target lines"
        )


class EmptyLine(ValidationError):
    def __init__(self, side: str, line_no: int):
        self.side = side
        self.line_no = line_no
        super().__init__(f"empty {side} sentence at line {line_no}")


class MalformedLink(ValidationError):
    def __init__(self, item: str, line_no: int):
        self.item = item
        self.line_no = line_no
        super().__init__(f"malformed alignment link {item!r} at line {line_no}")


class LinkOutOfBounds(ValidationError):
    def __init__(self, pair_id: int, link: tuple[int, int]):
        self.pair_id = pair_id
        self.link = link
        super().__init__(f"alignment link {link} out of bounds for pair {pair_id}")


class BadToken(ValidationError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"invalid token {token!r}: tokens must be non-empty and whitespace-free")


class MissingAnnotation(ValidationError):
    def __init__(self, pair_id: int):
        self.pair_id = pair_id
        super().__init__(f"span filter is active but pair {pair_id} has no annotation")


class OverlappingRecord(ValidationError):
    """Substitution record contains overlapping spans."""


class MalformedVariable(ValidationError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"variable token {token!r} has no matching record entry")


class MissingVocabulary(ValidationError):
    def __init__(self, side: str):
        self.side = side
        super().__init__(f"switch_out needs a non-empty {side} vocabulary")


class SpanOutOfBounds(ValidationError):
    def __init__(self, owner_id: int, start: int, end: int, length: int):
        self.owner_id = owner_id
        super().__init__(
            f"id {owner_id}: span [{start}, {end}) out of bounds for sentence of length {length}"
        )


class LengthMismatch(ValidationError):
    def __init__(self, n_hyp: int, n_ref: int):
        self.n_hyp = n_hyp
        self.n_ref = n_ref
        super().__init__(f"hypothesis/reference counts differ: {n_hyp} vs {n_ref}")


class EmptyCorpus(ValidationError):
    """Metric asked to score an empty corpus."""


class EmptyInput(ValidationError):
    """Aggregate asked for on an empty list."""


class ConfigError(ValidationError):
    """Inconsistent or incomplete run configuration."""
