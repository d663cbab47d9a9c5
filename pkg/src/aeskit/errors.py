"""Exception hierarchy shared across the toolkit.

Every error raised by library code derives from AeskitError so callers
(CLI, HTTP service) can separate data problems from genuine bugs.
"""


class AeskitError(Exception):
    """Base class for all toolkit errors."""


# -- corpus ---------------------------------------------------------------

class MalformedRecord(AeskitError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"malformed record at line {line_no}: {reason}")


class DuplicateId(AeskitError):
    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"duplicate id: {doc_id!r}")


class UnknownDialect(AeskitError):
    def __init__(self, dialect: str):
        self.dialect = dialect
        super().__init__(f"unknown dialect: {dialect!r}")


class ClassTooSmall(AeskitError):
    def __init__(self, label: str, size: int = 0):
        self.label = label
        self.size = size
        super().__init__(
            f"class {label!r} has {size} document(s); cannot supply both split sides"
        )


# -- feature extraction ---------------------------------------------------

class ChannelUnavailable(AeskitError):
    def __init__(self, channel: str, dialect: str):
        self.channel = channel
        self.dialect = dialect
        super().__init__(f"channel {channel!r} not available for dialect {dialect!r}")


# -- embeddings -----------------------------------------------------------

class EmptyCorpus(AeskitError):
    pass


class CorpusTooSmall(AeskitError):
    pass


class UntrainedModel(AeskitError):
    pass


# -- classification -------------------------------------------------------

class DimensionMismatch(AeskitError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected dimension {expected}, got {got}")


class SingleClass(AeskitError):
    pass


class LengthMismatch(AeskitError):
    pass


# -- search ---------------------------------------------------------------

class ZeroVector(AeskitError):
    def __init__(self, doc_id: str = ""):
        self.doc_id = doc_id
        super().__init__(f"zero vector{f' for id {doc_id!r}' if doc_id else ''}")


class UnknownId(AeskitError):
    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"unknown id: {doc_id!r}")


# -- hardware recommendation ----------------------------------------------

class TooManyVariables(AeskitError):
    def __init__(self, n_vars: int, max_vars: int):
        self.n_vars = n_vars
        self.max_vars = max_vars
        super().__init__(
            f"exact structure search over {n_vars} variables is infeasible "
            f"(limit {max_vars}); use the autoencoder for wide taxonomies"
        )


class EmptyData(AeskitError):
    pass


class ZeroProbabilityEvidence(AeskitError):
    pass


class TooFewSamples(AeskitError):
    pass


class BadDims(AeskitError):
    pass


class LevelMismatch(AeskitError):
    def __init__(self, expected: str, got: str):
        self.expected = expected
        self.got = got
        super().__init__(f"taxonomy level mismatch: model is {expected}, input is {got}")


class DegenerateConfig(AeskitError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(
            f"config #{index} has fewer than 2 present components; "
            "leave-one-out needs nonempty evidence"
        )


# -- model files ----------------------------------------------------------

class ModelFormatError(AeskitError):
    pass


# -- assistant service ----------------------------------------------------

class ModelsMissing(AeskitError):
    pass


class UnknownQuestion(AeskitError):
    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"unknown question: {question_id!r}")


class AlreadyAnswered(AeskitError):
    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"question already answered: {question_id!r}")


class UnknownRecommendation(AeskitError):
    def __init__(self, rec_id: str):
        self.rec_id = rec_id
        super().__init__(f"unknown recommendation: {rec_id!r}")


class AlreadyDecided(AeskitError):
    def __init__(self, rec_id: str):
        self.rec_id = rec_id
        super().__init__(f"recommendation already decided: {rec_id!r}")


class UnknownProject(AeskitError):
    def __init__(self, project_id: str):
        self.project_id = project_id
        super().__init__(f"unknown project: {project_id!r}")
