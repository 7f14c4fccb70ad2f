"""Exception hierarchy shared across the pipeline.

ValidationError covers bad inputs and bad configuration (CLI exit code 2);
ComputationError covers degenerate data discovered mid-computation
(CLI exit code 3).
"""


class PipelineError(Exception):
    pass


class ValidationError(PipelineError):
    pass


class ComputationError(PipelineError):
    pass


class CorpusValidationError(ValidationError):
    """Input CSVs failed validation; carries one (row, message) per problem."""

    def __init__(self, path, problems):
        self.path = str(path)
        self.problems = list(problems)
        super().__init__(
            f"{self.path}: {len(self.problems)} validation error(s); "
            "see stderr report"
        )
