class HypothesisRefusal(Exception):
    """A formula or certificate declined because a required hypothesis fails."""

    def __init__(self, hypothesis: str, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis
