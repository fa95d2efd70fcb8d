class BudgetExceeded(RuntimeError):
    """A configured size cap would be exceeded.

    ``cap`` names the configuration value that was hit so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, cap: str, limit: int, needed: int | None = None):
        self.cap = cap
        self.limit = limit
        self.needed = needed
        msg = f"{cap} exceeded: limit {limit}"
        if needed is not None:
            msg += f", needed {needed}"
        super().__init__(msg)
