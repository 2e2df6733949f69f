from dataclasses import dataclass


@dataclass(frozen=True)
class CheckFailure:
    """
    First failing node found by a derivation checker.

    Attributes:
        path: Child indices from the root to the failing node.
        reason: What is wrong at that node.
        expected: The premise shapes the node's rule expects, when known.
    """

    path: tuple[int, ...]
    reason: str
    expected: str = ""

    def __str__(self) -> str:
        where = "root" if not self.path else "root/" + "/".join(map(str, self.path))
        return f"{where}: {self.reason}" + (f" (expected {self.expected})" if self.expected else "")
