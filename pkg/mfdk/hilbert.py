from dataclasses import dataclass


@dataclass(frozen=True)
class HilbertFunction:
    """
    Dimensions per (weight, parity) for the weights `low..trusted_upto`.
    Entries outside that window are not reported. `filtered` marks values
    read off the associated graded of a weight filtration.
    """

    even: tuple
    odd: tuple
    low: int = 0
    trusted_upto: int = -1
    bound: int = None
    filtered: bool = False

    def __post_init__(self):
        if len(self.even) != len(self.odd):
            raise ValueError("Even and odd dimension lists differ in length")
        if len(self.even) != max(0, self.trusted_upto - self.low + 1):
            raise ValueError("Dimension lists do not match the trusted window")

    @property
    def window_empty(self):
        return self.trusted_upto < self.low

    def weights(self):
        return range(self.low, self.trusted_upto + 1)

    def dim(self, weight, parity):
        """Dimension in one slot; weights below `low` are zero, weights above the window are None."""
        if weight > self.trusted_upto:
            return None
        if weight < self.low:
            return 0
        values = self.even if parity == 0 else self.odd
        return values[weight - self.low]

    def total(self, parity):
        return sum(self.even if parity == 0 else self.odd)

    def is_zero(self):
        return not any(self.even) and not any(self.odd)

    def truncated(self, upto):
        upto = min(upto, self.trusted_upto)
        size = max(0, upto - self.low + 1)
        return HilbertFunction(
            even=self.even[:size],
            odd=self.odd[:size],
            low=self.low,
            trusted_upto=upto,
            bound=self.bound,
            filtered=self.filtered,
        )

    def mismatches(self, other):
        """Slots inside both trusted windows where the dimensions differ."""
        found = []
        low = min(self.low, other.low)
        high = min(self.trusted_upto, other.trusted_upto)
        for weight in range(low, high + 1):
            for parity in (0, 1):
                mine, theirs = self.dim(weight, parity), other.dim(weight, parity)
                if mine != theirs:
                    found.append((weight, parity, mine, theirs))
        return found

    def agrees_with(self, other):
        return not self.mismatches(other)

    def to_json(self):
        return {
            "even": list(self.even),
            "odd": list(self.odd),
            "from": self.low,
            "trusted_upto": self.trusted_upto,
            "filtered": self.filtered,
        }

    def table(self, title=None):
        lines = [title] if title else []
        if self.window_empty:
            lines.append("  (empty trusted window)")
            return "\n".join(lines)
        header = "  weight " + " ".join(f"{w:>4}" for w in self.weights())
        lines.append(header)
        lines.append("  even   " + " ".join(f"{n:>4}" for n in self.even))
        lines.append("  odd    " + " ".join(f"{n:>4}" for n in self.odd))
        if self.filtered:
            lines.append("  (associated graded of the weight filtration)")
        return "\n".join(lines)


def hilbert_from_dims(dims, low, trusted_upto, bound=None, filtered=False):
    """Builds a HilbertFunction from a mapping (weight, parity) -> dimension."""
    weights = range(low, trusted_upto + 1)
    return HilbertFunction(
        even=tuple(dims.get((w, 0), 0) for w in weights),
        odd=tuple(dims.get((w, 1), 0) for w in weights),
        low=low,
        trusted_upto=trusted_upto,
        bound=bound if bound is not None else trusted_upto,
        filtered=filtered,
    )
