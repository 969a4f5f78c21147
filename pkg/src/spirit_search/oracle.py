"""Plaintext reference answers and the fixed adversarial instance suite."""

from .protocol import EXACT, MatchPredicate

__all__ = ["linear_scan_oracle", "adversarial_instances"]


def linear_scan_oracle(cost, lookup, match: MatchPredicate = EXACT, t: int = None) -> int:
    """Smallest 1-based index whose entry matches the lookup, 0 if none."""
    if t is None:
        t = max(1, max(int(v) for v in cost).bit_length(), int(lookup).bit_length())
    for i, v in enumerate(cost):
        if match.plain(int(v), lookup, t):
            return i + 1
    return 0


def adversarial_instances(r: int = 16):
    """Hand-picked instances that historically break first-match decoders:
    matches at the extremes, duplicates, all/none matching, lookup value 0
    against internally padded tails, and the single-entry column.

    Yields (label, cost, lookup) with all values < r (r >= 4 expected).
    """
    assert r >= 4
    a, b = 1, 2
    return [
        ("match at position 1", [a, b, b, b, b, b, b, b], a),
        ("match at position m", [b, b, b, b, b, b, b, a], a),
        ("duplicate matches", [b, a, b, a, a, b, a, b], a),
        ("all entries match", [a] * 8, a),
        ("no match", [b] * 8, a),
        ("zero lookup, no zeros, padded length", [a, b, a], 0),
        ("zero lookup, zero present, padded length", [a, 0, b, a, 0], 0),
        ("single entry, match", [a], a),
        ("single entry, no match", [b], a),
        ("non-power-of-two, match at end", [b, b, b, b, a], a),
        ("non-power-of-two, match in padding shadow", [b, b, b, b, b, b, a], a),
        ("two values, both present", [3, a, 3, a], 3),
    ]
