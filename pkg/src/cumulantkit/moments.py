"""Joint-moment tables over words of variable indices, and their JSON files."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator, Mapping

from .exactalg import format_rational, parse_rational

Word = tuple  # tuple of variable indices in 1..r
LabeledWord = tuple  # tuple of (label, var) pairs


class MomentDataError(ValueError):
    """Raised when a moment is requested that the table does not contain."""

    def __init__(self, word, reason: str = "insufficient moment data"):
        self.word = tuple(word)
        super().__init__(f"{reason} for word {word_key(self.word) or '<empty>'}")


class MomentFileError(ValueError):
    pass


def word_key(w) -> str:
    return ",".join(str(i) for i in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"malformed word {text!r}") from None


def words(r: int, max_len: int, min_len: int = 1) -> Iterator[Word]:
    """Words over 1..r by increasing length, lexicographic within a length."""
    for n in range(min_len, max_len + 1):
        yield from itertools.product(range(1, r + 1), repeat=n)


def subword(w, positions) -> Word:
    """Letters of ``w`` at the 1-based ``positions`` (in increasing order)."""
    return tuple(w[i - 1] for i in positions)


@dataclass(frozen=True)
class MomentFunctional:
    """The state restricted to joint moments of r variables up to length max_len.

    Table values are usually Fractions; any exact ring element (e.g. a
    :class:`~cumulantkit.exactalg.Poly`) is accepted for symbolic use.
    """

    r: int
    max_len: int
    table: Mapping[Word, object] = field(repr=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"num_vars must be >= 1, got {self.r}")
        if self.max_len < 0:
            raise ValueError(f"max_len must be >= 0, got {self.max_len}")
        object.__setattr__(self, "table", dict(self.table))

    def moment(self, w) -> object:
        w = tuple(w)
        if not w:
            return Fraction(1)
        if len(w) > self.max_len or any(not 1 <= i <= self.r for i in w):
            raise MomentDataError(w)
        try:
            return self.table[w]
        except KeyError:
            raise MomentDataError(w) from None

    __call__ = moment

    def check_complete(self) -> None:
        for w in words(self.r, self.max_len):
            if w not in self.table:
                raise MomentFileError(f"missing moment for word {word_key(w)!r}")

    @classmethod
    def from_function(cls, r: int, max_len: int, fn: Callable[[Word], object]) -> "MomentFunctional":
        return cls(r, max_len, {w: fn(w) for w in words(r, max_len)})

    def truncate(self, max_len: int) -> "MomentFunctional":
        if max_len > self.max_len:
            raise MomentDataError((1,) * max_len)
        return MomentFunctional(self.r, max_len, {w: v for w, v in self.table.items() if len(w) <= max_len})

    def __eq__(self, other):
        if not isinstance(other, MomentFunctional):
            return NotImplemented
        return (self.r, self.max_len, self.table) == (other.r, other.max_len, other.table)

    def __hash__(self):
        return hash((self.r, self.max_len, tuple(sorted(self.table.items()))))

    def to_json(self) -> dict:
        return {
            "num_vars": self.r,
            "max_len": self.max_len,
            "moments": {word_key(w): format_rational(self.table[w]) for w in words(self.r, self.max_len)},
        }


def moment(phi: MomentFunctional, w) -> object:
    return phi.moment(w)


def _read_table(obj: dict, r_key: str, len_key: str, table_key: str):
    if not isinstance(obj, dict):
        raise MomentFileError("top level must be a JSON object")
    for k in (r_key, len_key, table_key):
        if k not in obj:
            raise MomentFileError(f"missing field {k!r}")
    r, max_len, raw = obj[r_key], obj[len_key], obj[table_key]
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise MomentFileError(f"{r_key} must be an integer >= 1, got {r!r}")
    if not isinstance(max_len, int) or isinstance(max_len, bool) or max_len < 1:
        raise MomentFileError(f"{len_key} must be an integer >= 1, got {max_len!r}")
    if not isinstance(raw, dict):
        raise MomentFileError(f"{table_key} must be an object")
    table = {}
    for key, val in raw.items():
        try:
            w = parse_word(key)
        except ValueError as exc:
            raise MomentFileError(str(exc)) from None
        if not w:
            continue
        if len(w) > max_len or any(not 1 <= i <= r for i in w):
            raise MomentFileError(f"word {key!r} outside num_vars={r}, {len_key}={max_len}")
        try:
            table[w] = parse_rational(val)
        except ValueError as exc:
            raise MomentFileError(f"word {key!r}: {exc}") from None
    for w in words(r, max_len):
        if w not in table:
            raise MomentFileError(f"missing required word {word_key(w)!r}")
    return r, max_len, table


def moments_from_json(obj: dict) -> MomentFunctional:
    r, max_len, table = _read_table(obj, "num_vars", "max_len", "moments")
    return MomentFunctional(r, max_len, table)


def load_moments(path) -> MomentFunctional:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MomentFileError(f"{path}: invalid JSON: {exc}") from None
    return moments_from_json(obj)


def save_moments(phi: MomentFunctional, path) -> None:
    Path(path).write_text(json.dumps(phi.to_json(), indent=1) + "\n", encoding="utf-8")


def random_functional(r: int, max_len: int, seed: int) -> MomentFunctional:
    """Seeded table with numerators in [-9, 9] and denominators in [1, 9]."""
    if r < 1 or max_len < 1:
        raise ValueError("r and max_len must be >= 1")
    rng = random.Random(seed)
    return MomentFunctional(
        r, max_len, {w: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for w in words(r, max_len)}
    )
