"""Free-monoid words over inverse-closed alphabets.

Words are plain tuples of Letter values.  A Letter knows the name of its
formal inverse, so inversion needs no alphabet context; ordering (shortlex)
always does, and lives on Alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union


class GeolangError(Exception):
    """Base class for library errors."""


class UnknownLetter(GeolangError):
    def __init__(self, name: str):
        super().__init__(f"unknown letter {name!r}")
        self.name = name


class NotDownwardClosed(GeolangError):
    """A member has a single-deletion subword outside the language."""

    def __init__(self, word: "Word", missing: "Word"):
        super().__init__(
            f"language member {format_word(word)!r} has deleted subword "
            f"{format_word(missing)!r} outside the language"
        )
        self.word = word
        self.missing = missing


class NotFactorClosed(GeolangError):
    """A member has a contiguous subword outside the language."""

    def __init__(self, word: "Word", missing: "Word"):
        super().__init__(
            f"language member {format_word(word)!r} has contiguous subword "
            f"{format_word(missing)!r} outside the language"
        )
        self.word = word
        self.missing = missing


@dataclass(frozen=True, slots=True)
class Letter:
    """Alphabet symbol paired with the name of its formal inverse.

    A letter with ``inverse_name == name`` is an involution letter.
    """

    name: str
    inverse_name: str

    @property
    def is_involution(self) -> bool:
        return self.name == self.inverse_name

    @property
    def inverse(self) -> "Letter":
        return Letter(self.inverse_name, self.name)

    def __repr__(self):
        return f"Letter({self.name!r})"


Word = tuple  # tuple[Letter, ...]

EMPTY_WORD: Word = ()


class Alphabet:
    """Ordered, inverse-closed letter set; declaration order defines shortlex."""

    def __init__(self, letters: Sequence[Letter]):
        letters = tuple(letters)
        by_name = {}
        for letter in letters:
            if letter.name in by_name:
                raise GeolangError(f"duplicate letter name {letter.name!r}")
            by_name[letter.name] = letter
        for letter in letters:
            partner = by_name.get(letter.inverse_name)
            if partner is None:
                raise GeolangError(
                    f"letter {letter.name!r} has no inverse {letter.inverse_name!r}"
                )
            if partner.inverse_name != letter.name:
                raise GeolangError(
                    f"inverse pairing of {letter.name!r} is not an involution"
                )
        self._letters = letters
        self._by_name = by_name
        self._index = {letter: i for i, letter in enumerate(letters)}

    @property
    def letters(self) -> tuple:
        return self._letters

    def __len__(self):
        return len(self._letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self._letters)

    def __contains__(self, letter) -> bool:
        if isinstance(letter, Letter):
            return self._index.get(letter) is not None
        return letter in self._by_name

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self._letters == other._letters

    def __hash__(self):
        return hash(self._letters)

    def __repr__(self):
        return f"Alphabet([{', '.join(l.name for l in self._letters)}])"

    def letter(self, name: str) -> Letter:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownLetter(name) from None

    def index(self, letter: Letter) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise UnknownLetter(letter.name) from None

    def inverse(self, letter: Letter) -> Letter:
        return self.letter(letter.inverse_name)

    def parse(self, text: str) -> Word:
        return parse_word(text, self)

    def shortlex_key(self, word: Word):
        return (len(word), tuple(self._index[letter] for letter in word))

    def sort_words(self, words: Iterable[Word]) -> list:
        return sorted(words, key=self.shortlex_key)

    def all_words(self, length: int) -> Iterator[Word]:
        """All words of exactly the given length, in lex order."""
        if length == 0:
            yield EMPTY_WORD
            return
        for prefix in self.all_words(length - 1):
            for letter in self._letters:
                yield prefix + (letter,)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a whitespace-separated word; ``x^-1`` names the inverse of x."""
    letters = []
    for token in text.split():
        if token in alphabet:
            letters.append(alphabet.letter(token))
        elif token.endswith("^-1") and token[:-3] in alphabet:
            letters.append(alphabet.inverse(alphabet.letter(token[:-3])))
        else:
            raise UnknownLetter(token)
    return tuple(letters)


def format_word(word: Word) -> str:
    """Render a word; the empty word prints as ``1``."""
    if not word:
        return "1"
    return " ".join(letter.name for letter in word)


def invert_word(word: Word) -> Word:
    """Formal inverse: reverse the word and invert each letter."""
    return tuple(letter.inverse for letter in reversed(word))


def is_subsequence(u: Word, w: Word) -> bool:
    """Greedy left-to-right test: u arises from w by deleting letters."""
    if len(u) > len(w):
        return False
    pos = 0
    for letter in w:
        if pos < len(u) and letter == u[pos]:
            pos += 1
    return pos == len(u)


def deletion_neighbors(word: Word) -> set:
    """All words obtained by deleting exactly one letter, deduplicated."""
    return {word[:i] + word[i + 1 :] for i in range(len(word))}


class Language:
    """Length-stratified word set with exact membership up to ``maxlen``.

    ``complete`` asserts that no member anywhere has length > maxlen; it is
    external knowledge, not derivable from the strata, and equality between
    languages deliberately ignores it.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        strata: Mapping[int, Iterable[Word]],
        maxlen: int,
        complete: bool,
    ):
        if maxlen < 0:
            raise GeolangError("maxlen must be nonnegative")
        for length, words in strata.items():
            if not 0 <= length <= maxlen:
                raise GeolangError(f"stratum {length} outside 0..{maxlen}")
            for word in words:
                if len(word) != length:
                    raise GeolangError(
                        f"word {format_word(word)!r} stored in stratum {length}"
                    )
        self.alphabet = alphabet
        self.maxlen = maxlen
        self.complete = complete
        self.strata = {
            length: frozenset(strata.get(length, ())) for length in range(maxlen + 1)
        }

    @classmethod
    def from_words(
        cls,
        alphabet: Alphabet,
        words: Iterable[Word],
        maxlen: Optional[int] = None,
        complete: bool = True,
    ) -> "Language":
        words = list(words)
        if maxlen is None:
            maxlen = max((len(w) for w in words), default=0)
        strata: dict = {}
        for word in words:
            strata.setdefault(len(word), set()).add(word)
        return cls(alphabet, strata, maxlen, complete)

    def __contains__(self, word: Word) -> bool:
        return len(word) <= self.maxlen and word in self.strata[len(word)]

    def __len__(self):
        return sum(len(s) for s in self.strata.values())

    def __eq__(self, other):
        return (
            isinstance(other, Language)
            and self.maxlen == other.maxlen
            and self.strata == other.strata
        )

    def __repr__(self):
        sizes = [len(self.strata[l]) for l in range(self.maxlen + 1)]
        return f"Language(strata sizes {sizes}, complete={self.complete})"

    def stratum_sizes(self) -> tuple:
        return tuple(len(self.strata[l]) for l in range(self.maxlen + 1))

    def words(self) -> Iterator[Word]:
        """All members in shortlex order."""
        for length in range(self.maxlen + 1):
            yield from self.alphabet.sort_words(self.strata[length])

    def word_set(self) -> set:
        out = set()
        for stratum in self.strata.values():
            out |= stratum
        return out


@dataclass(frozen=True)
class ForbiddenSet:
    """A set of forbidden words; an antichain when produced minimally."""

    alphabet: Alphabet
    words: frozenset

    def __iter__(self):
        return iter(self.sorted_words())

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.words

    def sorted_words(self) -> list:
        return self.alphabet.sort_words(self.words)

    def is_antichain(self) -> bool:
        ws = list(self.words)
        for u in ws:
            for w in ws:
                if u != w and is_subsequence(u, w):
                    return False
        return True


def first_deletion_violation(language: Language):
    """Shortlex-first (member, deleted subword outside language) pair, if any.

    Scans members in shortlex order and each member's deletion neighbors in
    shortlex order, so the returned certificate is reproducible.
    """
    for word in language.words():
        if not word:
            continue
        for neighbor in language.alphabet.sort_words(deletion_neighbors(word)):
            if neighbor not in language:
                return word, neighbor
    return None


def minimal_forbidden_subsequences(language: Language) -> ForbiddenSet:
    """Deletion-minimal non-members, the canonical antichain for the language.

    Every minimal forbidden word is a one-letter right extension of a member
    (deleting its last letter lands in the language), so candidates are
    exactly members extended by one letter; lengths stay <= maxlen + 1.
    """
    if not language.complete:
        raise GeolangError("minimal forbidden subsequences need a complete language")
    violation = first_deletion_violation(language)
    if violation is not None:
        raise NotDownwardClosed(*violation)
    members = language.word_set()
    candidates = set()
    if EMPTY_WORD not in members:
        candidates.add(EMPTY_WORD)
    for word in members:
        for letter in language.alphabet:
            extended = word + (letter,)
            if extended not in members:
                candidates.add(extended)
    forbidden = {
        cand
        for cand in candidates
        if all(n in members for n in deletion_neighbors(cand))
    }
    return ForbiddenSet(language.alphabet, frozenset(forbidden))


def avoid_language(
    forbidden: Union[ForbiddenSet, Iterable[Word]],
    alphabet: Alphabet,
    maxlen: int,
) -> Language:
    """All words of length <= maxlen containing no forbidden subsequence.

    The language is prefix-closed, so strata are grown by extending survivors;
    each survivor carries greedy match progress into every forbidden word,
    making one extension O(|forbidden|).  ``complete`` is set exactly when the
    top stratum is empty (then no longer word can avoid the set either).
    """
    if isinstance(forbidden, ForbiddenSet):
        fwords = forbidden.sorted_words()
    else:
        fwords = alphabet.sort_words(set(forbidden))
    strata: dict = {}
    if EMPTY_WORD in fwords:
        return Language(alphabet, strata, maxlen, complete=True)
    strata[0] = {EMPTY_WORD}
    flen = tuple(len(f) for f in fwords)
    survivors = {EMPTY_WORD: (0,) * len(fwords)}
    for length in range(1, maxlen + 1):
        extended: dict = {}
        for word, progress in survivors.items():
            for letter in alphabet:
                next_progress = list(progress)
                dead = False
                for i, p in enumerate(progress):
                    if fwords[i][p] == letter:
                        p += 1
                        if p == flen[i]:
                            dead = True
                            break
                        next_progress[i] = p
                if not dead:
                    extended[word + (letter,)] = tuple(next_progress)
        if not extended:
            break
        strata[length] = set(extended)
        survivors = extended
    complete = len(strata.get(maxlen, ())) == 0
    return Language(alphabet, strata, maxlen, complete=complete)


def minimal_forbidden_factors(language: Language) -> set:
    """Factor-minimal non-members: contiguous analogue of the subsequence case.

    For a factor-closed language a candidate w is minimal as soon as w[1:] and
    w[:-1] are members; every shorter contiguous subword sits inside one of
    those two.
    """
    if not language.complete:
        raise GeolangError("minimal forbidden factors need a complete language")
    for word in language.words():
        if not word:
            continue
        for piece in (word[1:], word[:-1]):
            if piece not in language:
                raise NotFactorClosed(word, piece)
    members = language.word_set()
    forbidden = set()
    if EMPTY_WORD not in members:
        forbidden.add(EMPTY_WORD)
        return forbidden
    for word in members:
        for letter in language.alphabet:
            extended = word + (letter,)
            if extended not in members and extended[1:] in members:
                forbidden.add(extended)
    return forbidden
