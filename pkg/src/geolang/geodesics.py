"""Symmetric generating sets, word-metric balls, and geodesic enumeration.

Distances are computed over canonical element states, never memoized per
word, so correctness for infinite engines rests only on key canonicity.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence, Tuple, Union

from .groups import GroupEngine
from .words import (
    Alphabet,
    GeolangError,
    Language,
    Letter,
    Word,
    format_word,
    invert_word,
    parse_word,
)


class IdentityLetter(GeolangError):
    def __init__(self, name):
        super().__init__(f"letter {name!r} represents the identity element")
        self.name = name


class InverseMismatch(GeolangError):
    def __init__(self, name):
        super().__init__(f"letter {name!r} is not inverse-consistent")
        self.name = name


class DuplicateElement(GeolangError):
    def __init__(self, name, other):
        super().__init__(
            f"letters {name!r} and {other!r} represent the same element"
        )
        self.name = name
        self.other = other


class NotGenerating(GeolangError):
    def __init__(self):
        super().__init__("the letters do not generate the whole group")


class ResourceCap(GeolangError):
    def __init__(self, cap):
        super().__init__(f"element cap {cap} exceeded")
        self.cap = cap


DEFAULT_ELEMENT_CAP = 10**6


class GenSet:
    """Inverse-closed generating set over an engine.

    ``alphabet`` holds the declared letters (auto-added inverses immediately
    after their partners); ``images`` maps each letter to a word over the
    engine's builtin letters.
    """

    def __init__(self, engine: GroupEngine, alphabet: Alphabet, images: dict):
        self.engine = engine
        self.alphabet = alphabet
        self.images = images
        index = engine.builtin_alphabet.index
        self._image_indices = tuple(
            tuple(index(letter) for letter in images[letter_])
            for letter_ in alphabet
        )
        self._elements = tuple(
            engine.evaluate_state(images[letter]) for letter in alphabet
        )

    def __repr__(self):
        return f"GenSet([{', '.join(l.name for l in self.alphabet)}])"

    def letter(self, name: str) -> Letter:
        return self.alphabet.letter(name)

    def parse(self, text: str) -> Word:
        return parse_word(text, self.alphabet)

    def element_state(self, letter: Letter):
        return self._elements[self.alphabet.index(letter)]

    def act_state(self, state, letter_index: int):
        act = self.engine.act_state
        for builtin_index in self._image_indices[letter_index]:
            state = act(state, builtin_index)
        return state

    def evaluate_state(self, word: Word):
        state = self.engine.identity_state()
        index = self.alphabet.index
        for letter in word:
            state = self.act_state(state, index(letter))
        return state

    def evaluate_key(self, word: Word) -> str:
        return self.engine.register(self.evaluate_state(word))


def validate_genset(
    engine: GroupEngine,
    letter_image_pairs: Iterable[Tuple[str, Union[str, Word]]],
    check_generates: bool = True,
) -> GenSet:
    """Close the declared letters under formal inversion and validate.

    Letters keep their declared order; an auto-added inverse lands right
    after its partner.  A declared letter whose image element is an
    involution becomes its own inverse.
    """
    pairs = []
    for name, image in letter_image_pairs:
        word = (
            parse_word(image, engine.builtin_alphabet)
            if isinstance(image, str)
            else tuple(image)
        )
        pairs.append((name, word))
    if not pairs:
        raise GeolangError("a generating set needs at least one letter")
    names = [name for name, _ in pairs]
    if len(set(names)) != len(names):
        raise GeolangError("duplicate letter names in generating set")

    identity = engine.identity_state()
    elements = {}
    for name, word in pairs:
        state = engine.evaluate_state(word)
        if state == identity:
            raise IdentityLetter(name)
        for other, other_state in elements.items():
            if other_state == state:
                raise DuplicateElement(name, other)
        elements[name] = state
    inverse_elements = {
        name: engine.evaluate_state(invert_word(word)) for name, word in pairs
    }

    inverse_of = {}
    order = list(names)
    images = dict(pairs)
    for name, word in pairs:
        if name in inverse_of:
            continue
        if elements[name] == inverse_elements[name]:
            inverse_of[name] = name
            continue
        partner = next(
            (
                other
                for other in names
                if other != name and elements[other] == inverse_elements[name]
            ),
            None,
        )
        if partner is None:
            partner = name + "^-1"
            if partner in images:
                raise InverseMismatch(partner)
            images[partner] = invert_word(word)
            order.insert(order.index(name) + 1, partner)
        inverse_of[name] = partner
        inverse_of[partner] = name

    letters = [Letter(name, inverse_of[name]) for name in order]
    alphabet = Alphabet(letters)
    images = {
        letter: images[letter.name] for letter in letters
    }
    genset = GenSet(engine, alphabet, images)

    for name in names:
        if name.endswith("^-1"):
            base = name[:-3]
            if base in names and inverse_of.get(base) != name:
                raise InverseMismatch(name)

    if check_generates and engine.order is not None:
        reached = {identity}
        frontier = deque([identity])
        while frontier:
            state = frontier.popleft()
            for li in range(len(alphabet)):
                nxt = genset.act_state(state, li)
                if nxt not in reached:
                    reached.add(nxt)
                    frontier.append(nxt)
        if len(reached) != engine.order:
            raise NotGenerating()
    return genset


class DistanceMap:
    """Exact word-metric distances for every element within the radius."""

    def __init__(self, genset: GenSet, radius: int, dist_states: dict):
        self.genset = genset
        self.radius = radius
        self._dist_states = dist_states
        self._spheres = None

    def distance_state(self, state) -> Optional[int]:
        return self._dist_states.get(state)

    def distance_key(self, key: str) -> Optional[int]:
        state = self.genset.engine._key_states.get(key)
        if state is None:
            return None
        return self._dist_states.get(state)

    def __len__(self):
        return len(self._dist_states)

    @property
    def dist(self) -> dict:
        """Canonical key to distance, materialized on demand."""
        register = self.genset.engine.register
        return {register(state): r for state, r in self._dist_states.items()}

    @property
    def spheres(self):
        """Per radius, the list of canonical keys at that exact distance."""
        if self._spheres is None:
            register = self.genset.engine.register
            spheres = [[] for _ in range(self.radius + 1)]
            for state, r in self._dist_states.items():
                spheres[r].append(register(state))
            self._spheres = [sorted(s) for s in spheres]
        return self._spheres

    def sphere_sizes(self) -> tuple:
        sizes = [0] * (self.radius + 1)
        for r in self._dist_states.values():
            sizes[r] += 1
        return tuple(sizes)

    def export_lines(self):
        """Ball export format: 'distance<TAB>key' lines."""
        for r, keys in enumerate(self.spheres):
            for key in keys:
                yield f"{r}\t{key}"


def _bfs(genset: GenSet, radius: Optional[int], cap: int):
    """(distance map dict, attained radius); radius None runs to saturation."""
    identity = genset.engine.identity_state()
    dist = {identity: 0}
    frontier = [identity]
    letter_count = len(genset.alphabet)
    r = 0
    while frontier and (radius is None or r < radius):
        r += 1
        next_frontier = []
        for state in frontier:
            for li in range(letter_count):
                nxt = genset.act_state(state, li)
                if nxt not in dist:
                    if len(dist) >= cap:
                        raise ResourceCap(cap)
                    dist[nxt] = r
                    next_frontier.append(nxt)
        frontier = next_frontier
    attained = max(dist.values())
    return dist, attained


def ball(genset: GenSet, radius: int, cap: int = DEFAULT_ELEMENT_CAP) -> DistanceMap:
    """Breadth-first word-metric ball of the given radius around the identity."""
    if radius < 0:
        raise GeolangError("radius must be nonnegative")
    dist, _ = _bfs(genset, radius, cap)
    return DistanceMap(genset, radius, dist)


def full_ball(genset: GenSet, cap: int = DEFAULT_ELEMENT_CAP) -> DistanceMap:
    """Saturating ball for finite engines; the radius is the group diameter."""
    if genset.engine.order is None:
        raise GeolangError("full ball needs a finite engine")
    dist, attained = _bfs(genset, None, cap)
    return DistanceMap(genset, attained, dist)


def is_geodesic(genset: GenSet, word: Word, cap: int = DEFAULT_ELEMENT_CAP) -> bool:
    """Does the word's length equal its element's word-metric distance?"""
    if not word:
        return True
    dmap = ball(genset, len(word), cap)
    return dmap.distance_state(genset.evaluate_state(word)) == len(word)


class GeodesicLanguage:
    """A Language of geodesic words plus its engine/genset provenance."""

    def __init__(self, language: Language, genset: GenSet, diameter: Optional[int]):
        self.language = language
        self.genset = genset
        self.diameter = diameter

    # delegation, so classifier code can treat this as a Language
    @property
    def alphabet(self):
        return self.language.alphabet

    @property
    def strata(self):
        return self.language.strata

    @property
    def maxlen(self):
        return self.language.maxlen

    @property
    def complete(self):
        return self.language.complete

    def words(self):
        return self.language.words()

    def word_set(self):
        return self.language.word_set()

    def stratum_sizes(self):
        return self.language.stratum_sizes()

    def __contains__(self, word):
        return word in self.language

    def __len__(self):
        return len(self.language)

    def __repr__(self):
        return (
            f"GeodesicLanguage(strata sizes {self.language.stratum_sizes()}, "
            f"complete={self.complete}, diameter={self.diameter})"
        )


def geodesic_language(
    genset: GenSet,
    maxlen: Optional[int] = None,
    exact: bool = False,
    cap: int = DEFAULT_ELEMENT_CAP,
) -> GeodesicLanguage:
    """Stratified enumeration of geodesic words.

    Bounded mode enumerates up to ``maxlen``.  Exact mode (finite engines
    only) runs to the first empty stratum, which is final because geodesic
    languages are closed under contiguous subwords; the result is complete
    and records the group diameter.
    """
    if exact:
        if genset.engine.order is None:
            raise GeolangError("exact enumeration needs a finite engine")
        dmap = full_ball(genset, cap)
        upto = dmap.radius
    else:
        if maxlen is None:
            raise GeolangError("bounded enumeration needs maxlen")
        dmap = ball(genset, maxlen, cap)
        upto = maxlen

    alphabet = genset.alphabet
    letter_count = len(alphabet)
    strata = {0: {()}}
    layer = [((), genset.engine.identity_state())]
    diameter = 0
    truncated = False
    for length in range(1, upto + 1):
        next_layer = []
        for word, state in layer:
            for li in range(letter_count):
                nxt = genset.act_state(state, li)
                if dmap.distance_state(nxt) == length:
                    next_layer.append((word + (alphabet.letters[li],), nxt))
        if not next_layer:
            break
        strata[length] = {word for word, _ in next_layer}
        layer = next_layer
        diameter = length
    else:
        truncated = not exact

    if truncated:
        language = Language(alphabet, strata, upto, complete=False)
        return GeodesicLanguage(language, genset, None)
    language = Language(alphabet, strata, diameter, complete=True)
    return GeodesicLanguage(language, genset, diameter)
