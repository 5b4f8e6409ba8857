"""Group arithmetic engines.

Finite multiplication tables (hand-built or produced by coset enumeration),
exact normal-form engines for the infinite families used throughout, products
and split extensions, and fingerprinting for group identification.

Engines expose two levels: an internal one on hashable states (used by all
search loops) and the public key level, where every element is a canonical
string.  Keys handed out by an engine are memoized, so they are always
accepted back by ``act``.
"""

from __future__ import annotations

import itertools
import random
from abc import ABC, abstractmethod
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .words import (
    Alphabet,
    GeolangError,
    Letter,
    UnknownLetter,
    Word,
    format_word,
    invert_word,
    parse_word,
)


class CapExceeded(GeolangError):
    """Coset enumeration hit its coset cap; inconclusive."""

    def __init__(self, max_cosets: int, enumerator=None):
        super().__init__(f"coset cap {max_cosets} exceeded")
        self.max_cosets = max_cosets
        self.enumerator = enumerator


class UnsupportedEngine(GeolangError):
    pass


# ---------------------------------------------------------------------------
# finite multiplication tables


class FiniteGroupTable:
    """Multiplication table on elements 0..order-1.

    Validates a two-sided identity, inverses, and associativity (exhaustive
    for order <= 64, sampled above that).
    """

    def __init__(self, mult: Sequence[Sequence[int]], names=None, check=True):
        order = len(mult)
        if order == 0:
            raise GeolangError("empty multiplication table")
        self.mult = tuple(tuple(row) for row in mult)
        for row in self.mult:
            if len(row) != order or any(not 0 <= x < order for x in row):
                raise GeolangError("multiplication table is not square over 0..n-1")
        self.order = order
        self.id = self._find_identity()
        self.inv = self._find_inverses()
        if names is None:
            names = ["1" if i == self.id else f"g{i}" for i in range(order)]
        names = list(names)
        if len(names) != order:
            raise GeolangError("names length does not match order")
        self.names = names
        if check:
            self._check_associativity()

    def _find_identity(self) -> int:
        for e in range(self.order):
            if all(
                self.mult[e][x] == x and self.mult[x][e] == x
                for x in range(self.order)
            ):
                return e
        raise GeolangError("table has no two-sided identity")

    def _find_inverses(self):
        inv = [None] * self.order
        for x in range(self.order):
            for y in range(self.order):
                if self.mult[x][y] == self.id and self.mult[y][x] == self.id:
                    inv[x] = y
                    break
            if inv[x] is None:
                raise GeolangError(f"element {x} has no inverse")
        return tuple(inv)

    def _check_associativity(self):
        n = self.order
        if n <= 64:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0xA550C)
            triples = (
                (rng.randrange(n), rng.randrange(n), rng.randrange(n))
                for _ in range(1000)
            )
        for a, b, c in triples:
            if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]]:
                raise GeolangError(f"table not associative at ({a},{b},{c})")

    def __repr__(self):
        return f"FiniteGroupTable(order={self.order})"

    def multiply(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def element_order(self, a: int) -> int:
        n = 1
        x = a
        while x != self.id:
            x = self.mult[x][a]
            n += 1
        return n

    def is_abelian(self) -> bool:
        return all(
            self.mult[a][b] == self.mult[b][a]
            for a in range(self.order)
            for b in range(a + 1, self.order)
        )

    def center_order(self) -> int:
        return sum(
            all(self.mult[a][b] == self.mult[b][a] for b in range(self.order))
            for a in range(self.order)
        )

    def subgroup_closure(self, generators: Iterable[int]) -> set:
        reached = {self.id}
        frontier = deque(set(generators) - reached)
        reached |= set(frontier)
        while frontier:
            x = frontier.popleft()
            for g in list(reached):
                for y in (self.mult[x][g], self.mult[g][x]):
                    if y not in reached:
                        reached.add(y)
                        frontier.append(y)
        return reached

    def derived_subgroup(self) -> set:
        commutators = {
            self.mult[self.mult[a][b]][self.mult[self.inv[a]][self.inv[b]]]
            for a in range(self.order)
            for b in range(self.order)
        }
        return self.subgroup_closure(commutators)

    def quotient_by(self, normal: set) -> "FiniteGroupTable":
        """Quotient table by a normal subgroup given as an element set."""
        coset_of = {}
        reps = []
        for x in range(self.order):
            if x in coset_of:
                continue
            rep = len(reps)
            reps.append(x)
            for h in normal:
                coset_of[self.mult[x][h]] = rep
        k = len(reps)
        mult = [
            [coset_of[self.mult[reps[i]][reps[j]]] for j in range(k)]
            for i in range(k)
        ]
        return FiniteGroupTable(mult, check=False)

    def export_lines(self):
        """Table export format: 'order N' then N rows of N indices."""
        yield f"order {self.order}"
        for row in self.mult:
            yield " ".join(str(x) for x in row)


def table_from_lines(lines: Iterable[str], names=None) -> FiniteGroupTable:
    lines = [line.strip() for line in lines if line.strip()]
    if not lines or not lines[0].startswith("order "):
        raise GeolangError("table file must start with 'order N'")
    order = int(lines[0].split()[1])
    rows = [[int(x) for x in line.split()] for line in lines[1 : order + 1]]
    if len(rows) != order:
        raise GeolangError("table file row count does not match order")
    return FiniteGroupTable(rows, names=names)


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism-invariant summary for identifying small groups."""

    order: int
    abelian: bool
    element_orders: tuple  # ((order, count), ...) ascending
    center_order: int
    abelianization: tuple  # invariant factors, descending
    derived_order: int


def fingerprint(table: FiniteGroupTable) -> Fingerprint:
    histogram = Counter(table.element_order(x) for x in range(table.order))
    derived = table.derived_subgroup()
    abelianized = table.quotient_by(derived)
    return Fingerprint(
        order=table.order,
        abelian=table.is_abelian(),
        element_orders=tuple(sorted(histogram.items())),
        center_order=table.center_order(),
        abelianization=abelian_invariants(abelianized),
        derived_order=len(derived),
    )


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(table: FiniteGroupTable) -> tuple:
    """Invariant factors (descending) of an abelian table.

    Uses the order histogram: in an abelian p-group the count of elements
    killed by p^k determines the partition of exponents.
    """
    if not table.is_abelian():
        raise GeolangError("invariant factors need an abelian table")
    n = table.order
    if n == 1:
        return ()
    partitions = {}
    for p in _prime_factors(n):
        pp = p_part(n, p)
        counts = []
        k = 1
        while True:
            killed = sum(
                1 for x in range(table.order) if pow_element(table, x, p**k) == table.id
            )
            counts.append(killed)
            if killed == pp:
                break
            k += 1
        s = [0] + [_ilog(c, p) for c in counts]
        c_parts = [s[i + 1] - s[i] for i in range(len(counts))]
        exponents = []
        t = 1
        while c_parts and t <= c_parts[0]:
            exponents.append(sum(1 for c in c_parts if c >= t))
            t += 1
        partitions[p] = sorted(exponents, reverse=True)
    width = max(len(v) for v in partitions.values())
    factors = []
    for j in range(width):
        d = 1
        for p, parts in partitions.items():
            if j < len(parts):
                d *= p ** parts[j]
        factors.append(d)
    return tuple(factors)


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def _ilog(value: int, p: int) -> int:
    out = 0
    while value > 1:
        value //= p
        out += 1
    return out


def pow_element(table: FiniteGroupTable, x: int, k: int) -> int:
    out = table.id
    base = x
    while k:
        if k & 1:
            out = table.mult[out][base]
        base = table.mult[base][base]
        k >>= 1
    return out


# ---------------------------------------------------------------------------
# presentations


class Presentation:
    """Generators (auto-closed under formal inversion) plus relator words."""

    def __init__(self, generator_names: Sequence[str], relator_texts: Sequence[str]):
        letters = []
        for name in generator_names:
            letters.append(Letter(name, name + "^-1"))
            letters.append(Letter(name + "^-1", name))
        self.alphabet = Alphabet(letters)
        self.generators = tuple(
            self.alphabet.letter(name) for name in generator_names
        )
        self.relators = tuple(
            parse_word(text, self.alphabet) if isinstance(text, str) else tuple(text)
            for text in relator_texts
        )
        if any(len(r) == 0 for r in self.relators):
            raise GeolangError("empty relator")

    def __repr__(self):
        gens = ", ".join(g.name for g in self.generators)
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"Presentation(<{gens} | {rels}>)"


# ---------------------------------------------------------------------------
# engines


class GroupEngine(ABC):
    """Group arithmetic behind canonical string keys."""

    builtin_alphabet: Alphabet
    order: Optional[int] = None  # None means infinite or unknown

    def __init__(self):
        self._key_states: dict = {}

    # state level -----------------------------------------------------------

    @abstractmethod
    def identity_state(self):
        ...

    @abstractmethod
    def act_state(self, state, letter_index: int):
        ...

    @abstractmethod
    def state_key(self, state) -> str:
        ...

    def evaluate_state(self, word: Word):
        index = self.builtin_alphabet.index
        state = self.identity_state()
        for letter in word:
            state = self.act_state(state, index(letter))
        return state

    def element_action(self, state):
        """Right multiplication by a fixed element, as a compiled callable.

        Engines that cannot compose two arbitrary states return None; callers
        fall back to folding the element's defining word.
        """
        return None

    # key level -------------------------------------------------------------

    def register(self, state) -> str:
        key = self.state_key(state)
        self._key_states.setdefault(key, state)
        return key

    def identity_key(self) -> str:
        return self.register(self.identity_state())

    def act(self, key: str, letter: Union[Letter, str]) -> str:
        if isinstance(letter, str):
            letter = self.builtin_alphabet.letter(letter)
        try:
            state = self._key_states[key]
        except KeyError:
            raise GeolangError(f"key {key!r} was never issued by this engine") from None
        return self.register(self.act_state(state, self.builtin_alphabet.index(letter)))

    def normal_form_state(self, state) -> Word:
        raise UnsupportedEngine(f"{type(self).__name__} has no normal form")


def evaluate(engine: GroupEngine, word: Word) -> str:
    """Key of the element a word over the engine's builtin letters represents."""
    return engine.register(engine.evaluate_state(word))


def rho_normal_form(engine: GroupEngine, key: str) -> Word:
    """Normal-form word for an issued key; engines without one refuse."""
    try:
        state = engine._key_states[key]
    except KeyError:
        raise GeolangError(f"key {key!r} was never issued by this engine") from None
    return engine.normal_form_state(state)


def _paired_letters(names: Sequence[str]):
    out = []
    for name in names:
        out.append(Letter(name, name + "^-1"))
        out.append(Letter(name + "^-1", name))
    return out


def _sanitize(name: str) -> str:
    return name.replace(" ", ".")


class TableEngine(GroupEngine):
    """Finite table exposed through element letters.

    ``letters`` maps names to element indices; by default every non-identity
    element becomes a letter named after the element.  Missing inverses are
    added automatically with a ^-1 name.
    """

    def __init__(self, table: FiniteGroupTable, letters=None):
        super().__init__()
        self.table = table
        self.order = table.order
        if len(set(table.names)) != table.order:
            raise GeolangError("table engine needs unique element names")
        if letters is None:
            letters = [
                (_sanitize(table.names[x]), x)
                for x in range(table.order)
                if x != table.id
            ]
        built, elements = self._close_letters(table, list(letters))
        self.builtin_alphabet = Alphabet(built)
        self._letter_element = tuple(elements)

    @staticmethod
    def _close_letters(table, pairs):
        for name, elt in pairs:
            if elt == table.id:
                raise GeolangError(f"letter {name!r} names the identity element")
        elt_of = {}
        for name, elt in pairs:
            if elt in elt_of.values():
                raise GeolangError(f"two letters name element {elt}")
            elt_of[name] = elt
        inverse_of = {}
        order = [name for name, _ in pairs]
        for name, elt in pairs:
            if name in inverse_of:
                continue
            inv_elt = table.inv[elt]
            if inv_elt == elt:
                inverse_of[name] = name
                continue
            partner = next((n for n, e in pairs if e == inv_elt), None)
            if partner is None:
                partner = name + "^-1"
                if partner in elt_of:
                    raise GeolangError(
                        f"letter {partner!r} does not name the inverse of {name!r}"
                    )
                elt_of[partner] = inv_elt
                order.insert(order.index(name) + 1, partner)
            inverse_of[name] = partner
            inverse_of[partner] = name
        letters = [Letter(name, inverse_of[name]) for name in order]
        elements = [elt_of[name] for name in order]
        return letters, elements

    def identity_state(self):
        return self.table.id

    def act_state(self, state, letter_index):
        return self.table.mult[state][self._letter_element[letter_index]]

    def state_key(self, state):
        return self.table.names[state]

    def element_action(self, state):
        column = tuple(row[state] for row in self.table.mult)
        return column.__getitem__

    def letter_element(self, letter: Letter) -> int:
        return self._letter_element[self.builtin_alphabet.index(letter)]


class ZnC2Engine(GroupEngine):
    """Rank-n free abelian group twisted by an order-2 transformation.

    ``phi`` is ("invert", i) or ("swap", i, j) with 1-based coordinates.
    States are (coordinate tuple, epsilon).
    """

    def __init__(self, n: int, phi):
        super().__init__()
        if n < 1:
            raise GeolangError("rank must be positive")
        kind = phi[0]
        if kind == "invert":
            i = phi[1]
            if not 1 <= i <= n:
                raise GeolangError("invert coordinate out of range")
            basis_image = [
                ((k, -1) if k == i - 1 else (k, 1)) for k in range(n)
            ]
        elif kind == "swap":
            i, j = phi[1], phi[2]
            if not (1 <= i <= n and 1 <= j <= n and i != j):
                raise GeolangError("swap coordinates out of range")
            basis_image = []
            for k in range(n):
                if k == i - 1:
                    basis_image.append((j - 1, 1))
                elif k == j - 1:
                    basis_image.append((i - 1, 1))
                else:
                    basis_image.append((k, 1))
        else:
            raise GeolangError(f"unknown twist kind {kind!r}")
        self.n = n
        self.phi = tuple(phi)
        self._phi_basis = tuple(basis_image)
        names = [f"x{k + 1}" for k in range(n)]
        letters = _paired_letters(names) + [Letter("y", "y")]
        self.builtin_alphabet = Alphabet(letters)
        # per letter: (coordinate, delta) or None for the twist letter
        acts = []
        for k in range(n):
            acts.append((k, 1))
            acts.append((k, -1))
        acts.append(None)
        self._acts = tuple(acts)

    def identity_state(self):
        return ((0,) * self.n, 0)

    def act_state(self, state, letter_index):
        m, eps = state
        action = self._acts[letter_index]
        if action is None:
            return (m, eps ^ 1)
        coord, delta = action
        if eps:
            coord, sign = self._phi_basis[coord]
            delta *= sign
        mm = list(m)
        mm[coord] += delta
        return (tuple(mm), eps)

    def state_key(self, state):
        m, eps = state
        return ",".join(str(c) for c in m) + ";" + str(eps)

    def element_action(self, state):
        vector, eps = state
        twisted = _znc2_twist(self._phi_basis, vector)

        def act(s):
            m, e = s
            delta = twisted if e else vector
            return (tuple(a + b for a, b in zip(m, delta)), e ^ eps)

        return act

    def normal_form_state(self, state) -> Word:
        m, eps = state
        out = []
        for k, c in enumerate(m):
            letter = self.builtin_alphabet.letter(f"x{k + 1}")
            if c < 0:
                letter = self.builtin_alphabet.inverse(letter)
            out.extend([letter] * abs(c))
        if eps:
            out.append(self.builtin_alphabet.letter("y"))
        return tuple(out)


def _znc2_twist(phi_basis, vector):
    out = [0] * len(vector)
    for k, value in enumerate(vector):
        kk, sign = phi_basis[k]
        out[kk] += sign * value
    return tuple(out)


class BS12Engine(GroupEngine):
    """Affine-map engine for <a,t | t a t^-1 = a^2>: x -> 2^e x + q.

    States are (e, q) with q an exact dyadic rational; composition is
    (e1,q1)∘(e2,q2) = (e1+e2, 2^e1 q2 + q1).
    """

    def __init__(self):
        super().__init__()
        self.builtin_alphabet = Alphabet(_paired_letters(["a", "t"]))
        one = Fraction(1)
        self._maps = (
            (0, one),  # a
            (0, -one),  # a^-1
            (1, Fraction(0)),  # t
            (-1, Fraction(0)),  # t^-1
        )

    def identity_state(self):
        return (0, Fraction(0))

    def act_state(self, state, letter_index):
        e1, q1 = state
        e2, q2 = self._maps[letter_index]
        if q2:
            scale = Fraction(2**e1) if e1 >= 0 else Fraction(1, 2**-e1)
            return (e1 + e2, q1 + scale * q2)
        return (e1 + e2, q1)

    def state_key(self, state):
        e, q = state
        return f"{e}|{q}"

    def element_action(self, state):
        e2, q2 = state

        def act(s):
            e1, q1 = s
            if q2:
                scale = Fraction(2**e1) if e1 >= 0 else Fraction(1, 2**-e1)
                return (e1 + e2, q1 + scale * q2)
            return (e1 + e2, q1)

        return act

    def normal_form_state(self, state) -> Word:
        """Word t^-i a^n t^j with i,j >= 0 and n odd when both are positive."""
        e, q = state
        a = self.builtin_alphabet.letter("a")
        t = self.builtin_alphabet.letter("t")
        if q == 0:
            power = t if e >= 0 else self.builtin_alphabet.inverse(t)
            return (power,) * abs(e)
        den = q.denominator
        d = den.bit_length() - 1
        i = max(0, -e, d)
        n = q * 2**i
        assert n.denominator == 1
        n = n.numerator
        j = e + i
        letters = [self.builtin_alphabet.inverse(t)] * i
        letters += [a if n > 0 else self.builtin_alphabet.inverse(a)] * abs(n)
        letters += [t] * j
        return tuple(letters)


class ZmSemidirectEngine(GroupEngine):
    """Cyclic normal factor twisted by t with t a t^-1 = a^s.

    ``t_order`` None means t generates an infinite cyclic factor; otherwise
    s**t_order must be 1 mod n.  Letter names are configurable because the
    constructions use both a/t and a/x conventions.
    """

    def __init__(self, n: int, s: int, t_order: Optional[int] = None,
                 a_name: str = "a", t_name: str = "t"):
        super().__init__()
        if n < 1:
            raise GeolangError("modulus must be positive")
        if gcd(s, n) != 1:
            raise GeolangError("twist multiplier must be a unit mod n")
        if t_order is not None:
            if t_order < 1:
                raise GeolangError("t_order must be positive")
            if pow(s, t_order, n) != 1 % n:
                raise GeolangError("s**t_order must be 1 mod n")
        self.n = n
        self.s = s % n
        self.t_order = t_order
        self.a_name = a_name
        self.t_name = t_name

        def letters_for(name, period):
            if period == 1:
                return [Letter(name, name)]  # degenerate identity letter
            if period == 2:
                return [Letter(name, name)]
            return _paired_letters([name])

        letters = letters_for(a_name, n) + letters_for(t_name, t_order or 0)
        self.builtin_alphabet = Alphabet(letters)
        acts = []
        for letter in letters:
            if letter.name == a_name or (
                letter.name == a_name + "^-1"
            ):
                acts.append(("a", 1 if letter.name == a_name else -1))
            else:
                acts.append(("t", 1 if letter.name == t_name else -1))
        # involution letters act by +1; their own inverse coincides
        self._acts = tuple(acts)

    def identity_state(self):
        return (0, 0)

    def act_state(self, state, letter_index):
        i, p = state
        kind, delta = self._acts[letter_index]
        if kind == "a":
            if self.n == 1:
                return state
            return ((i + delta * pow(self.s, p, self.n)) % self.n, p)
        p += delta
        if self.t_order is not None:
            p %= self.t_order
        return (i, p)

    def state_key(self, state):
        return f"{state[0]},{state[1]}"

    def element_action(self, state):
        i2, p2 = state
        n, s, t_order = self.n, self.s, self.t_order

        def act(st):
            i1, p1 = st
            p = p1 + p2
            if t_order is not None:
                p %= t_order
            if n == 1:
                return (0, p)
            return ((i1 + i2 * pow(s, p1, n)) % n, p)

        return act

    def normal_form_state(self, state) -> Word:
        i, p = state
        out = []
        if self.n > 1 and i:
            out.extend([self.builtin_alphabet.letter(self.a_name)] * i)
        if p:
            t = self.builtin_alphabet.letter(self.t_name)
            if self.t_order is None and p < 0:
                t = self.builtin_alphabet.inverse(t)
            out.extend([t] * abs(p))
        return tuple(out)


class ProductEngine(GroupEngine):
    """Direct product of two engines; keys pair the component keys."""

    def __init__(self, first: GroupEngine, second: GroupEngine,
                 suffixes=("_1", "_2")):
        super().__init__()
        self.first = first
        self.second = second
        letters = []
        for letter in first.builtin_alphabet:
            letters.append(
                Letter(letter.name + suffixes[0], letter.inverse_name + suffixes[0])
            )
        for letter in second.builtin_alphabet:
            letters.append(
                Letter(letter.name + suffixes[1], letter.inverse_name + suffixes[1])
            )
        self.builtin_alphabet = Alphabet(letters)
        self._split = len(first.builtin_alphabet)
        if first.order is not None and second.order is not None:
            self.order = first.order * second.order

    def identity_state(self):
        return (self.first.identity_state(), self.second.identity_state())

    def act_state(self, state, letter_index):
        s1, s2 = state
        if letter_index < self._split:
            return (self.first.act_state(s1, letter_index), s2)
        return (s1, self.second.act_state(s2, letter_index - self._split))

    def state_key(self, state):
        return f"({self.first.state_key(state[0])}, {self.second.state_key(state[1])})"

    def element_action(self, state):
        first = self.first.element_action(state[0])
        second = self.second.element_action(state[1])
        if first is None or second is None:
            return None

        def act(s):
            return (first(s[0]), second(s[1]))

        return act


class ExtensionEngine(GroupEngine):
    """Split extension of a finite table by Z^r acting through automorphisms.

    ``actions`` holds one permutation of the element indices per free
    direction; permutations must be automorphisms and commute pairwise.
    Builtin letters are every non-identity element of the finite factor plus
    t (or t1..tr) for the free directions.
    """

    def __init__(self, h_table: FiniteGroupTable, rank: int, actions=None):
        super().__init__()
        if rank < 1:
            raise GeolangError("rank must be positive")
        if actions is None:
            actions = [tuple(range(h_table.order))] * rank
        actions = [tuple(a) for a in actions]
        if len(actions) != rank:
            raise GeolangError("one action permutation per direction required")
        for perm in actions:
            _check_automorphism(h_table, perm)
        for p1, p2 in itertools.combinations(actions, 2):
            if _compose_perm(p1, p2) != _compose_perm(p2, p1):
                raise GeolangError("action permutations must commute")
        self.h_table = h_table
        self.rank = rank
        self.actions = tuple(actions)
        self._inverse_actions = tuple(_invert_perm(p) for p in actions)
        h_letters, h_elements = TableEngine._close_letters(
            h_table,
            [
                (_sanitize(h_table.names[x]), x)
                for x in range(h_table.order)
                if x != h_table.id
            ],
        )
        t_names = ["t"] if rank == 1 else [f"t{k + 1}" for k in range(rank)]
        letters = h_letters + _paired_letters(t_names)
        self.builtin_alphabet = Alphabet(letters)
        self._h_count = len(h_letters)
        self._letter_element = tuple(h_elements)
        self.h_letters = tuple(h_letters)
        self.t_letters = tuple(
            self.builtin_alphabet.letter(name) for name in t_names
        )

    def identity_state(self):
        return (self.h_table.id, (0,) * self.rank)

    def _twist(self, vector, element: int) -> int:
        for d, v in enumerate(vector):
            if v > 0:
                perm = self.actions[d]
                for _ in range(v):
                    element = perm[element]
            elif v < 0:
                perm = self._inverse_actions[d]
                for _ in range(-v):
                    element = perm[element]
        return element

    def act_state(self, state, letter_index):
        h, vector = state
        if letter_index < self._h_count:
            incoming = self._twist(vector, self._letter_element[letter_index])
            return (self.h_table.mult[h][incoming], vector)
        k, delta = divmod(letter_index - self._h_count, 2)
        vv = list(vector)
        vv[k] += 1 if delta == 0 else -1
        return (h, tuple(vv))

    def state_key(self, state):
        h, vector = state
        return f"{self.h_table.names[h]};" + ",".join(str(v) for v in vector)


def _check_automorphism(table: FiniteGroupTable, perm):
    if sorted(perm) != list(range(table.order)):
        raise GeolangError("action is not a permutation of the elements")
    for a in range(table.order):
        for b in range(table.order):
            if perm[table.mult[a][b]] != table.mult[perm[a]][perm[b]]:
                raise GeolangError("action permutation is not an automorphism")


def _compose_perm(p1, p2):
    return tuple(p1[p2[x]] for x in range(len(p1)))


def _invert_perm(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return out


# ---------------------------------------------------------------------------
# coset enumeration (HLT with coincidence processing)


class CosetEnumerator:
    """Todd-Coxeter over the trivial subgroup, HLT strategy, hard coset cap.

    The table at any stage only ever records consequences of the relators, so
    two words tracing to the same live coset are equal in the presented group
    even when the enumeration was cut off; ``trace`` exposes that soundly.
    """

    def __init__(self, presentation: Presentation, max_cosets: int):
        self.presentation = presentation
        self.max_cosets = max_cosets
        alphabet = presentation.alphabet
        self.ncols = len(alphabet)
        self.inv_col = tuple(
            alphabet.index(alphabet.inverse(letter)) for letter in alphabet
        )
        self.rels = [
            tuple(alphabet.index(letter) for letter in rel)
            for rel in presentation.relators
        ]
        self.table = [[None] * self.ncols]
        self.p = [0]
        self.defined = 1
        self.completed = False

    # union-find ------------------------------------------------------------

    def find(self, c: int) -> int:
        p = self.p
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    # core ------------------------------------------------------------------

    def _define(self, alpha: int, col: int) -> int:
        if self.defined >= self.max_cosets:
            raise CapExceeded(self.max_cosets, enumerator=self)
        new = len(self.table)
        self.table.append([None] * self.ncols)
        self.p.append(new)
        self.defined += 1
        self.table[alpha][col] = new
        self.table[new][self.inv_col[col]] = alpha
        return new

    def _merge(self, a: int, b: int, queue) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.p[b] = a
        queue.append(b)

    def _coincidence(self, a: int, b: int) -> None:
        queue = deque()
        self._merge(a, b, queue)
        table, inv_col = self.table, self.inv_col
        while queue:
            gamma = queue.popleft()
            for col in range(self.ncols):
                delta = table[gamma][col]
                if delta is None:
                    continue
                table[delta][inv_col[col]] = None
                mu = self.find(gamma)
                nu = self.find(delta)
                if table[mu][col] is not None:
                    self._merge(nu, table[mu][col], queue)
                elif table[nu][inv_col[col]] is not None:
                    self._merge(mu, table[nu][inv_col[col]], queue)
                else:
                    table[mu][col] = nu
                    table[nu][inv_col[col]] = mu

    def _scan_and_fill(self, alpha: int, rel) -> None:
        table, inv_col = self.table, self.inv_col
        f, i = alpha, 0
        b, j = alpha, len(rel) - 1
        while True:
            while i <= j and table[f][rel[i]] is not None:
                f = table[f][rel[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][inv_col[rel[j]]] is not None:
                b = table[b][inv_col[rel[j]]]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                table[f][rel[i]] = b
                table[b][inv_col[rel[i]]] = f
                return
            self._define(f, rel[i])

    def run(self) -> None:
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] == alpha:
                for rel in self.rels:
                    self._scan_and_fill(alpha, rel)
                    if self.p[alpha] != alpha:
                        break
                if self.p[alpha] == alpha:
                    for col in range(self.ncols):
                        if self.table[alpha][col] is None:
                            self._define(alpha, col)
            alpha += 1
        self._verify()
        self.completed = True

    def _verify(self) -> None:
        # the completed table must be closed and satisfy every relator
        for c in range(len(self.table)):
            if self.p[c] != c:
                continue
            for col in range(self.ncols):
                d = self.table[c][col]
                assert d is not None, "incomplete row after enumeration"
                assert self.find(self.table[self.find(d)][self.inv_col[col]]) == c
            for rel in self.rels:
                x = c
                for col in rel:
                    x = self.find(self.table[x][col])
                assert x == c, "relator does not close"

    # results ----------------------------------------------------------------

    def trace(self, word: Word) -> Optional[int]:
        """Live coset reached by a word from the origin, or None if undefined.

        Words tracing to the same coset are provably equal in the presented
        group; distinct cosets prove nothing.
        """
        alphabet = self.presentation.alphabet
        c = 0
        for letter in word:
            c = self.find(c)
            entry = self.table[c][alphabet.index(letter)]
            if entry is None:
                return None
            c = entry
        return self.find(c)

    def live_count(self) -> int:
        return sum(1 for c in range(len(self.table)) if self.p[c] == c)

    def result(self):
        """(FiniteGroupTable, generator elements) after a completed run."""
        assert self.completed
        live = [c for c in range(len(self.table)) if self.p[c] == c]
        index = {c: i for i, c in enumerate(live)}
        n = len(live)
        act = [
            [index[self.find(self.table[c][col])] for col in range(self.ncols)]
            for c in live
        ]
        alphabet = self.presentation.alphabet
        # shortlex-minimal representative words via breadth-first search
        rep = {0: ()}
        frontier = [0]
        while frontier:
            new_frontier = []
            for c in frontier:
                for col in range(self.ncols):
                    d = act[c][col]
                    if d not in rep:
                        rep[d] = rep[c] + (col,)
                        new_frontier.append(d)
            frontier = new_frontier
        names = [
            format_word(tuple(alphabet.letters[col] for col in rep[i]))
            for i in range(n)
        ]
        mult = []
        for i in range(n):
            row = []
            for j in range(n):
                x = i
                for col in rep[j]:
                    x = act[x][col]
                row.append(x)
            mult.append(row)
        table = FiniteGroupTable(mult, names=names)
        generator_elements = {
            g.name: act[0][alphabet.index(g)] for g in self.presentation.generators
        }
        return table, generator_elements


def coset_enumerate(presentation: Presentation, max_cosets: int) -> FiniteGroupTable:
    """Enumerate the presented group's multiplication table, or raise CapExceeded."""
    enum = CosetEnumerator(presentation, max_cosets)
    enum.run()
    table, _ = enum.result()
    return table


def presentation_engine(presentation: Presentation, max_cosets: int) -> TableEngine:
    """Finite engine whose builtin letters are the presentation's generators."""
    enum = CosetEnumerator(presentation, max_cosets)
    enum.run()
    table, gen_elements = enum.result()
    letters = []
    seen = set()
    for g in presentation.generators:
        elt = gen_elements[g.name]
        if elt == table.id:
            raise GeolangError(f"generator {g.name!r} is the identity in the group")
        if elt in seen:
            continue
        inv_elt = table.inv[elt]
        if inv_elt in seen:
            continue
        letters.append((g.name, elt))
        seen.add(elt)
    engine = TableEngine(table, letters=letters)
    engine.presentation = presentation
    return engine


def check_homomorphism(
    presentation: Presentation, target: GroupEngine, images: dict
) -> bool:
    """Do the letter images kill every relator in the target group?"""
    image_words = {}
    for letter_or_name, image in images.items():
        name = letter_or_name.name if isinstance(letter_or_name, Letter) else letter_or_name
        word = (
            parse_word(image, target.builtin_alphabet)
            if isinstance(image, str)
            else tuple(image)
        )
        image_words[name] = word
        image_words[name + "^-1"] = invert_word(word)
    identity = target.identity_state()
    for rel in presentation.relators:
        state = identity
        for letter in rel:
            if letter.name not in image_words:
                raise GeolangError(f"no image for generator {letter.name!r}")
            for img_letter in image_words[letter.name]:
                state = target.act_state(
                    state, target.builtin_alphabet.index(img_letter)
                )
        if state != identity:
            return False
    return True


def direct_product(
    t1: FiniteGroupTable, t2: FiniteGroupTable
) -> FiniteGroupTable:
    """Componentwise product table of order |t1|*|t2|."""
    n1, n2 = t1.order, t2.order

    def code(i, j):
        return i * n2 + j

    mult = [[0] * (n1 * n2) for _ in range(n1 * n2)]
    for i1 in range(n1):
        for j1 in range(n2):
            for i2 in range(n1):
                for j2 in range(n2):
                    mult[code(i1, j1)][code(i2, j2)] = code(
                        t1.mult[i1][i2], t2.mult[j1][j2]
                    )
    names = [
        f"({t1.names[i]},{t2.names[j]})" for i in range(n1) for j in range(n2)
    ]
    return FiniteGroupTable(mult, names=names)


def engine_to_table(engine: GroupEngine, cap: int = 4096) -> FiniteGroupTable:
    """Materialize a finite engine as a table by breadth-first closure."""
    identity = engine.identity_state()
    states = [identity]
    seen = {identity: 0}
    rep = {0: ()}
    frontier = [0]
    ncols = len(engine.builtin_alphabet)
    while frontier:
        new_frontier = []
        for i in frontier:
            for col in range(ncols):
                nxt = engine.act_state(states[i], col)
                if nxt not in seen:
                    if len(states) >= cap:
                        raise CapExceeded(cap)
                    seen[nxt] = len(states)
                    rep[len(states)] = rep[i] + (col,)
                    states.append(nxt)
                    new_frontier.append(seen[nxt])
        frontier = new_frontier
    n = len(states)
    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            state = states[i]
            for col in rep[j]:
                state = engine.act_state(state, col)
            row.append(seen[state])
        mult.append(row)
    names = [engine.state_key(s) for s in states]
    return FiniteGroupTable(mult, names=names)


# ---------------------------------------------------------------------------
# reference groups


def trivial_table() -> FiniteGroupTable:
    return FiniteGroupTable([[0]], names=["1"])


def cyclic_table(k: int) -> FiniteGroupTable:
    mult = [[(i + j) % k for j in range(k)] for i in range(k)]
    names = ["1"] + [f"g{i}" if i > 1 else "g" for i in range(1, k)]
    return FiniteGroupTable(mult, names=names)


_Q8_UNITS = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
_Q8_AXIS_MULT = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("j", "1"): (1, "j"), ("k", "1"): (1, "k"),
    ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
}


def q8_table() -> FiniteGroupTable:
    """Quaternion unit group built from the axis multiplication rules."""

    def split(name):
        return (-1, name[1:]) if name.startswith("-") else (1, name)

    def join(sign, axis):
        return axis if sign == 1 else ("-" + axis if axis != "1" else "-1")

    index = {name: i for i, name in enumerate(_Q8_UNITS)}
    mult = []
    for a in _Q8_UNITS:
        row = []
        for b in _Q8_UNITS:
            sa, xa = split(a)
            sb, xb = split(b)
            sign, axis = _Q8_AXIS_MULT[(xa, xb)]
            row.append(index[join(sa * sb * sign, axis)])
        mult.append(row)
    return FiniteGroupTable(mult, names=list(_Q8_UNITS))


def s3_table() -> FiniteGroupTable:
    """Symmetric group on three points via permutation composition."""
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    mult = [
        [index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms
    ]
    names = ["1" if p == (0, 1, 2) else "p" + "".join(map(str, p)) for p in perms]
    return FiniteGroupTable(mult, names=names)


def sl2_z3_table() -> FiniteGroupTable:
    """SL2 over the field with three elements, from matrix arithmetic."""
    mats = []
    for a, b, c, d in itertools.product(range(3), repeat=4):
        if (a * d - b * c) % 3 == 1:
            mats.append((a, b, c, d))
    mats.sort()
    index = {m: i for i, m in enumerate(mats)}
    mult = []
    for m1 in mats:
        a, b, c, d = m1
        row = []
        for m2 in mats:
            e, f, g, h = m2
            row.append(
                index[
                    (
                        (a * e + b * g) % 3,
                        (a * f + b * h) % 3,
                        (c * e + d * g) % 3,
                        (c * f + d * h) % 3,
                    )
                ]
            )
        mult.append(row)
    names = ["m" + "".join(map(str, m)) for m in mats]
    names[index[(1, 0, 0, 1)]] = "1"
    return FiniteGroupTable(mult, names=names)
