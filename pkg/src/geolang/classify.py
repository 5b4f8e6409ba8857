"""Piecewise-excluding verdicts with re-checkable certificates.

A complete, factor-closed geodesic language is piecewise excluding exactly
when it is closed under single-letter deletion; the minimal forbidden
antichain then reconstructs it.  A member with a deleted subword outside the
language refutes the property conclusively, bound or no bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .geodesics import GenSet, GeodesicLanguage, ball, is_geodesic
from .words import (
    ForbiddenSet,
    GeolangError,
    Letter,
    Word,
    first_deletion_violation,
    format_word,
    is_subsequence,
    minimal_forbidden_subsequences,
)


@dataclass(frozen=True)
class PE:
    """The language equals the avoid-set of the minimal forbidden antichain."""

    forbidden: ForbiddenSet

    def report_lines(self):
        yield "verdict: PE"
        for word in self.forbidden.sorted_words():
            yield f"forbidden: {format_word(word)}"


@dataclass(frozen=True)
class NotPE:
    """A geodesic member with a non-geodesic subsequence."""

    witness: Word
    violation: Word

    def report_lines(self):
        yield "verdict: NotPE"
        yield f"witness: {format_word(self.witness)}"
        yield f"violation: {format_word(self.violation)}"


@dataclass(frozen=True)
class Inconclusive:
    """No violation within the bound; not a proof either way."""

    bound: int

    def report_lines(self):
        yield "verdict: Inconclusive"
        yield f"bound: {self.bound}"
        yield "warning: no violation found within bound; not a proof"


PEVerdict = Union[PE, NotPE, Inconclusive]


def pe_check(geo: GeodesicLanguage) -> PEVerdict:
    """Decide the property exactly; needs a complete language (finite engine)."""
    if not geo.complete:
        raise GeolangError("exact check needs a complete geodesic language")
    violation = first_deletion_violation(geo.language)
    if violation is not None:
        return NotPE(*violation)
    return PE(minimal_forbidden_subsequences(geo.language))


def pe_check_bounded(geo: GeodesicLanguage) -> PEVerdict:
    """Refutation-only scan of a bounded enumeration.

    Deleting one letter from a member always lands strictly below the bound,
    where membership is exact, so any violation found is conclusive; absence
    of one is not.
    """
    violation = first_deletion_violation(geo.language)
    if violation is not None:
        return NotPE(*violation)
    if geo.complete:
        return PE(minimal_forbidden_subsequences(geo.language))
    return Inconclusive(geo.maxlen)


def not_pe_from_conjugation(genset: GenSet, a, b) -> PEVerdict:
    """Try the conjugation witness a b a^-1.

    If it is geodesic the language is not piecewise excluding, because the
    cancellation pair a a^-1 would have to be a forbidden subsequence yet
    embeds in the witness.  Otherwise inconclusive: this particular witness
    failed, nothing more.
    """
    if isinstance(a, str):
        a = genset.letter(a)
    if isinstance(b, str):
        b = genset.letter(b)
    a_inv = genset.alphabet.inverse(a)
    witness = (a, b, a_inv)
    if is_geodesic(genset, witness):
        return NotPE(witness, (a, a_inv))
    return Inconclusive(3)


def recheck_certificate(genset: GenSet, verdict: PEVerdict, bound=None) -> bool:
    """Independent re-validation of a verdict through fresh ball searches."""
    if isinstance(verdict, NotPE):
        return (
            is_subsequence(verdict.violation, verdict.witness)
            and is_geodesic(genset, verdict.witness)
            and not is_geodesic(genset, verdict.violation)
        )
    if isinstance(verdict, PE):
        from .words import avoid_language
        from .geodesics import geodesic_language

        geo = geodesic_language(genset, exact=True)
        rebuilt = avoid_language(verdict.forbidden, geo.alphabet, geo.maxlen)
        return rebuilt == geo.language and verdict.forbidden.is_antichain()
    return True


def forbidden_contains_cancellation_pairs(
    forbidden: ForbiddenSet,
) -> bool:
    """Must hold for every PE verdict: a a^-1 is forbidden for every letter."""
    for letter in forbidden.alphabet:
        pair = (letter, forbidden.alphabet.inverse(letter))
        if pair not in forbidden:
            return False
    return True
