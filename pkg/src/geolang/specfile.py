"""INI-style group and generating-set files.

A group file carries a [group] section whose ``kind`` selects the engine;
component files (tables, product factors, extension kernels) are resolved
relative to the referencing file.  A [genset] section, in the same file or a
separate one, lists ``name = image-word`` lines over the engine's builtin
letters.
"""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Optional, Union

from .geodesics import GenSet, validate_genset
from .groups import (
    BS12Engine,
    ExtensionEngine,
    FiniteGroupTable,
    GroupEngine,
    Presentation,
    ProductEngine,
    TableEngine,
    ZmSemidirectEngine,
    ZnC2Engine,
    presentation_engine,
    table_from_lines,
)
from .words import GeolangError


class SpecFileError(GeolangError):
    pass


def _read(path: Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(
        delimiters=("=",), comment_prefixes=("#", ";"), interpolation=None
    )
    parser.optionxform = str  # letter names are case-sensitive
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as err:
        raise SpecFileError(f"cannot read {path}: {err}") from None
    except configparser.Error as err:
        raise SpecFileError(f"cannot parse {path}: {err}") from None
    return parser


def _get(section, key, path, default=None):
    if key in section:
        return section[key]
    if default is not None:
        return default
    raise SpecFileError(f"{path}: [group] needs key {key!r}")


def _parse_phi(text: str, path: Path):
    tokens = text.split()
    if tokens and tokens[0] == "invert" and len(tokens) == 2:
        return ("invert", int(tokens[1]))
    if tokens and tokens[0] == "swap" and len(tokens) == 3:
        return ("swap", int(tokens[1]), int(tokens[2]))
    raise SpecFileError(f"{path}: phi must be 'invert i' or 'swap i j'")


def _parse_cycles(text: str, order: int, path: Path):
    """Permutation from disjoint cycles of 0-based element indices."""
    perm = list(range(order))
    text = text.strip()
    if text in ("", "()", "id"):
        return tuple(perm)
    if not (text.startswith("(") and text.endswith(")")):
        raise SpecFileError(f"{path}: cycles must look like (0 1)(2 3)")
    for cycle in text[1:-1].split(")("):
        indices = [int(tok) for tok in cycle.split()]
        if len(indices) < 2:
            raise SpecFileError(f"{path}: cycle needs at least two indices")
        for src, dst in zip(indices, indices[1:] + indices[:1]):
            perm[src] = dst
    return tuple(perm)


def load_presentation(path: Union[str, Path]) -> Presentation:
    """Read the presentation a group file of kind ``presentation`` carries."""
    path = Path(path)
    parser = _read(path)
    if not parser.has_section("group"):
        raise SpecFileError(f"{path}: missing [group] section")
    section = parser["group"]
    if _get(section, "kind", path) != "presentation":
        raise SpecFileError(f"{path}: not a presentation group file")
    generators = _get(section, "generators", path).split()
    relators = [
        line.strip()
        for line in _get(section, "relators", path).splitlines()
        if line.strip()
    ]
    return Presentation(generators, relators)


def load_group(path: Union[str, Path]) -> GroupEngine:
    """Build the engine a group file describes."""
    path = Path(path)
    parser = _read(path)
    if not parser.has_section("group"):
        raise SpecFileError(f"{path}: missing [group] section")
    section = parser["group"]
    kind = _get(section, "kind", path)

    if kind == "table":
        table_path = path.parent / _get(section, "path", path)
        names = section.get("names")
        names = names.split() if names else None
        try:
            with open(table_path, "r", encoding="utf-8") as handle:
                table = table_from_lines(handle, names=names)
        except OSError as err:
            raise SpecFileError(f"cannot read {table_path}: {err}") from None
        return TableEngine(table)

    if kind == "presentation":
        generators = _get(section, "generators", path).split()
        relators = [
            line.strip()
            for line in _get(section, "relators", path).splitlines()
            if line.strip()
        ]
        cap = int(section.get("cap", "20000"))
        return presentation_engine(Presentation(generators, relators), cap)

    if kind == "zn_c2":
        n = int(_get(section, "n", path))
        phi = _parse_phi(_get(section, "phi", path), path)
        return ZnC2Engine(n, phi)

    if kind == "bs12":
        return BS12Engine()

    if kind == "zm_semidirect":
        n = int(_get(section, "n", path))
        s = int(_get(section, "s", path))
        t_order_text = section.get("t_order", "inf")
        t_order = None if t_order_text == "inf" else int(t_order_text)
        return ZmSemidirectEngine(
            n, s, t_order,
            a_name=section.get("a_name", "a"),
            t_name=section.get("t_name", "t"),
        )

    if kind == "product":
        left = load_group(path.parent / _get(section, "left", path))
        right = load_group(path.parent / _get(section, "right", path))
        return ProductEngine(left, right)

    if kind == "extension":
        h_engine = load_group(path.parent / _get(section, "h", path))
        if not isinstance(h_engine, TableEngine):
            raise SpecFileError(
                f"{path}: extension kernels must resolve to finite tables"
            )
        rank = int(_get(section, "r", path))
        actions = []
        for k in range(1, rank + 1):
            actions.append(
                _parse_cycles(
                    section.get(f"action_{k}", ""), h_engine.table.order, path
                )
            )
        return ExtensionEngine(h_engine.table, rank, actions)

    raise SpecFileError(f"{path}: unknown group kind {kind!r}")


def load_genset(path: Union[str, Path], engine: GroupEngine) -> GenSet:
    """Read the [genset] section of a file and validate it over the engine."""
    path = Path(path)
    parser = _read(path)
    if not parser.has_section("genset"):
        raise SpecFileError(f"{path}: missing [genset] section")
    pairs = list(parser["genset"].items())
    if not pairs:
        raise SpecFileError(f"{path}: empty [genset] section")
    return validate_genset(engine, pairs)
