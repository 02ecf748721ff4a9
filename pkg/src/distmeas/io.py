"""JSON document formats.

System documents::

    {
      "format_version": 1,
      "occasions": [{"id": "vX", "alphabet": ["0", "1"]}, ...],
      "edges": [["vX", "vZ"], ["vY", "vZ"]],
      "mechanisms": {
        "vZ": {"sources": ["vX", "vY"],
               "table": [["1", "0"], ["0", "1"], ["0", "1"], ["1", "0"]]}
      },
      "sources": {"vX": ["1/2", "1/2"], "vY": ["1/2", "1/2"]}
    }

A mechanism's table is column-major: table[j] is the output distribution for
the j-th joint input, where inputs run in mixed-radix order over the listed
sources with the FIRST listed source most significant. Sources may be listed
in any order; the loader permutes columns into the canonical id-sorted order.
Rationals are written "num/den" strings; integers and exact decimal strings
are accepted on input.

Automaton documents::

    {
      "format_version": 1,
      "cells": ["a", "b", "c"],
      "alphabet": ["0", "1"],
      "neighborhoods": {"a": ["c", "a", "b"], ...},   # or [["c", 2], ...] for lag 2
      "rules": {"a": {"kind": "life"}
                     | {"kind": "table", "table": {"0,0,0": "0", ...}}
                     | {"kind": "hopfield", "weights": ["1", "-1"], "temperature": "1"}},
      "window": [0, 1],
      "initial": {"a": "1", "b": {"distribution": ["1/2", "1/2"]}}
    }

Table keys are comma-joined symbols in neighborhood order. Life rules take
the cell's own position in its neighborhood as the self slot.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import DocumentError
from .stoch import (
    Distribution,
    ProductSpace,
    alphabet,
    canonical_space,
    matrix_from_columns,
    rational,
)
from .system import (
    AutomatonSpec,
    Occasion,
    SystemSpec,
    automaton,
    hopfield_rule,
    life_rule,
)

FORMAT_VERSION = 1


def format_rational(value: Fraction) -> Any:
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def _parse_rational(value: Any, where: str) -> Fraction:
    try:
        return rational(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {value!r} in {where}: {exc}") from None


def system_to_document(spec: SystemSpec) -> dict:
    occasions = [
        {"id": o.id, "alphabet": list(o.alphabet.symbols)}
        for o in sorted(spec.occasions, key=lambda o: o.id)]
    edges = [list(e) for e in sorted(spec.edges)]
    mechanisms = {}
    for occ_id in sorted(spec.mechanisms):
        m = spec.mechanisms[occ_id]
        mechanisms[occ_id] = {
            "sources": list(m.domain.factor_ids),
            "table": [[format_rational(v) for v in col] for col in m.cols],
        }
    sources = {
        occ_id: [format_rational(w) for w in spec.sources[occ_id].weights]
        for occ_id in sorted(spec.sources)}
    return {
        "format_version": FORMAT_VERSION,
        "occasions": occasions,
        "edges": edges,
        "mechanisms": mechanisms,
        "sources": sources,
    }


def system_from_document(doc: dict) -> SystemSpec:
    if not isinstance(doc, dict):
        raise DocumentError("system document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {doc.get('format_version')!r}")
    try:
        occasions = tuple(
            Occasion(str(o["id"]), alphabet(o["alphabet"]))
            for o in doc["occasions"])
        edge_list = [(str(a), str(b)) for a, b in doc["edges"]]
        mech_docs = doc.get("mechanisms", {})
        source_docs = doc.get("sources", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed system document: {exc}") from None

    alpha = {o.id: o.alphabet for o in occasions}
    mechanisms = {}
    for occ_id, mdoc in mech_docs.items():
        try:
            listed = [str(s) for s in mdoc["sources"]]
            table = mdoc["table"]
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"malformed mechanism for {occ_id!r}: {exc}") from None
        for s in listed + [occ_id]:
            if s not in alpha:
                raise DocumentError(f"mechanism for {occ_id!r} references unknown occasion {s!r}")
        listed_space = ProductSpace(tuple((s, alpha[s]) for s in listed))
        if len(table) != listed_space.dim:
            raise DocumentError(
                f"mechanism for {occ_id!r} has {len(table)} columns, expected {listed_space.dim}")
        canonical = canonical_space({s: alpha[s] for s in listed})
        cols = [None] * canonical.dim
        for j, col in enumerate(table):
            joint = listed_space.symbols_at(j)
            by_id = dict(zip(listed_space.factor_ids, joint))
            cj = canonical.index_of(tuple(by_id[f] for f in canonical.factor_ids))
            cols[cj] = [_parse_rational(v, f"mechanism {occ_id!r} column {j}") for v in col]
        mechanisms[occ_id] = matrix_from_columns(
            canonical, canonical_space({occ_id: alpha[occ_id]}), cols)

    sources = {}
    for occ_id, weights in source_docs.items():
        if occ_id not in alpha:
            raise DocumentError(f"source distribution for unknown occasion {occ_id!r}")
        sources[occ_id] = Distribution(
            canonical_space({occ_id: alpha[occ_id]}),
            tuple(_parse_rational(w, f"source {occ_id!r}") for w in weights))

    return SystemSpec(occasions, frozenset(edge_list), mechanisms, sources)


def load_system(path: str) -> SystemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON: {exc}") from None
    return system_from_document(doc)


def save_system(spec: SystemSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system_to_document(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")


def automaton_from_document(doc: dict) -> AutomatonSpec:
    if not isinstance(doc, dict):
        raise DocumentError("automaton document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {doc.get('format_version')!r}")
    try:
        cells = [str(c) for c in doc["cells"]]
        shared = alphabet(doc.get("alphabet", ["0", "1"]))
        alphabets = {c: shared for c in cells}
        for c, symbols in doc.get("alphabets", {}).items():
            alphabets[str(c)] = alphabet(symbols)
        neighborhoods = {
            str(c): [tuple(n) if isinstance(n, list) else str(n) for n in nbrs]
            for c, nbrs in doc["neighborhoods"].items()}
        window = (int(doc["window"][0]), int(doc["window"][1]))
        rule_docs = doc["rules"]
        init_docs = doc["initial"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed automaton document: {exc}") from None

    rules = {}
    for cell, rdoc in rule_docs.items():
        cell = str(cell)
        nbrs = neighborhoods.get(cell, [])
        rules[cell] = _rule_from_document(cell, rdoc, nbrs, alphabets)

    initial = {}
    for cell, idoc in init_docs.items():
        if isinstance(idoc, dict):
            weights = idoc.get("distribution")
            if weights is None:
                raise DocumentError(f"initial for {cell!r} must be a symbol or distribution")
            space = canonical_space({"init": alphabets[str(cell)]})
            initial[str(cell)] = Distribution(
                space, tuple(_parse_rational(w, f"initial {cell!r}") for w in weights))
        else:
            initial[str(cell)] = str(idoc)

    return automaton(cells, neighborhoods, rules, window, initial, alphabets)


def _rule_from_document(cell, rdoc, nbrs, alphabets):
    if isinstance(rdoc, dict) and set(rdoc) and all(k.isdigit() or (k[:1] == "-" and k[1:].isdigit()) for k in rdoc):
        return {int(t): _rule_from_document(cell, sub, nbrs, alphabets) for t, sub in rdoc.items()}
    if not isinstance(rdoc, dict) or "kind" not in rdoc:
        raise DocumentError(f"rule for {cell!r} needs a 'kind'")
    kind = rdoc["kind"]
    if kind == "life":
        self_positions = [i for i, n in enumerate(nbrs)
                          if (n if isinstance(n, str) else n[0]) == cell]
        if not self_positions:
            raise DocumentError(f"life rule for {cell!r} needs the cell in its own neighborhood")
        return life_rule(len(nbrs), self_index=self_positions[0])
    if kind == "table":
        try:
            return {
                tuple(str(k).split(",")): str(v)
                for k, v in rdoc["table"].items()}
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"malformed table rule for {cell!r}: {exc}") from None
    if kind == "hopfield":
        try:
            weights = [_parse_rational(w, f"hopfield weights of {cell!r}") for w in rdoc["weights"]]
            temperature = _parse_rational(rdoc["temperature"], f"hopfield temperature of {cell!r}")
        except KeyError as exc:
            raise DocumentError(f"hopfield rule for {cell!r} missing {exc}") from None
        snap = int(rdoc.get("snap_denominator", 10 ** 12))
        return hopfield_rule(weights, temperature, snap)
    raise DocumentError(f"unknown rule kind {kind!r} for {cell!r}")


def load_automaton(path: str) -> AutomatonSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON: {exc}") from None
    return automaton_from_document(doc)


def load_distribution(path: str, space) -> Distribution:
    """Read {"weights": [...]} over the given space, mixed-radix order."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "weights" not in doc:
        raise DocumentError(f"{path}: expected an object with a 'weights' list")
    weights = doc["weights"]
    if len(weights) != space.dim:
        raise DocumentError(f"{path}: {len(weights)} weights for a {space.dim}-state space")
    return Distribution(space, tuple(_parse_rational(w, path) for w in weights))
