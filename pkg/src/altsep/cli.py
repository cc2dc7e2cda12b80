"""Command line driver: problem files in, certificates and DOT out.

Problem files are section-headed plain text with '#' comments::

    [free]      rank = 2
    [finite]    degree = 3 ; gens = y1: (1 2 3); y2: (1 2)
    [subgroup]  h1 = y1 x1^-1 y1
                h2 = x1 x2 x1^-1
    [separate]  g1 = y2

Words are whitespace-separated terms ``x1``, ``y2^-1``, ``x1^3``; the bare
word "1" is the identity.  Permutations use 1-based cycle notation.

``altsep separate FILE`` prints a JSON certificate on success (exit 0):
degree, primality, generator images in cycle notation, whether the image
is alternating or symmetric, one record per separated word, and pipeline
statistics.  Rejections print a machine-readable reason and exit 2 when
the eligibility check fails (HypothesisNotSatisfied) or 3 when a word to
separate already lies in the subgroup (GammaClosed).  Input errors exit 1.
Identical inputs produce byte-identical certificates and DOT files.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import permgroup
from .covers import (
    CoverSearchExhaustedError,
    HypothesisNotSatisfiedError,
    build_separating_cover,
    word_action,
)
from .factors import embed_Y_component, enumerate_group
from .graphs import LabeledGraph, components, is_connected, saturation_defects
from .kurosh import kurosh_decompose, verify_intersection
from .subgroups import (
    FreeFactor,
    ProblemSpec,
    build_subgroup_graph,
    hypothesis_check,
)
from .words import Word, word_str, x_alphabet, x_letter, y_alphabet, y_letter

STAGE_NAMES = ("subgroup_graph", "component_covers", "precover", "cover")


class ProblemFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_WORD_TERM_RE = re.compile(r"([xy])(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str, rank: int, num_ygens: int, line: int) -> Word:
    text = text.strip()
    if text == "1":
        return ()
    letters = []
    column = 1
    for token in text.split():
        column = text.find(token, column - 1) + 1
        match = _WORD_TERM_RE.match(token)
        if not match:
            raise ProblemFormatError(f"bad word term {token!r}", line, column)
        factor, index, exponent = match.group(1), int(match.group(2)), match.group(3)
        exponent = 1 if exponent is None else int(exponent)
        limit = rank if factor == "x" else num_ygens
        if not 1 <= index <= limit:
            raise ProblemFormatError(f"unknown generator {factor}{index}", line, column)
        sign = 1 if exponent > 0 else -1
        base = x_letter(index, sign) if factor == "x" else y_letter(index, sign)
        letters.extend([base] * abs(exponent))
    return tuple(letters)


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


_SECTION_RE = re.compile(r"^\s*\[(\w+)\]\s*(.*)$")
_KEYED_RE = re.compile(r"^([A-Za-z]+\d*)\s*=\s*(.*)$")
_GENDEF_RE = re.compile(r"^y(\d+)\s*:\s*(.*)$")


def parse_problem(text: str) -> ProblemSpec:
    """Parse a problem file into a fully resolved spec."""
    section = None
    rank = None
    degree = None
    raw_gens = {}
    raw_words = {"subgroup": {}, "separate": {}}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        header = _SECTION_RE.match(line)
        if header:
            section = header.group(1)
            if section not in ("free", "finite", "subgroup", "separate"):
                raise ProblemFormatError(f"unknown section [{section}]", lineno)
            line = header.group(2).strip()
            if not line:
                continue
        if section is None:
            raise ProblemFormatError("content before any section header", lineno)
        for chunk in line.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if section == "free":
                keyed = _KEYED_RE.match(chunk)
                if not keyed or keyed.group(1) != "rank":
                    raise ProblemFormatError(f"expected 'rank = <int>', got {chunk!r}", lineno)
                rank = _parse_int(keyed.group(2), lineno)
            elif section == "finite":
                keyed = _KEYED_RE.match(chunk)
                if keyed and keyed.group(1) == "degree":
                    degree = _parse_int(keyed.group(2), lineno)
                    continue
                if keyed and keyed.group(1) == "gens":
                    chunk = keyed.group(2).strip()
                gendef = _GENDEF_RE.match(chunk)
                if not gendef:
                    raise ProblemFormatError(
                        f"expected 'degree = <int>' or 'y<k>: <cycles>', got {chunk!r}",
                        lineno)
                index = int(gendef.group(1))
                if index in raw_gens:
                    raise ProblemFormatError(f"generator y{index} defined twice", lineno)
                raw_gens[index] = (gendef.group(2).strip(), lineno)
            else:
                keyed = _KEYED_RE.match(chunk)
                prefix = "h" if section == "subgroup" else "g"
                if not keyed or not re.fullmatch(prefix + r"\d+", keyed.group(1)):
                    raise ProblemFormatError(
                        f"expected '{prefix}<i> = <word>', got {chunk!r}", lineno)
                index = int(keyed.group(1)[1:])
                if index in raw_words[section]:
                    raise ProblemFormatError(
                        f"{keyed.group(1)} defined twice", lineno)
                raw_words[section][index] = (keyed.group(2).strip(), lineno)

    if rank is None:
        raise ProblemFormatError("missing [free] section with a rank", 1)
    if rank < 2:
        raise ProblemFormatError(f"free rank must be at least 2, got {rank}", 1)
    if degree is None:
        raise ProblemFormatError("missing degree in [finite] section", 1)
    if not raw_gens:
        raise ProblemFormatError("missing generators in [finite] section", 1)
    if sorted(raw_gens) != list(range(1, len(raw_gens) + 1)):
        raise ProblemFormatError(
            "finite-factor generators must be y1..yq with no gaps", 1)

    perms = []
    for index in range(1, len(raw_gens) + 1):
        cycles_text, lineno = raw_gens[index]
        try:
            perms.append(permgroup.parse_cycles(cycles_text, degree))
        except ValueError as err:
            raise ProblemFormatError(str(err), lineno) from err
    table = enumerate_group(degree, perms)

    def collect(section: str):
        out = []
        for index in sorted(raw_words[section]):
            word_text, lineno = raw_words[section][index]
            out.append(parse_word(word_text, rank, len(raw_gens), lineno))
        return tuple(out)

    return ProblemSpec(
        free=FreeFactor(rank),
        finite=table,
        subgroup_words=collect("subgroup"),
        separate_words=collect("separate"),
    )


def _parse_int(text: str, line: int) -> int:
    try:
        return int(text.strip())
    except ValueError as err:
        raise ProblemFormatError(f"expected an integer, got {text!r}", line) from err


def export_dot(graph: LabeledGraph, name: str) -> str:
    """Deterministic DOT rendering: sorted vertex ids, base double-circled,
    one arc per canonical edge orientation."""
    lines = [f"digraph {name} {{"]
    for v in sorted(graph.vertices):
        shape = " [shape=doublecircle]" if v == graph.base else ""
        lines.append(f"  {v}{shape};")
    arcs = sorted(graph.pairs, key=lambda p: (p[0], p[2].sort_key, p[1]))
    for u, w, letter in arcs:
        lines.append(f'  {u} -> {w} [label="{letter}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class RunOutcome:
    exit_code: int
    document: dict
    stages: dict


def _certificate_positions(graph: LabeledGraph):
    order = sorted(graph.vertices)
    return {v: i for i, v in enumerate(order)}


def run_separate(
    spec: ProblemSpec,
    sign_vector=None,
    max_prime: int = 100000,
    verify_level: str = "fast",
) -> RunOutcome:
    """Full pipeline: based graph, eligibility, separating cover, vertex
    action, recognition, certificate.  Every certificate invariant is
    re-checked before the document is emitted."""
    if not spec.separate_words:
        raise ValueError("nothing to separate: no [separate] words")
    built = build_subgroup_graph(spec)
    stages = {"subgroup_graph": built.graph}
    for j, end in enumerate(built.separator_ends, start=1):
        if end == built.graph.base:
            return RunOutcome(
                3,
                {"rejected": True, "reason": "GammaClosed", "separator_index": j,
                 "detail": f"word g{j} already lies in the subgroup"},
                stages,
            )
    verdict = hypothesis_check(built.graph, spec.free.rank)
    try:
        result = build_separating_cover(
            spec, built.graph, verdict, signs=sign_vector, max_prime=max_prime
        )
    except HypothesisNotSatisfiedError as err:
        return RunOutcome(
            2,
            {"rejected": True, "reason": "HypothesisNotSatisfied", "detail": str(err)},
            stages,
        )
    stages.update(result.stages)

    certificate = _certificate(spec, built, result)
    if verify_level == "full":
        _full_verification(spec, built.graph, sys.stderr)
    return RunOutcome(0, certificate, stages)


def _certificate(spec, built, result) -> dict:
    graph = result.cover.graph
    plan = result.plan
    positions = _certificate_positions(graph)
    base_point = positions[result.cover.embedding[built.graph.base]]

    if not _is_prime_certificate(plan.degree):
        raise AssertionError("cover degree is not prime")
    order = permgroup.bsgs_order(list(result.images.values()), plan.degree)
    expected = math.factorial(plan.degree)
    if result.image_type == "alternating":
        expected //= 2
    if order != expected:
        raise AssertionError("image order does not match its classification")

    for word in spec.subgroup_words:
        if word_action(result.images, word, base_point) != base_point:
            raise AssertionError("a subgroup generator image moves the base point")

    separations = []
    for j, word in enumerate(spec.separate_words, start=1):
        moved = word_action(result.images, word, base_point)
        end_vertex = result.cover.embedding[built.separator_ends[j - 1]]
        if moved != positions[end_vertex]:
            raise AssertionError("separator action disagrees with its traced path")
        if moved == base_point:
            raise AssertionError("separator image fixes the base point")
        separations.append(
            {"word": word_str(word), "base_image_vertex": moved + 1, "separated": True}
        )

    _check_cover_certificates(spec, graph)

    _orbits, transitive = permgroup.orbit_transitive(
        list(result.images.values()), plan.degree
    )
    if not transitive:
        raise AssertionError("accepted image must act transitively")

    images_cycles = {
        name: permgroup.format_cycles(perm) for name, perm in result.images.items()
    }
    return {
        "degree": plan.degree,
        "prime": True,
        "image_type": result.image_type,
        "base_point": base_point + 1,
        "generator_images": images_cycles,
        "separations": separations,
        "pipeline_stats": {
            "k": plan.base_size,
            "n": plan.chain_length,
            "retries": result.retries,
            "vertex_counts": {
                "subgroup_graph": len(built.graph.vertices),
                "component_covers": len(result.stages["component_covers"].vertices),
                "precover": len(result.stages["precover"].vertices),
                "cover": len(graph.vertices),
            },
            "move_letter": f"x{result.params.move_letter}",
            "move_support": result.move_support,
            "transitive": transitive,
        },
    }


def _is_prime_certificate(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _check_cover_certificates(spec, graph: LabeledGraph):
    """Invariants of an accepted cover: saturated for both alphabets,
    connected, and every y-component a coset graph."""
    table = spec.finite
    if saturation_defects(graph, x_alphabet(spec.free.rank)):
        raise AssertionError("cover has x-saturation defects")
    if saturation_defects(graph, y_alphabet(table.num_generators)):
        raise AssertionError("cover has y-saturation defects")
    if not is_connected(graph):
        raise AssertionError("cover is not connected")
    for component, _anchor in components(graph, "y"):
        cover, embedding = embed_Y_component(table, component)
        if len(embedding) != len(cover.vertices):
            raise AssertionError("a y-component is not a full coset graph")


def _full_verification(spec, graph, stream):
    decomposition = kurosh_decompose(graph, spec.finite)
    report = verify_intersection(graph, spec.finite, spec.free.rank, decomposition, 4)
    checked = sum(c.checked for c in report.checks)
    print(
        f"verify: factors={len(report.checks)} checks={checked} "
        f"counterexamples={len(report.counterexamples)}",
        file=stream,
    )
    if not report.ok:
        raise AssertionError("factor intersection verification found counterexamples")


def _parse_sign_vector(text: str):
    signs = []
    for token in text.split(","):
        token = token.strip()
        if token in ("+1", "1"):
            signs.append(1)
        elif token == "-1":
            signs.append(-1)
        else:
            raise ValueError(f"bad sign {token!r} (want +1 or -1)")
    return tuple(signs)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = _Parser(
        prog="altsep",
        description=(
            "Separate elements from a finitely generated subgroup of a free "
            "product (free group * finite group) by a surjection onto an "
            "alternating or symmetric group."),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sep = sub.add_parser("separate", help="run the pipeline on a problem file")
    sep.add_argument("file", help="problem file")
    sep.add_argument("--emit-dot", metavar="DIR",
                     help="write one DOT file per pipeline stage into DIR")
    sep.add_argument("--sign-vector", metavar="S",
                     help="comma-separated +1/-1 per free generator (default all +1)")
    sep.add_argument("--max-prime", type=int, default=100000,
                     help="largest prime degree to try before giving up")
    sep.add_argument("--verify-level", choices=("fast", "full"), default="fast",
                     help="'full' additionally verifies factor intersections")

    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"altsep: error: {err}", file=sys.stderr)
        return 1

    try:
        text = Path(args.file).read_text()
    except OSError as err:
        print(f"altsep: error: {err}", file=sys.stderr)
        return 1
    try:
        spec = parse_problem(text)
        signs = _parse_sign_vector(args.sign_vector) if args.sign_vector else None
        if signs is not None and len(signs) != spec.free.rank:
            raise ValueError(
                f"sign vector must have length {spec.free.rank}, got {len(signs)}")
    except (ProblemFormatError, ValueError) as err:
        print(f"altsep: error: {err}", file=sys.stderr)
        return 1

    try:
        outcome = run_separate(
            spec,
            sign_vector=signs,
            max_prime=args.max_prime,
            verify_level=args.verify_level,
        )
    except CoverSearchExhaustedError as err:
        print(f"altsep: error: {err}", file=sys.stderr)
        return 1

    if args.emit_dot:
        directory = Path(args.emit_dot)
        directory.mkdir(parents=True, exist_ok=True)
        for name in STAGE_NAMES:
            if name in outcome.stages:
                path = directory / f"{name}.dot"
                path.write_text(export_dot(outcome.stages[name], name))

    print(json.dumps(outcome.document, indent=2))
    return outcome.exit_code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
