"""Parser for sequence-definition files.

Grammar (one statement per line, ``#`` starts a comment)::

    file      := (blank | comment | section)*
    section   := "[" kind WS name "]" NL (key "=" value NL)*
    kind      := "sequence" | "chain" | "poly"
    name      := [A-Za-z_][A-Za-z0-9_.-]*

    sequence keys: coeffs (required; a0 a1 ... a_{d-1}), initial (required;
                   R(1) ... R(d)), inhom (default 0), order (optional, checked)
    chain keys:    levels (required; names of sequences, outermost first)
    poly keys:     coefficients (required; monic, highest degree first),
                   irreducible (yes/no, default yes)

Integer lists are separated by whitespace and/or commas and may be
arbitrarily long integers.  Every sequence name also acts as a one-level
chain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import InvalidSpec, SequenceFileError
from .ilrs import CompositionChain, IlrsSpec, validate_ilrs
from .trace import MinPoly

_SECTION = re.compile(r"^\[\s*(sequence|chain|poly)\s+([A-Za-z_][A-Za-z0-9_.-]*)\s*\]$")
_KEYVAL = re.compile(r"^([A-Za-z_]+)\s*=\s*(.*)$")

_ALLOWED = {
    "sequence": {"order", "coeffs", "inhom", "initial"},
    "chain": {"levels"},
    "poly": {"coefficients", "irreducible"},
}
_REQUIRED = {
    "sequence": {"coeffs", "initial"},
    "chain": {"levels"},
    "poly": {"coefficients"},
}


@dataclass
class SequenceFile:
    entries: dict[str, IlrsSpec] = field(default_factory=dict)
    chains: dict[str, CompositionChain] = field(default_factory=dict)
    polynomials: dict[str, MinPoly] = field(default_factory=dict)

    def chain(self, name: str) -> CompositionChain:
        """Named chain, or a one-level chain for a sequence name."""
        if name in self.chains:
            return self.chains[name]
        if name in self.entries:
            return CompositionChain((self.entries[name],))
        raise KeyError(f"no chain or sequence named {name!r}")

    def sequence(self, name: str) -> IlrsSpec:
        if name not in self.entries:
            raise KeyError(f"no sequence named {name!r}")
        return self.entries[name]

    def poly(self, name: str) -> MinPoly:
        if name not in self.polynomials:
            raise KeyError(f"no polynomial named {name!r}")
        return self.polynomials[name]


def _ints(value: str, lineno: int, path) -> list[int]:
    parts = [t for t in re.split(r"[\s,]+", value.strip()) if t]
    try:
        return [int(t) for t in parts]
    except ValueError:
        raise SequenceFileError(f"expected integers, got {value!r}", lineno, path) from None


def parse_sequence_file(text: str, path=None) -> SequenceFile:
    sections: list[tuple[str, str, int, dict[str, tuple[str, int]]]] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = (m.group(1), m.group(2), lineno, {})
            sections.append(current)
            continue
        if line.startswith("["):
            raise SequenceFileError(f"malformed section header {line!r}", lineno, path)
        m = _KEYVAL.match(line)
        if not m:
            raise SequenceFileError(f"expected 'key = value', got {line!r}", lineno, path)
        if current is None:
            raise SequenceFileError("key outside of any section", lineno, path)
        kind, name, _, body = current
        key = m.group(1)
        if key not in _ALLOWED[kind]:
            raise SequenceFileError(f"unknown key {key!r} in [{kind} {name}]", lineno, path)
        if key in body:
            raise SequenceFileError(f"duplicate key {key!r} in [{kind} {name}]", lineno, path)
        body[key] = (m.group(2), lineno)

    out = SequenceFile()
    seen: dict[str, int] = {}
    for kind, name, lineno, body in sections:
        if name in seen:
            raise SequenceFileError(f"name {name!r} already defined on line {seen[name]}",
                                    lineno, path)
        seen[name] = lineno
        missing = _REQUIRED[kind] - body.keys()
        if missing:
            raise SequenceFileError(f"[{kind} {name}] is missing {sorted(missing)}", lineno, path)
        if kind == "sequence":
            raw = {"name": name}
            for key, (value, ln) in body.items():
                nums = _ints(value, ln, path)
                if key in ("order", "inhom"):
                    if len(nums) != 1:
                        raise SequenceFileError(f"{key} takes a single integer", ln, path)
                    raw[key] = nums[0]
                else:
                    raw[key] = nums
            try:
                out.entries[name] = validate_ilrs(raw)
            except InvalidSpec as exc:
                raise SequenceFileError(f"[sequence {name}]: {exc}", lineno, path) from None
        elif kind == "poly":
            value, ln = body["coefficients"]
            irreducible = body.get("irreducible", ("yes", ln))[0].strip().lower()
            if irreducible not in ("yes", "no", "true", "false"):
                raise SequenceFileError("irreducible must be yes or no", ln, path)
            try:
                out.polynomials[name] = MinPoly.from_coefficients(
                    _ints(value, ln, path),
                    irreducible_asserted=irreducible in ("yes", "true"),
                    name=name,
                )
            except ValueError as exc:
                raise SequenceFileError(f"[poly {name}]: {exc}", ln, path) from None

    for kind, name, lineno, body in sections:
        if kind != "chain":
            continue
        value, ln = body["levels"]
        refs = value.split()
        if not refs:
            raise SequenceFileError("levels must name at least one sequence", ln, path)
        unknown = [r for r in refs if r not in out.entries]
        if unknown:
            raise SequenceFileError(f"unknown sequence(s) {unknown} in chain {name!r}", ln, path)
        try:
            out.chains[name] = CompositionChain(tuple(out.entries[r] for r in refs))
        except InvalidSpec as exc:
            raise SequenceFileError(f"[chain {name}]: {exc}", ln, path) from None
    return out


def load_sequence_file(path: Union[str, Path, None] = None) -> SequenceFile:
    """Load ``path``, or the bundled standard definitions when ``path`` is None."""
    if path is None:
        text = resources.files("primefree").joinpath("data/standard.seq").read_text()
        return parse_sequence_file(text, "<standard.seq>")
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SequenceFileError(f"cannot read: {exc.strerror}", None, path) from None
    return parse_sequence_file(text, path)
