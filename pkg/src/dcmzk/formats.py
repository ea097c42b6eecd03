"""Text file formats for groups and instances.

Points are 1-indexed in every file and 0-indexed in memory.

Group::

    degree 4
    2 1 3 4
    (1 2 3 4)

Instance (the ``tau:`` line is optional; when present the ``s:`` line holds
``sigma`` and the instance is normalized on load)::

    degree 3
    s: 3 2 1
    G:
    2 1 3
    H:
    1 3 2

"""

from __future__ import annotations

import hashlib

from .dcm import DcmInstance, normalize
from .errors import ParseError
from .permgroup import GeneratorSet
from .wire import format_perm, parse_perm


def _parse_degree(line: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != "degree":
        raise ParseError(f"expected 'degree <m>', got {line!r}")
    try:
        m = int(parts[1])
    except ValueError:
        raise ParseError(f"bad degree {parts[1]!r}") from None
    if m < 1:
        raise ParseError("degree must be >= 1")
    return m


def _content_lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def format_group(gens: GeneratorSet) -> str:
    return "\n".join([f"degree {gens.degree}", *map(format_perm, gens.generators)]) + "\n"


def parse_group(text: str) -> GeneratorSet:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty group file")
    m = _parse_degree(lines[0])
    return GeneratorSet(m, tuple(parse_perm(ln, m) for ln in lines[1:]))


def format_instance(inst: DcmInstance) -> str:
    out = [f"degree {inst.degree}", f"s: {format_perm(inst.s)}", "G:"]
    out += [format_perm(g) for g in inst.g_group.generators]
    out.append("H:")
    out += [format_perm(h) for h in inst.h_group.generators]
    return "\n".join(out) + "\n\n"


def parse_instance(text: str) -> DcmInstance:
    # stop at the first blank line after content
    body = []
    for raw in text.splitlines():
        if not raw.strip():
            if body:
                break
            continue
        if raw.lstrip().startswith("#"):
            continue
        body.append(raw.strip())
    if not body:
        raise ParseError("empty instance file")
    m = _parse_degree(body[0])
    fields: dict[str, str] = {}
    blocks: dict[str, list] = {}
    current = None
    for ln in body[1:]:
        key, sep, rest = ln.partition(":")
        key = key.strip()
        if sep and key in ("s", "sigma", "tau"):
            if key in fields or (key != "tau" and ("s" in fields or "sigma" in fields)):
                raise ParseError(f"duplicate {key!r} line")
            fields[key] = rest
            current = None
        elif sep and key in ("G", "H") and not rest.strip():
            if key in blocks:
                raise ParseError(f"duplicate {key} block")
            blocks[key] = []
            current = key
        elif current is not None:
            blocks[current].append(parse_perm(ln, m))
        else:
            raise ParseError(f"unexpected line {ln!r}")
    s_text = fields.get("s", fields.get("sigma"))
    if s_text is None:
        raise ParseError("missing 's:' line")
    for key in ("G", "H"):
        if key not in blocks:
            raise ParseError(f"missing {key}: block")
    s = parse_perm(s_text, m)
    g = GeneratorSet(m, tuple(blocks["G"]))
    h = GeneratorSet(m, tuple(blocks["H"]))
    if "tau" in fields:
        return normalize(s, parse_perm(fields["tau"], m), g, h)
    return DcmInstance(s, g, h)


def instance_digest(inst: DcmInstance) -> str:
    return hashlib.sha256(format_instance(inst).encode()).hexdigest()
