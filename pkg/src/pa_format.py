"""
PA v1 text format.

    PA v1
    n=<int>
    d=<int>             (optional, the claimed minimum distance)
    base=<group descriptor>
    seed=<int>          (optional)
    note=<free text>    (optional)
    search=<json>       (optional, where an interrupted coset search resumes)
    reps:
    <one 0-indexed permutation per line>

'#' starts a comment. Over a nontrivial base the identity coset is implicit and
never written; a TRIVIAL base lists every permutation.
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from src.errors import BadPermutation, Malformed, MalformedPA
from src.groups import GroupKind, materialize, parse_descriptor
from src.perm_array import PermArray, SearchCheckpoint
from src.permutation import Permutation, parse_permutation

logger = logging.getLogger(__name__)

VERSION_TAG = "PA v1"
HEADER_KEYS = ("n", "d", "base", "seed", "note", "search")
REQUIRED_KEYS = ("n", "base")


def _content_lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _int_field(header: Dict[str, Tuple[int, str]], key: str) -> int:
    lineno, value = header[key]
    try:
        return int(value)
    except ValueError:
        raise Malformed(lineno, f"{key} must be an integer, got {value!r}", column=len(key) + 2)


def parse_pa(text: str, base_dir: Optional[Path] = None, one_indexed: bool = False) -> PermArray:
    lines = _content_lines(text)
    if not lines or lines[0][1] != VERSION_TAG:
        raise Malformed(lines[0][0] if lines else 1, f"expected version tag {VERSION_TAG!r}")

    header: Dict[str, Tuple[int, str]] = {}
    body_start = None
    for pos, (lineno, line) in enumerate(lines[1:], start=1):
        if line == "reps:":
            body_start = pos + 1
            break
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise Malformed(lineno, f"expected key=value, got {line!r}")
        if key not in HEADER_KEYS:
            raise Malformed(lineno, f"unknown header key {key!r}", column=1)
        if key in header:
            raise Malformed(lineno, f"duplicate header key {key!r}", column=1)
        header[key] = (lineno, value.strip())
    if body_start is None:
        raise Malformed(lines[-1][0], "missing 'reps:' section")
    for key in REQUIRED_KEYS:
        if key not in header:
            raise Malformed(lines[0][0], f"missing header key {key!r}")

    n = _int_field(header, "n")
    d = _int_field(header, "d") if "d" in header else None
    seed = _int_field(header, "seed") if "seed" in header else None
    note = header["note"][1] if "note" in header else ""
    search = None
    if "search" in header:
        lineno, value = header["search"]
        try:
            search = SearchCheckpoint.model_validate_json(value)
        except ValidationError as e:
            raise Malformed(lineno, f"unreadable search state: {e.error_count()} error(s)", column=len("search=") + 1)

    base_line, base_text = header["base"]
    try:
        descriptor = parse_descriptor(base_text, base_dir)
    except (MalformedPA, FileNotFoundError) as e:
        raise Malformed(base_line, str(e), column=len("base=") + 1)
    except BadPermutation as e:
        raise Malformed(base_line, f"generator file: {e}")
    if descriptor.degree != n:
        raise Malformed(header["n"][0], f"n={n} but base acts on {descriptor.degree} symbols")

    reps: List[Permutation] = []
    for lineno, line in lines[body_start:]:
        pi = parse_permutation(line, one_indexed=one_indexed, line=lineno)
        if pi.n != n:
            raise BadPermutation(f"degree {pi.n}, expected {n}", lineno)
        reps.append(pi)
    if descriptor.kind == GroupKind.TRIVIAL and len(set(reps)) != len(reps):
        raise Malformed(lines[body_start - 1][0], "explicit listing repeats a permutation")

    try:
        pa = PermArray(materialize(descriptor), reps, d=d, seed=seed, note=note, search=search)
        pa.check_distinct_cosets()
    except MalformedPA as e:
        raise Malformed(lines[body_start - 1][0], str(e))
    logger.debug(f"parsed {pa!r}")
    return pa


def serialize_pa(pa: PermArray) -> str:
    out = [VERSION_TAG, f"n={pa.n}"]
    if pa.d is not None:
        out.append(f"d={pa.d}")
    out.append(f"base={pa.base.descriptor.to_text()}")
    if pa.seed is not None:
        out.append(f"seed={pa.seed}")
    if pa.note:
        out.append(f"note={pa.note}")
    if pa.search is not None:
        out.append(f"search={pa.search.model_dump_json()}")
    out.append("reps:")
    rows = pa.reps if pa.is_explicit else pa.reps[1:]
    out.extend(r.to_text() for r in rows)
    return "\n".join(out) + "\n"


def read_pa(path: Path, one_indexed: bool = False) -> PermArray:
    path = Path(path)
    return parse_pa(path.read_text(), base_dir=path.parent, one_indexed=one_indexed)


def write_pa(pa: PermArray, path: Path) -> None:
    with open(path, "w", newline="\n") as handle:
        handle.write(serialize_pa(pa))
