"""File formats: bag datasets, sparse feature exports, model persistence.

Dataset format: UTF-8 text, one instance per line as
`bag_id,label,f1,...,fd`, no header. `#` starts a comment line; blank
lines are ignored. Label tokens `1` and `+1` mean positive, `-1` and
`0` negative. A bag's lines need not be consecutive; grouping is by id
in order of first appearance. The writer emits the canonical grouped
form with shortest round-trip-exact floats, so write(parse(f)) is a
canonicalization and parse(write(ds)) returns an equal dataset.

Feature export is the classic sparse text form, one bag per line:
label followed by 1-based `index:value` pairs for nonzero coordinates.

Model files are versioned plain text; see save_model.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import IO, Iterable, Sequence

from .brv import BagReferenceVector
from .core import Bag, BagLabel, Dataset, validate_dataset
from .dist import DistParams
from .errors import (
    InconsistentBagLabel,
    LengthMismatch,
    ParseError,
    UnlabeledBag,
    VersionMismatch,
)
from .svm import LinearModel

_MODEL_MAGIC = "mibrv-model"
_MODEL_VERSION = "v1"

_POSITIVE_TOKENS = {"1", "+1"}
_NEGATIVE_TOKENS = {"-1", "0"}


def _format_float(x: float) -> str:
    # repr() of a float is the shortest decimal that parses back exactly
    return repr(float(x))


def _open_text(source, mode: str):
    if isinstance(source, (str, Path)):
        return open(source, mode, encoding="utf-8"), True
    return source, False


def _parse_label(token: str, line_no: int) -> BagLabel:
    if token in _POSITIVE_TOKENS:
        return BagLabel.POSITIVE
    if token in _NEGATIVE_TOKENS:
        return BagLabel.NEGATIVE
    raise ParseError(f"unknown label token {token!r}", line=line_no)


def _parse_feature(token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"bad feature value {token!r}", line=line_no) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite feature value {token!r}", line=line_no)
    return value


def parse_dataset(source) -> Dataset:
    """Read a dataset file (path or open text stream) and validate it."""
    stream, owned = _open_text(source, "r")
    order: list[str] = []
    rows: dict[str, list[list[float]]] = {}
    labels: dict[str, BagLabel] = {}
    try:
        for line_no, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) < 3:
                raise ParseError(
                    f"expected `bag_id,label,f1,...`, got {len(fields)} fields", line=line_no
                )
            bag_id, label_token = fields[0], fields[1]
            label = _parse_label(label_token, line_no)
            feats = [_parse_feature(tok, line_no) for tok in fields[2:]]
            if bag_id not in rows:
                order.append(bag_id)
                rows[bag_id] = []
                labels[bag_id] = label
            else:
                if labels[bag_id] != label:
                    raise InconsistentBagLabel(
                        f"bag {bag_id!r} was {int(labels[bag_id])}, now {int(label)}",
                        line=line_no,
                    )
                if len(feats) != len(rows[bag_id][0]):
                    raise ParseError(
                        f"bag {bag_id!r} had {len(rows[bag_id][0])} features, now {len(feats)}",
                        line=line_no,
                    )
            rows[bag_id].append(feats)
    finally:
        if owned:
            stream.close()
    if not order:
        raise ParseError("no data lines found")
    bags = [Bag(id=bid, features=rows[bid], label=labels[bid]) for bid in order]
    return validate_dataset(Dataset.from_bags(bags))


def write_dataset(ds: Dataset, sink) -> None:
    """Write the canonical form: bags in order, instances in order."""
    stream, owned = _open_text(sink, "w")
    try:
        for bag in ds.bags:
            if bag.label is None:
                raise UnlabeledBag(f"bag {bag.id!r} has no label to write")
            token = "1" if bag.label == BagLabel.POSITIVE else "-1"
            for row in bag.features:
                feats = ",".join(_format_float(v) for v in row)
                stream.write(f"{bag.id},{token},{feats}\n")
    finally:
        if owned:
            stream.close()


def dumps_dataset(ds: Dataset) -> str:
    import io as _stdio

    buf = _stdio.StringIO()
    write_dataset(ds, buf)
    return buf.getvalue()


def export_brv(vectors: Sequence[BagReferenceVector], labels: Sequence[BagLabel | None],
               sink) -> None:
    """Write one sparse line per bag: label then 1-based index:value pairs.

    Unlabeled bags get the placeholder label 0 (external tools ignore
    it at prediction time).
    """
    vectors = list(vectors)
    labels = list(labels)
    if len(vectors) != len(labels):
        raise LengthMismatch(f"{len(vectors)} vectors but {len(labels)} labels")
    stream, owned = _open_text(sink, "w")
    try:
        for vec, label in zip(vectors, labels):
            if label is None:
                token = "0"
            else:
                token = "1" if BagLabel(label) == BagLabel.POSITIVE else "-1"
            parts = [token]
            for idx, value in enumerate(vec.values, start=1):
                if value != 0.0:
                    parts.append(f"{idx}:{_format_float(value)}")
            stream.write(" ".join(parts) + "\n")
    finally:
        if owned:
            stream.close()


def save_model(model: LinearModel, sink) -> None:
    """Versioned plain-text model format.

    Header `mibrv-model v1 dim=<D> bias_scale=<s>`, a `bias` line, one
    `w[i]` line per weight, then the featurizer metadata lines `k`,
    `ops`, `normalize` and `refs` (`-` marks absent metadata). Floats
    use the shortest representation that parses back to the identical
    double, so save/load round-trips bit-exactly.
    """
    stream, owned = _open_text(sink, "w")
    try:
        stream.write(
            f"{_MODEL_MAGIC} {_MODEL_VERSION} dim={model.dim} "
            f"bias_scale={_format_float(model.bias_scale)}\n"
        )
        stream.write(f"bias {_format_float(model.bias)}\n")
        for i, w in enumerate(model.weights):
            stream.write(f"w[{i}] {_format_float(w)}\n")
        if model.params is None:
            stream.write("k -\nops -\n")
        else:
            stream.write(f"k {model.params.k}\n")
            stream.write(f"ops {','.join(str(op.value) for op in model.params.operators)}\n")
        stream.write(f"normalize {model.normalize}\n")
        stream.write(f"refs {model.ref_fingerprint or '-'}\n")
    finally:
        if owned:
            stream.close()


def _take_line(lines: list[str], pos: int, what: str) -> tuple[str, int]:
    if pos >= len(lines):
        raise ParseError(f"model file ended early, expected {what}", line=pos + 1)
    return lines[pos].rstrip("\n"), pos + 1


def _keyed_float(line: str, key: str, line_no: int) -> float:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise ParseError(f"expected `{key} <float>`, got {line!r}", line=line_no)
    try:
        return float(parts[1])
    except ValueError:
        raise ParseError(f"bad float {parts[1]!r}", line=line_no) from None


def load_model(source) -> LinearModel:
    """Read a model written by save_model; checks the version header."""
    stream, owned = _open_text(source, "r")
    try:
        lines = stream.readlines()
    finally:
        if owned:
            stream.close()
    if not lines:
        raise VersionMismatch("empty model file")
    header = lines[0].split()
    if (
        len(header) != 4
        or header[0] != _MODEL_MAGIC
        or not header[2].startswith("dim=")
        or not header[3].startswith("bias_scale=")
    ):
        raise VersionMismatch(f"not a model file: {lines[0].rstrip()!r}")
    if header[1] != _MODEL_VERSION:
        raise VersionMismatch(f"unsupported model version {header[1]!r}")
    try:
        dim = int(header[2][len("dim="):])
        bias_scale = float(header[3][len("bias_scale="):])
    except ValueError:
        raise VersionMismatch(f"corrupt model header: {lines[0].rstrip()!r}") from None
    pos = 1
    line, pos = _take_line(lines, pos, "bias")
    bias = _keyed_float(line, "bias", pos)
    weights = []
    for i in range(dim):
        line, pos = _take_line(lines, pos, f"w[{i}]")
        weights.append(_keyed_float(line, f"w[{i}]", pos))
    line, pos = _take_line(lines, pos, "k")
    k_parts = line.split()
    if len(k_parts) != 2 or k_parts[0] != "k":
        raise ParseError(f"expected `k ...`, got {line!r}", line=pos)
    line2, pos = _take_line(lines, pos, "ops")
    ops_parts = line2.split()
    if len(ops_parts) != 2 or ops_parts[0] != "ops":
        raise ParseError(f"expected `ops ...`, got {line2!r}", line=pos)
    if k_parts[1] == "-" or ops_parts[1] == "-":
        params = None
    else:
        try:
            params = DistParams(
                k=int(k_parts[1]),
                operators=tuple(int(t) for t in ops_parts[1].split(",")),
            )
        except ValueError as exc:
            raise ParseError(f"bad featurizer parameters: {exc}", line=pos) from None
    line, pos = _take_line(lines, pos, "normalize")
    norm_parts = line.split()
    if len(norm_parts) != 2 or norm_parts[0] != "normalize":
        raise ParseError(f"expected `normalize ...`, got {line!r}", line=pos)
    line, pos = _take_line(lines, pos, "refs")
    refs_parts = line.split()
    if len(refs_parts) != 2 or refs_parts[0] != "refs":
        raise ParseError(f"expected `refs ...`, got {line!r}", line=pos)
    if any(l.strip() for l in lines[pos:]):
        raise ParseError("trailing content after model data", line=pos + 1)
    return LinearModel(
        weights=weights,
        bias=bias,
        bias_scale=bias_scale,
        ref_fingerprint="" if refs_parts[1] == "-" else refs_parts[1],
        params=params,
        normalize=norm_parts[1],
    )
