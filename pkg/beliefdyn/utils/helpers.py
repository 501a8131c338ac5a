import csv
import hashlib
import json
import logging

from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Sequence, Union

from beliefdyn.core.config import Config

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)

def digest_of(data: Any) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()[: Config.DIGEST_LENGTH]

def load_json(file_path: PathLike) -> Dict[str, Any]:
    with open(file_path, "r", encoding="utf-8") as f:
        return json.load(f)

def save_json(file_path: PathLike, data: Any) -> None:
    with open(file_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write("\n")

def read_jsonl(file_path: PathLike) -> Iterator[Dict[str, Any]]:
    """Yields one parsed object per non-blank line."""
    with open(file_path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)

def write_jsonl(file_path: PathLike, rows: Iterable[Any]) -> None:
    with open(file_path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")))
            f.write("\n")

def fmt(value: Any) -> str:
    if isinstance(value, float):
        return Config.FLOAT_FORMAT.format(value)
    return str(value)

def write_csv(
    file_path: PathLike,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    comment: str = "",
) -> None:
    """Writes a CSV with fixed column order, 6-decimal floats and LF endings.

    A non-empty ``comment`` is emitted as a leading ``#`` line (digest and version stamp).
    """
    with open(file_path, "w", encoding="utf-8", newline="") as f:
        if comment:
            f.write(f"# {comment}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])

def read_csv_rows(file_path: PathLike) -> List[List[str]]:
    """Reads CSV rows, skipping ``#`` comment lines and blank lines."""
    with open(file_path, "r", encoding="utf-8", newline="") as f:
        lines = [line for line in f if line.strip() and not line.lstrip().startswith("#")]
    return [row for row in csv.reader(lines)]

def ensure_writable(paths: Iterable[PathLike], force: bool = False) -> List[Path]:
    """Returns the paths that already exist; raises FileExistsError unless ``force``."""
    existing = [Path(p) for p in paths if Path(p).exists()]
    if existing and not force:
        names = ", ".join(str(p) for p in existing)
        raise FileExistsError(f"refusing to overwrite existing file(s): {names} (use --force)")
    for p in existing:
        logger.warning("Overwriting %s", p)
    return existing
