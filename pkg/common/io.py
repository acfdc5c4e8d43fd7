import csv
import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from common.errors import InvalidInput, MatrixParseError

__all__ = ["read_matrix", "write_matrix", "read_json", "write_json"]

PathLike = Union[str, Path]


def read_matrix(path: PathLike) -> np.ndarray:
    """
    Lee una matriz de un CSV sin encabezado (una fila de la matriz por línea).

    Siempre devuelve un arreglo 2-D; un vector escrito como columna queda de n×1.
    Los errores de formato indican fila y columna (contando desde 1), también
    los bytes que no son UTF-8 válido.
    """
    path = Path(path)
    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line_start = raw.rfind(b"\n", 0, exc.start) + 1
        row, column = raw.count(b"\n", 0, exc.start) + 1, raw.count(b",", line_start, exc.start) + 1
        raise MatrixParseError(path, row, column, f"el byte 0x{raw[exc.start]:02x} no es UTF-8 válido") from None
    rows = []
    for i, record in enumerate(csv.reader(text.splitlines()), start=1):
        if not record or all(cell.strip() == "" for cell in record):
            continue
        row = []
        for j, cell in enumerate(record, start=1):
            try:
                row.append(float(cell))
            except ValueError:
                raise MatrixParseError(path, i, j, f"'{cell}' no es un número") from None
        if rows and len(row) != len(rows[0]):
            raise MatrixParseError(path, i, len(row), f"se esperaban {len(rows[0])} columnas y hay {len(row)}")
        rows.append(row)
    if not rows:
        raise InvalidInput(f"{path}: el archivo no contiene datos.")
    return np.array(rows, dtype=float)


def write_matrix(path: PathLike, matrix) -> Path:
    """Escribe una matriz (o un vector, como columna) en CSV con floats exactos."""
    path = Path(path)
    data = np.asarray(matrix, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in data:
            writer.writerow([repr(float(v)) for v in row])
    return path


def _to_jsonable(value: Any):
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, float) and not np.isfinite(value):
        # JSON no tiene NaN ni infinitos
        return None
    return value


def write_json(path: PathLike, payload: Any) -> Path:
    """Escribe JSON en UTF-8 con el orden de claves de quien lo produce."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(_to_jsonable(payload), f, indent=2, ensure_ascii=False, allow_nan=False)
        f.write("\n")
    return path


def read_json(path: PathLike) -> Any:
    with open(path, encoding="utf-8") as f:
        return json.load(f)
