"""Dataset and artifact file formats.

Binary dataset format BIOSR1: ASCII magic ``BIOSR1\\n`` (7 bytes), then
little-endian u64 n, p, K, q, then p*K little-endian f64 grid coordinates
(row-major), then n*p f64 Y (row-major), then n*q f64 X (row-major).
CSV alternative: headerless grid.csv / Y.csv / X.csv with 17 significant
digits.  Matrix blocks (Sigma and friends) reuse the same magic + u64
rows, cols header ahead of the f64 payload.
"""

import json
import os

import numpy as np

from .model import Dataset, LocationGrid, ValidationError

MAGIC = b"BIOSR1\n"
CSV_FMT = "%.17g"


def write_biosr1(path, dataset):
    n, p, q, k = dataset.n, dataset.p, dataset.q, dataset.grid.K
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        np.array([n, p, k, q], dtype="<u8").tofile(fh)
        np.ascontiguousarray(dataset.grid.coords, dtype="<f8").tofile(fh)
        np.ascontiguousarray(dataset.Y, dtype="<f8").tofile(fh)
        np.ascontiguousarray(dataset.X, dtype="<f8").tofile(fh)


def read_biosr1(path):
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ValidationError(f"{path}: not a BIOSR1 file")
        header = np.fromfile(fh, dtype="<u8", count=4)
        if header.size != 4:
            raise ValidationError(f"{path}: truncated header")
        n, p, k, q = (int(v) for v in header)
        grid = np.fromfile(fh, dtype="<f8", count=p * k)
        Y = np.fromfile(fh, dtype="<f8", count=n * p)
        X = np.fromfile(fh, dtype="<f8", count=n * q)
    if grid.size != p * k or Y.size != n * p or X.size != n * q:
        raise ValidationError(f"{path}: truncated payload")
    return Dataset(
        Y=Y.reshape(n, p),
        X=X.reshape(n, q),
        grid=LocationGrid(coords=grid.reshape(p, k)),
    )


def write_matrix_csv(path, M):
    np.savetxt(path, np.atleast_2d(np.asarray(M)), fmt=CSV_FMT, delimiter=",")


def read_matrix_csv(path):
    return np.atleast_2d(np.loadtxt(path, delimiter=",", ndmin=2))


def write_csv_dataset(out_dir, dataset):
    write_matrix_csv(os.path.join(out_dir, "grid.csv"), dataset.grid.coords)
    write_matrix_csv(os.path.join(out_dir, "Y.csv"), dataset.Y)
    write_matrix_csv(os.path.join(out_dir, "X.csv"), dataset.X)


def read_csv_dataset(in_dir):
    for name in ("grid.csv", "Y.csv", "X.csv"):
        if not os.path.exists(os.path.join(in_dir, name)):
            raise ValidationError(f"{in_dir}: missing {name}")
    return Dataset(
        Y=read_matrix_csv(os.path.join(in_dir, "Y.csv")),
        X=read_matrix_csv(os.path.join(in_dir, "X.csv")),
        grid=LocationGrid(coords=read_matrix_csv(os.path.join(in_dir, "grid.csv"))),
    )


def load_dataset(path):
    """BIOSR1 file or a directory holding the CSV triple."""
    if os.path.isdir(path):
        return read_csv_dataset(path)
    if not os.path.exists(path):
        raise ValidationError(f"{path}: no such dataset")
    return read_biosr1(path)


def write_f64_block(path, M):
    """One f64 matrix with a BIOSR1-style header (magic, u64 rows, cols)."""
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        np.array(M.shape, dtype="<u8").tofile(fh)
        np.ascontiguousarray(M, dtype="<f8").tofile(fh)


def read_f64_block(path):
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValidationError(f"{path}: not a BIOSR1-style block")
        shape = np.fromfile(fh, dtype="<u8", count=2)
        if shape.size != 2:
            raise ValidationError(f"{path}: truncated header")
        rows, cols = (int(v) for v in shape)
        data = np.fromfile(fh, dtype="<f8", count=rows * cols)
    if data.size != rows * cols:
        raise ValidationError(f"{path}: truncated payload")
    return data.reshape(rows, cols)


def rle_encode(mask):
    """Run-length encode a boolean vector: first value + run lengths."""
    mask = np.asarray(mask).astype(bool).ravel()
    if mask.size == 0:
        return {"first": 0, "runs": []}
    changes = np.flatnonzero(mask[1:] != mask[:-1]) + 1
    bounds = np.concatenate([[0], changes, [mask.size]])
    return {
        "first": int(mask[0]),
        "runs": [int(b - a) for a, b in zip(bounds[:-1], bounds[1:])],
    }


def rle_decode(encoded):
    runs = encoded["runs"]
    value = bool(encoded["first"])
    out = np.empty(sum(runs), dtype=bool)
    pos = 0
    for run in runs:
        out[pos : pos + run] = value
        pos += run
        value = not value
    return out


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
