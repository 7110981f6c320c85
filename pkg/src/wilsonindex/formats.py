"""On-disk formats.

WGF1 (gauge config): three ASCII header lines

    WGF1
    <d> <N> <rank>
    <one free-form comment line>

followed by a binary payload of little-endian IEEE-754 doubles: links in
(site lexicographic, direction, row-major matrix entry) order, each complex
entry stored as real then imaginary part.  Readers validate unitarity of
every link to 1e-8 and reject the file otherwise.

WUT1 (unitary tuple): same layout with header "WUT1" and "<d> <n>", and
the payload holding d matrices of size n x n.

Random link perturbations elsewhere in the package use numpy's
default_rng (PCG64) so that seeded configurations are reproducible.
"""

from __future__ import annotations

import numpy as np

from .gauge import GaugeField, make_geometry
from .ktheory import UnitaryTuple

_UNITARITY_TOL = 1e-8


def _encode(mats: np.ndarray) -> bytes:
    flat = np.ascontiguousarray(mats, dtype=complex).reshape(-1)
    out = np.empty(2 * flat.size, dtype="<f8")
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return out.tobytes()


def _decode(payload: bytes, shape) -> np.ndarray:
    raw = np.frombuffer(payload, dtype="<f8")
    expected = 2 * int(np.prod(shape))
    if raw.size != expected:
        raise ValueError(f"payload size mismatch: got {raw.size} doubles, "
                         f"expected {expected}")
    return (raw[0::2] + 1j * raw[1::2]).reshape(shape)


def _check_unitary(mats, what: str) -> None:
    r = mats.shape[-1]
    eye = np.eye(r)
    dev = np.abs(np.einsum("...ij,...kj->...ik", mats, mats.conj()) - eye)
    if np.max(dev) > _UNITARITY_TOL:
        raise ValueError(f"{what} failed unitarity validation")


def write_gauge_field(f: GaugeField, path, comment: str = "gauge config") -> None:
    with open(path, "wb") as fh:
        fh.write(b"WGF1\n")
        fh.write(f"{f.geometry.d} {f.geometry.N} {f.rank}\n".encode())
        fh.write((comment.replace("\n", " ") + "\n").encode())
        fh.write(_encode(f.links))


def read_gauge_field(path) -> GaugeField:
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"WGF1":
            raise ValueError("not a WGF1 file")
        d, N, rank = map(int, fh.readline().split())
        fh.readline()  # comment
        geom = make_geometry(d, N)
        links = _decode(fh.read(), (geom.n_sites, d, rank, rank))
    _check_unitary(links, "link matrices")
    return GaugeField(geom, rank, links, None)


def write_unitary_tuple(t: UnitaryTuple, path, comment: str = "unitary tuple") -> None:
    with open(path, "wb") as fh:
        fh.write(b"WUT1\n")
        fh.write(f"{t.d} {t.n}\n".encode())
        fh.write((comment.replace("\n", " ") + "\n").encode())
        fh.write(_encode(np.stack(t.unitaries)))


def read_unitary_tuple(path) -> UnitaryTuple:
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"WUT1":
            raise ValueError("not a WUT1 file")
        d, n = map(int, fh.readline().split())
        fh.readline()  # comment
        mats = _decode(fh.read(), (d, n, n))
    _check_unitary(mats, "tuple matrices")
    return UnitaryTuple.from_matrices(list(mats), utol=_UNITARITY_TOL)
