"""Triangle meshes: topology checks, volume, binary STL in and out."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import MeshError

STL_HEADER = b"patterned structure muscle toolkit"


@dataclass
class TriangleMesh:
    vertices: np.ndarray  # (V, 3) float
    faces: np.ndarray  # (F, 3) int

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def triangle_points(self) -> np.ndarray:
        return self.vertices[self.faces]  # (F, 3, 3)

    def face_normals(self) -> np.ndarray:
        t = self.triangle_points()
        n = np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0])
        lens = np.linalg.norm(n, axis=1)
        lens[lens == 0] = 1.0
        return n / lens[:, None]

    def volume(self) -> float:
        """Signed volume by the divergence theorem; positive for outward winding."""
        t = self.triangle_points()
        return float(np.einsum("ij,ij->i", t[:, 0], np.cross(t[:, 1], t[:, 2])).sum() / 6.0)

    def area(self) -> float:
        t = self.triangle_points()
        return float(np.linalg.norm(np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0]), axis=1).sum() / 2)

    def ensure_outward(self) -> "TriangleMesh":
        if self.volume() < 0:
            self.faces = self.faces[:, ::-1]
        return self

    # -- topology -------------------------------------------------------------

    def directed_edges(self) -> np.ndarray:
        f = self.faces
        return np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])

    def is_watertight(self) -> bool:
        """Every undirected edge bounded by exactly two faces."""
        e = np.sort(self.directed_edges(), axis=1)
        _, counts = np.unique(e, axis=0, return_counts=True)
        return bool(len(e) > 0 and np.all(counts == 2))

    def is_orientation_consistent(self) -> bool:
        """Each directed edge appears exactly once (neighbors wind oppositely)."""
        e = self.directed_edges()
        _, counts = np.unique(e, axis=0, return_counts=True)
        return bool(len(e) > 0 and np.all(counts == 1))

    def component_count(self) -> int:
        if len(self.faces) == 0:
            return 0
        e = self.directed_edges()
        used = np.unique(self.faces)
        n = len(self.vertices)
        adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        ncomp, labels = connected_components(adj, directed=False)
        return int(len(np.unique(labels[used])))

    def canonical_order(self) -> "TriangleMesh":
        """Rotate each face to start at its smallest vertex, then sort faces.

        Winding is preserved; two meshes with the same triangle multiset become
        byte-identical after this.
        """
        f = self.faces
        shift = np.argmin(f, axis=1)
        rows = np.arange(len(f))[:, None]
        cols = (shift[:, None] + np.arange(3)) % 3
        f = f[rows, cols]
        key = np.lexsort((f[:, 2], f[:, 1], f[:, 0]))
        self.faces = f[key]
        return self

    # -- STL -------------------------------------------------------------------

    def write_stl(self, path) -> None:
        self.canonical_order()
        t = self.triangle_points().astype("<f4")
        n = np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0])
        lens = np.linalg.norm(n, axis=1)
        lens[lens == 0] = 1.0
        n = (n / lens[:, None]).astype("<f4")
        rec = np.zeros(
            len(t), dtype=[("n", "<f4", 3), ("v", "<f4", (3, 3)), ("attr", "<u2")]
        )
        rec["n"] = n
        rec["v"] = t
        with open(path, "wb") as fh:
            fh.write(STL_HEADER.ljust(80, b"\0"))
            fh.write(struct.pack("<I", len(t)))
            fh.write(rec.tobytes())

    @classmethod
    def read_stl(cls, path) -> "TriangleMesh":
        with open(path, "rb") as fh:
            raw = fh.read()
        if len(raw) >= 6 and raw[:5] == b"solid" and b"facet" in raw[:400]:
            return cls._read_stl_ascii(raw)
        if len(raw) < 84:
            raise MeshError(f"{path}: truncated STL, only {len(raw)} bytes (header needs 84)")
        (count,) = struct.unpack_from("<I", raw, 80)
        expected = 84 + 50 * count
        if len(raw) != expected:
            offset = min(len(raw), expected)
            raise MeshError(
                f"{path}: corrupt STL, expected {expected} bytes for {count} triangles, "
                f"got {len(raw)} (first discrepancy at byte {offset})"
            )
        rec = np.frombuffer(
            raw, dtype=[("n", "<f4", 3), ("v", "<f4", (3, 3)), ("attr", "<u2")], count=count,
            offset=84,
        )
        tris = rec["v"].astype(float)
        return cls._from_triangle_soup(tris)

    @classmethod
    def _read_stl_ascii(cls, raw: bytes) -> "TriangleMesh":
        tris = []
        cur = []
        for line in raw.decode("ascii", errors="replace").splitlines():
            parts = line.split()
            if parts[:1] == ["vertex"]:
                cur.append([float(v) for v in parts[1:4]])
                if len(cur) == 3:
                    tris.append(cur)
                    cur = []
        if not tris:
            raise MeshError("ASCII STL contains no triangles")
        return cls._from_triangle_soup(np.array(tris, dtype=float))

    @classmethod
    def _from_triangle_soup(cls, tris: np.ndarray) -> "TriangleMesh":
        flat = tris.reshape(-1, 3)
        verts, inverse = np.unique(flat.round(decimals=6), axis=0, return_inverse=True)
        faces = inverse.reshape(-1, 3)
        return cls(verts, faces)


@dataclass
class PatternedMesh:
    """Printable artifact: the welded union surface plus its provenance."""

    mesh: TriangleMesh
    cell_counts: tuple[int, int, int]
    provenance: dict = field(default_factory=dict)

    @property
    def triangles(self) -> np.ndarray:
        return self.mesh.triangle_points()
