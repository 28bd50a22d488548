"""Core volumetric data types and voxel-level utilities.

Conventions used everywhere in this package:

* A volume with dims (nx, ny, nz) is stored as a C-order numpy array of
  shape (nz, ny, nx), so ``values.ravel()`` enumerates voxels x-fastest,
  then y, then z.  ``values[z]`` is the axial slice at index z, a 2D
  plane of shape (ny, nx).
* Voxel data is float32 (uint8 for binary masks); metric accumulation
  happens in float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CHANNEL_NAMES = ("t1_pre_cube", "t1_post_cube", "t1_post_bravo", "flair")


def _check_geometry(dims, spacing):
    if len(dims) != 3 or any(int(d) <= 0 for d in dims):
        raise ValueError(f"dims must be three positive integers, got {dims!r}")
    if len(spacing) != 3 or any(not (float(s) > 0) for s in spacing):
        raise ValueError(f"spacing must be three positive reals, got {spacing!r}")
    return tuple(int(d) for d in dims), tuple(float(s) for s in spacing)


@dataclass(frozen=True, eq=False)
class VoxelGrid:
    """3D scalar field with physical voxel spacing in mm.

    ``values`` has shape (nz, ny, nx) for dims (nx, ny, nz); see module
    docstring for the linear order.  Instances are value objects: do not
    mutate ``values`` after construction.
    """

    dims: tuple
    spacing: tuple
    values: np.ndarray

    def __post_init__(self):
        dims, spacing = _check_geometry(self.dims, self.spacing)
        values = np.ascontiguousarray(self.values, dtype=np.float32)
        nx, ny, nz = dims
        if values.shape != (nz, ny, nx):
            raise ValueError(
                f"values shape {values.shape} does not match dims {dims} "
                f"(expected (nz, ny, nx) = {(nz, ny, nx)})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "values", values)

    def slice_at(self, z: int) -> np.ndarray:
        """Axial plane (ny, nx) at slice index z."""
        return self.values[z]


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Binary volume (values strictly 0/1, stored uint8)."""

    dims: tuple
    spacing: tuple
    values: np.ndarray

    def __post_init__(self):
        dims, spacing = _check_geometry(self.dims, self.spacing)
        values = np.ascontiguousarray(self.values, dtype=np.uint8)
        nx, ny, nz = dims
        if values.shape != (nz, ny, nx):
            raise ValueError(
                f"mask shape {values.shape} does not match dims {dims}"
            )
        if not np.all((values == 0) | (values == 1)):
            raise ValueError("mask values must be strictly 0 or 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "values", values)

    def slice_at(self, z: int) -> np.ndarray:
        return self.values[z]

    def voxel_count(self) -> int:
        return int(self.values.sum(dtype=np.int64))


@dataclass(frozen=True, eq=False)
class ProbabilityMap:
    """Per-voxel probability volume, values in [0, 1].

    Producers guarantee value 0 at every voxel outside the associated
    brain mask; the constructor checks the range invariant only.
    """

    dims: tuple
    spacing: tuple
    values: np.ndarray

    def __post_init__(self):
        dims, spacing = _check_geometry(self.dims, self.spacing)
        values = np.ascontiguousarray(self.values, dtype=np.float32)
        nx, ny, nz = dims
        if values.shape != (nz, ny, nx):
            raise ValueError(
                f"values shape {values.shape} does not match dims {dims}"
            )
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "values", values)

    def slice_at(self, z: int) -> np.ndarray:
        return self.values[z]


@dataclass(frozen=True, eq=False)
class MultiSequenceStudy:
    """Four co-registered channels plus brain mask and ground truth.

    Channel order is fixed: t1_pre_cube, t1_post_cube, t1_post_bravo,
    flair.  All five grids share dims and spacing, every ground-truth
    voxel lies inside the brain mask, and ``n_lesions`` is the number of
    connected ground-truth components (the generator guarantees the
    count; it is not recomputed here).
    """

    study_id: str
    channels: tuple
    brain_mask: BinaryMask
    gt_mask: BinaryMask
    n_lesions: int

    def __post_init__(self):
        if len(self.channels) != 4:
            raise ValueError(f"expected 4 channels, got {len(self.channels)}")
        object.__setattr__(self, "channels", tuple(self.channels))
        dims = self.channels[0].dims
        spacing = self.channels[0].spacing
        for grid in (*self.channels, self.brain_mask, self.gt_mask):
            if grid.dims != dims or grid.spacing != spacing:
                raise ValueError("all study grids must share dims and spacing")
        if np.any(self.gt_mask.values > self.brain_mask.values):
            raise ValueError("ground-truth mask must lie inside the brain mask")
        if self.n_lesions < 1:
            raise ValueError("studies must contain at least one lesion")

    @property
    def dims(self):
        return self.channels[0].dims

    @property
    def spacing(self):
        return self.channels[0].spacing


def apply_brain_mask(grid: VoxelGrid, mask: BinaryMask) -> VoxelGrid:
    """Zero every voxel outside the mask, keep in-mask voxels unchanged."""
    if grid.dims != mask.dims:
        raise ValueError(f"dimension mismatch: grid {grid.dims} vs mask {mask.dims}")
    return VoxelGrid(grid.dims, grid.spacing, grid.values * mask.values)


def component_volume_mm3(voxel_count: int, spacing) -> float:
    """Physical volume of ``voxel_count`` voxels at the given spacing."""
    if voxel_count < 0:
        raise ValueError("voxel_count must be non-negative")
    sx, sy, sz = spacing
    return float(voxel_count) * float(sx) * float(sy) * float(sz)


def resize_bilinear(plane: np.ndarray, target=(256, 256)) -> np.ndarray:
    """Bilinear resize of a 2D plane to ``target`` (rows, cols).

    Uses half-pixel-center alignment: a destination pixel d samples the
    source at (d + 0.5) * (in / out) - 0.5, with coordinates clamped to
    the valid range (edge replication).  An input already at the target
    size is returned as-is apart from dtype normalization.
    """
    plane = np.asarray(plane)
    if plane.ndim != 2 or plane.shape[0] < 1 or plane.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2D plane, got shape {plane.shape}")
    th, tw = int(target[0]), int(target[1])
    if th < 1 or tw < 1:
        raise ValueError(f"target size must be positive, got {target!r}")
    h, w = plane.shape
    if (h, w) == (th, tw):
        return np.asarray(plane, dtype=np.float32)

    src = plane.astype(np.float64, copy=False)
    yc = np.clip((np.arange(th, dtype=np.float64) + 0.5) * (h / th) - 0.5, 0.0, h - 1.0)
    xc = np.clip((np.arange(tw, dtype=np.float64) + 0.5) * (w / tw) - 0.5, 0.0, w - 1.0)
    y0 = np.floor(yc).astype(np.intp)
    x0 = np.floor(xc).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (yc - y0)[:, None]
    fx = (xc - x0)[None, :]

    out = (
        src[np.ix_(y0, x0)] * (1.0 - fy) * (1.0 - fx)
        + src[np.ix_(y0, x1)] * (1.0 - fy) * fx
        + src[np.ix_(y1, x0)] * fy * (1.0 - fx)
        + src[np.ix_(y1, x1)] * fy * fx
    )
    return out.astype(np.float32)
