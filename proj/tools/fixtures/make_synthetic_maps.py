#!/usr/bin/env python3
"""Generates the synthetic UK (391 districts) and EU (116 regions) boundary
fixtures plus skewed, spatially clustered reference densities for each.

The tessellations are Lloyd-relaxed Voronoi cells clipped to coarse coastline
outlines, so they share exact vertices along interior borders like real
administrative boundary files. Output is deterministic for a fixed seed.

    python3 make_synthetic_maps.py ../../data
"""

import json
import math
import sys
from pathlib import Path

import numpy as np
from scipy.spatial import Voronoi
from shapely.geometry import MultiPolygon, Polygon, Point

# Coarse outlines, lon/lat degrees, counterclockwise.
GREAT_BRITAIN = [
    (-5.7, 50.0), (-4.2, 50.3), (-3.0, 50.6), (-1.5, 50.6), (0.3, 50.75),
    (1.4, 51.1), (1.75, 52.4), (1.2, 52.95), (0.2, 53.1), (-0.1, 53.6),
    (-0.5, 54.4), (-1.6, 55.6), (-2.5, 56.1), (-1.8, 57.5), (-3.2, 57.7),
    (-3.1, 58.6), (-5.0, 58.6), (-5.6, 57.6), (-5.8, 56.6), (-5.6, 55.3),
    (-4.8, 54.8), (-3.4, 54.9), (-3.0, 54.0), (-3.1, 53.3), (-4.6, 53.2),
    (-4.1, 52.4), (-5.2, 51.7), (-3.2, 51.4), (-4.5, 51.0), (-5.7, 50.0),
]

CONTINENTAL_EUROPE = [
    (-9.0, 37.0), (-6.0, 36.2), (-2.0, 36.7), (0.0, 38.8), (3.2, 41.9),
    (6.5, 43.1), (8.8, 44.3), (10.5, 43.0), (12.5, 41.5), (15.6, 38.2),
    (16.6, 39.5), (18.5, 40.1), (16.0, 41.6), (13.6, 43.6), (12.3, 45.3),
    (13.7, 45.7), (15.5, 43.8), (19.4, 41.9), (19.5, 40.0), (21.5, 37.0),
    (23.0, 36.5), (24.0, 38.2), (22.8, 40.5), (26.0, 40.8), (28.0, 41.6),
    (28.6, 43.7), (29.7, 45.2), (28.2, 48.3), (24.0, 50.8), (23.6, 52.5),
    (23.5, 53.9), (26.6, 55.7), (28.2, 56.2), (27.8, 57.5), (28.0, 59.4),
    (23.5, 59.2), (24.0, 57.3), (21.0, 57.0), (21.0, 55.3), (19.5, 54.4),
    (14.2, 54.0), (11.0, 54.0), (10.0, 54.8), (10.7, 55.5), (10.5, 57.6),
    (8.2, 56.8), (8.1, 55.5), (8.6, 54.0), (7.0, 53.6), (4.8, 53.0),
    (3.5, 51.6), (2.5, 51.1), (1.6, 50.9), (0.2, 49.6), (-1.6, 49.7),
    (-1.6, 48.6), (-4.7, 48.4), (-2.2, 47.2), (-1.2, 46.0), (-1.5, 43.4),
    (-8.0, 43.7), (-9.3, 42.9), (-8.8, 41.0), (-9.5, 38.8), (-9.0, 37.0),
]


def to_plane(lonlat, lat0):
    k = math.cos(math.radians(lat0))
    return np.array([(lon * k, lat) for lon, lat in lonlat])


def from_plane(xy, lat0):
    k = math.cos(math.radians(lat0))
    return [(x / k, y) for x, y in xy]


def sample_points(outline, n, rng, clusters):
    """Uniform points plus a share concentrated around cluster centres,
    which gives small urban districts like real administrative maps."""
    minx, miny, maxx, maxy = outline.bounds
    pts = []
    while len(pts) < n:
        if clusters and rng.random() < 0.35:
            cx, cy, s = clusters[rng.integers(len(clusters))]
            p = (rng.normal(cx, s), rng.normal(cy, s))
        else:
            p = (rng.uniform(minx, maxx), rng.uniform(miny, maxy))
        if outline.contains(Point(p)):
            pts.append(p)
    return np.array(pts)


def voronoi_cells(points, outline):
    minx, miny, maxx, maxy = outline.bounds
    span = max(maxx - minx, maxy - miny) * 10
    far = np.array([[minx - span, miny - span], [maxx + span, miny - span],
                    [maxx + span, maxy + span], [minx - span, maxy + span]])
    vor = Voronoi(np.vstack([points, far]))
    cells = []
    for i in range(len(points)):
        region = vor.regions[vor.point_region[i]]
        assert -1 not in region
        cells.append(Polygon(vor.vertices[region]))
    return cells


def lloyd(points, outline, iterations):
    for _ in range(iterations):
        cells = voronoi_cells(points, outline)
        moved = []
        for p, c in zip(points, cells):
            clipped = c.intersection(outline)
            moved.append(clipped.centroid.coords[0] if not clipped.is_empty else tuple(p))
        points = np.array(moved)
    return points


def largest_part(geom):
    if isinstance(geom, MultiPolygon):
        return max(geom.geoms, key=lambda g: g.area)
    return geom


def build(outline_lonlat, n, seed, clusters_lonlat, lloyd_iters):
    rng = np.random.default_rng(seed)
    lat0 = float(np.mean([p[1] for p in outline_lonlat]))
    outline = Polygon(to_plane(outline_lonlat, lat0)).buffer(0)
    clusters = [(lon * math.cos(math.radians(lat0)), lat, s) for lon, lat, s in clusters_lonlat]
    points = lloyd(sample_points(outline, n, rng, clusters), outline, lloyd_iters)
    cells = [largest_part(c.intersection(outline)) for c in voronoi_cells(points, outline)]
    # Rounding happens once, at output, so shared borders stay bit-identical.
    return cells, lat0


def ring_lonlat(coords, lat0):
    out = []
    for lon, lat in from_plane(coords, lat0):
        p = [round(lon, 6), round(lat, 6)]
        if not out or out[-1] != p:
            out.append(p)
    if out[0] != out[-1]:
        out.append(out[0])
    return out


def to_features(cells, lat0, prefix, label):
    features = []
    for i, cell in enumerate(cells):
        code = f"{prefix}{i + 1:03d}"
        rings = [ring_lonlat(cell.exterior.coords, lat0)]
        rings += [ring_lonlat(h.coords, lat0) for h in cell.interiors]
        features.append({
            "type": "Feature",
            "properties": {"code": code, "name": f"{label} {i + 1}"},
            "geometry": {"type": "Polygon", "coordinates": rings},
        })
    return features


def reference_density(cells, lat0, clusters_lonlat, seed):
    """Skewed densities: a few dense cluster peaks over a sparse background."""
    rng = np.random.default_rng(seed)
    k = math.cos(math.radians(lat0))
    out = []
    for cell in cells:
        x, y = cell.centroid.coords[0]
        v = 20.0
        for lon, lat, s in clusters_lonlat:
            d2 = (x - lon * k) ** 2 + (y - lat) ** 2
            v += 2500.0 * math.exp(-d2 / (2 * (2.5 * s) ** 2))
        v *= math.exp(rng.normal(0.0, 0.35))
        out.append(round(v, 3))
    return out


def write(out_dir, stem, cells, lat0, prefix, label, clusters, seed):
    features = to_features(cells, lat0, prefix, label)
    with open(out_dir / f"{stem}.geojson", "w") as f:
        json.dump({"type": "FeatureCollection", "features": features}, f, separators=(",", ":"))
        f.write("\n")
    values = reference_density(cells, lat0, clusters, seed)
    raw = {feat["properties"]["code"]: v for feat, v in zip(features, values)}
    with open(out_dir / f"{stem}_density.json", "w") as f:
        json.dump(raw, f, indent=1, sort_keys=True)
        f.write("\n")


def main():
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    uk_clusters = [(-0.12, 51.5, 0.25), (-2.24, 53.48, 0.2), (-1.9, 52.48, 0.2),
                   (-4.25, 55.86, 0.15), (-1.55, 53.8, 0.15), (-2.98, 53.4, 0.12),
                   (-1.6, 54.97, 0.12), (-3.18, 51.48, 0.1)]
    cells, lat0 = build(GREAT_BRITAIN, 391, 1901, uk_clusters, 3)
    write(out_dir, "uk_lad_synthetic", cells, lat0, "LAD", "District", uk_clusters, 1902)

    eu_clusters = [(2.35, 48.86, 0.8), (4.4, 50.85, 0.7), (6.9, 51.2, 0.8),
                   (9.2, 45.5, 0.7), (13.4, 52.5, 0.6), (-3.7, 40.4, 0.5),
                   (12.5, 41.9, 0.5), (16.4, 48.2, 0.5), (21.0, 52.2, 0.5)]
    cells, lat0 = build(CONTINENTAL_EUROPE, 116, 2801, eu_clusters, 4)
    write(out_dir, "eu_nuts1_synthetic", cells, lat0, "EU", "Region", eu_clusters, 2802)


if __name__ == "__main__":
    main()
