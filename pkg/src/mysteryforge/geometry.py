"""Axis-aligned clipping of map features to a bounding box.

Coordinates are (lat, lon) pairs; the box is (min_lat, min_lon, max_lat,
max_lon). Roads are clipped segment-wise (Liang-Barsky), building and water
polygons with Sutherland-Hodgman, landmarks by point filtering. Every output
point lies inside the box.
"""

from .model import MapFeature

_EPS = 1e-9


def point_in_box(point, box) -> bool:
    lat, lon = point
    min_lat, min_lon, max_lat, max_lon = box
    return min_lat - _EPS <= lat <= max_lat + _EPS and min_lon - _EPS <= lon <= max_lon + _EPS


def _clamp(point, box):
    lat, lon = point
    min_lat, min_lon, max_lat, max_lon = box
    return (min(max(lat, min_lat), max_lat), min(max(lon, min_lon), max_lon))


def clip_segment(p0, p1, box):
    """Liang-Barsky; returns the clipped (a, b) segment or None if outside."""
    min_lat, min_lon, max_lat, max_lon = box
    x0, y0 = p0
    x1, y1 = p1
    dx = x1 - x0
    dy = y1 - y0
    t0, t1 = 0.0, 1.0
    for p, q in (
        (-dx, x0 - min_lat),
        (dx, max_lat - x0),
        (-dy, y0 - min_lon),
        (dy, max_lon - y0),
    ):
        if abs(p) < _EPS:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            if t > t1:
                return None
            t0 = max(t0, t)
        else:
            if t < t0:
                return None
            t1 = min(t1, t)
    a = (x0 + t0 * dx, y0 + t0 * dy)
    b = (x0 + t1 * dx, y0 + t1 * dy)
    return (_clamp(a, box), _clamp(b, box))


def clip_polyline(points, box):
    """Clip an open polyline; returns a list of point runs inside the box."""
    runs = []
    current = []
    for p0, p1 in zip(points, points[1:]):
        seg = clip_segment(p0, p1, box)
        if seg is None:
            if len(current) >= 2:
                runs.append(tuple(current))
            current = []
            continue
        a, b = seg
        if not current:
            current = [a, b]
        elif current[-1] == a:
            current.append(b)
        else:
            if len(current) >= 2:
                runs.append(tuple(current))
            current = [a, b]
    if len(current) >= 2:
        runs.append(tuple(current))
    return runs


def clip_polygon(points, box):
    """Sutherland-Hodgman clip of a polygon against the box; may return ()."""
    min_lat, min_lon, max_lat, max_lon = box

    def clip_edge(poly, inside, intersect):
        out = []
        n = len(poly)
        for i in range(n):
            cur = poly[i]
            prev = poly[i - 1]
            cur_in = inside(cur)
            prev_in = inside(prev)
            if cur_in:
                if not prev_in:
                    out.append(intersect(prev, cur))
                out.append(cur)
            elif prev_in:
                out.append(intersect(prev, cur))
        return out

    def cross_lat(bound):
        def intersect(a, b):
            t = (bound - a[0]) / (b[0] - a[0])
            return (bound, a[1] + t * (b[1] - a[1]))

        return intersect

    def cross_lon(bound):
        def intersect(a, b):
            t = (bound - a[1]) / (b[1] - a[1])
            return (a[0] + t * (b[0] - a[0]), bound)

        return intersect

    poly = list(points)
    for inside, intersect in (
        (lambda p: p[0] >= min_lat - _EPS, cross_lat(min_lat)),
        (lambda p: p[0] <= max_lat + _EPS, cross_lat(max_lat)),
        (lambda p: p[1] >= min_lon - _EPS, cross_lon(min_lon)),
        (lambda p: p[1] <= max_lon + _EPS, cross_lon(max_lon)),
    ):
        if not poly:
            return ()
        poly = clip_edge(poly, inside, intersect)
    deduped = []
    for p in poly:
        clamped = _clamp(p, box)
        if not deduped or deduped[-1] != clamped:
            deduped.append(clamped)
    if len(deduped) >= 2 and deduped[0] == deduped[-1]:
        deduped.pop()
    return tuple(deduped) if len(deduped) >= 3 else ()


def clip_feature(feature: MapFeature, box) -> list:
    """Clip one feature; polylines may split into several features."""
    if feature.kind == "road":
        return [MapFeature("road", run) for run in clip_polyline(feature.points, box)]
    if feature.kind in ("building", "water"):
        clipped = clip_polygon(feature.points, box)
        return [MapFeature(feature.kind, clipped)] if clipped else []
    # landmark: keep in-box points only
    kept = tuple(p for p in feature.points if point_in_box(p, box))
    return [MapFeature("landmark", kept)] if kept else []
