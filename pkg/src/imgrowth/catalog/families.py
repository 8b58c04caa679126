"""Square-tiled pillow maps: an ``n x n`` grid on each face plus flaps.

Grid points are integer pairs in units of ``1/n``. A grid point ``(x, y)``
maps to the corner of the pillow given by the parities of ``x`` and ``y``:
``(0,0) -> 0``, ``(1,0) -> 1``, ``(1,1) -> inf``, ``(0,1) -> -1``. For odd
``n`` the four corners of the big square are therefore fixed.
"""

from __future__ import annotations

from ..subdivision import BLACK, WHITE, SubdivisionRule, RuleTile

POST = ("0", "1", "inf", "-1")  # counter-clockwise around the white 0-tile
_PARITY = {(0, 0): "0", (1, 0): "1", (1, 1): "inf", (0, 1): "-1"}


def _seam(n: int, left_flap: bool) -> list[list[tuple[int, int]]]:
    """Boundary of a face, split at the four postcritical corners."""
    bottom = [(0, 0), (0, -1), (1, -1), (1, 0)] + [(x, 0) for x in range(2, n + 1)]
    right = [(n, y) for y in range(n + 1)]
    top = [(x, n) for x in range(n, -1, -1)]
    left = [(0, y) for y in range(n, 0, -1)]
    left += [(-1, 1), (-1, 0), (0, 0)] if left_flap else [(0, 0)]
    return [bottom, right, top, left]


def _boundary_names(n: int, seam) -> dict:
    names = {(0, 0): "0", (n, 0): "1", (n, n): "inf", (0, n): "-1", (1, 0): "c0"}
    for y in range(1, n):
        names[(n, y)] = f"a{(y - 1) // 2}" if y % 2 else f"b{y // 2 - 1}"
    for side in seam:
        for pt in side:
            names.setdefault(pt, f"({pt[0]},{pt[1]})")
    return names


def pillow_rule(n: int, left_flap: bool, name: str) -> SubdivisionRule:
    if n < 3 or n % 2 == 0:
        raise ValueError("the grid size must be an odd integer >= 3")
    seam = _seam(n, left_flap)
    boundary = _boundary_names(n, seam)
    on_seam = {pt for side in seam for pt in side}
    squares = [(i, j) for i in range(n) for j in range(n)] + [(0, -1)]
    if left_flap:
        squares.append((-1, 0))

    def vname(pt, face):
        if pt in on_seam:
            return boundary[pt]
        return f"{'T' if face == WHITE else 'B'}({pt[0]},{pt[1]})"

    images = {}
    white, black = [], []
    for face in (WHITE, BLACK):
        for i, j in squares:
            pts = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]  # counter-clockwise in the plane
            if face == BLACK:
                pts = pts[::-1]  # the back face is seen mirrored
            corners = [vname(pt, face) for pt in pts]
            for pt, v in zip(pts, corners):
                images[v] = _PARITY[(pt[0] % 2, pt[1] % 2)]
            even = (i + j) % 2 == 0
            color = WHITE if even == (face == WHITE) else BLACK
            tag = "T" if face == WHITE else "B"
            tile = RuleTile(f"{tag}[{i},{j}]", color, face, tuple(corners))
            (white if color == WHITE else black).append(tile)
    gluing = tuple(tuple(boundary[pt] for pt in side) for side in seam)
    return SubdivisionRule(
        post_labels=POST,
        degree=len(squares),
        gluing=gluing,
        vertex_images=images,
        white_tiles=tuple(white),
        black_tiles=tuple(black),
        invariant_edges=(("1", "inf"),),
        generators={"a": "inf", "b": "1", "c": "-1", "z": "0"},
        name=name,
    )


def sierpinski_rule(n: int) -> SubdivisionRule:
    """Two flaps: at the bottom and on the left of the corner ``0``."""
    return pillow_rule(n, True, f"sierpinski-{n}")


def obstructed_rule(n: int) -> SubdivisionRule:
    """A single flap at the bottom of the corner ``0``."""
    return pillow_rule(n, False, f"obstructed-{n}")


def obstructed_curve(n: int) -> dict:
    """Preimages of a curve separating ``{0, 1}`` from ``{inf, -1}``.

    Inside the big square the preimage consists of ``n`` horizontal curves,
    each crossing ``n`` squares per face, hence of degree ``n`` and
    homotopic to the original curve. Inside the flap there is one more
    component of degree 1 that bounds a disk free of postcritical points.
    """
    comps = [{"degree": n, "peripheral": False, "homotopic": True} for _ in range(n)]
    comps.append({"degree": 1, "peripheral": True, "homotopic": False})
    return {"curve": "gamma", "components": comps}
