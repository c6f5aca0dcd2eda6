#!/usr/bin/env python3
"""Emit gnuplot-ready data for the parameter-plane region figure.

Writes one file per requested spin with the triangle boundary (closed
polyline), the mirrored PPT boundary, and a classification raster, plus a
file for the limit triangle.  Files carry comment headers naming the blocks,
so `plot "region_two_s_2.dat" index 0 with lines` works directly.
"""

import argparse
import os

import numpy as np

from isoqudit import (
    Point,
    classify,
    grid_axes,
    is_physical,
    is_ppt,
    limit_triangle,
    pt_image,
    region_triangle,
)


def write_region(path: str, two_s) -> None:
    tri = limit_triangle() if two_s is None else region_triangle(two_s)
    with open(path, "w") as fh:
        name = "limit" if two_s is None else f"two_s={two_s}"
        fh.write(f"# region boundary, {name}\n")
        fh.write("# index 0: physical triangle (closed)\n")
        for v in (*tri.vertices, tri.vertices[0]):
            fh.write(f"{v.alpha} {v.beta}\n")
        fh.write("\n\n# index 1: alpha-mirrored triangle (PPT overlay, closed)\n")
        for v in (*tri.vertices, tri.vertices[0]):
            m = pt_image(v)
            fh.write(f"{m.alpha} {m.beta}\n")


def write_raster(path: str, two_s: int, grid_n: int) -> None:
    alphas, betas = grid_axes(two_s, grid_n)
    codes = {"outside_svw": 0, "super_quantum": 1, "boundary_vw": 2,
             "boundary_ws_except_s": 3, "interior_classical": 4}
    with open(path, "w") as fh:
        fh.write(f"# classification raster, two_s={two_s}, grid={grid_n}\n")
        fh.write("# alpha beta physical ppt kind_code\n")
        for a in alphas:
            for b in betas:
                p = Point(float(a), float(b))
                phys = is_physical(two_s, p)
                ppt = is_ppt(two_s, p) if phys else False
                kind = classify(p).kind.value
                fh.write(f"{p.alpha} {p.beta} {int(phys)} {int(ppt)} {codes[kind]}\n")
            fh.write("\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="region_data")
    ap.add_argument("--spins", type=int, nargs="+", default=[2, 4, 8, 16],
                    metavar="TWO_S")
    ap.add_argument("--grid", type=int, default=80, help="raster resolution")
    args = ap.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    write_region(os.path.join(args.out_dir, "region_limit.dat"), None)
    for t in args.spins:
        write_region(os.path.join(args.out_dir, f"region_two_s_{t}.dat"), t)
        write_raster(os.path.join(args.out_dir, f"raster_two_s_{t}.dat"), t, args.grid)
    print(f"wrote {1 + 2 * len(args.spins)} files to {args.out_dir}/")


if __name__ == "__main__":
    main()
